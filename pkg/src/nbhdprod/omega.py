"""Pseudo-infinite sequences and the window checks built on them.

A point is an eventually-zero sequence over {0} + alphabet, stored as the
canonical finite tuple up to its last nonzero entry. The stabilization index
st is the first position from which everything is zero (st of the all-zero
sequence is 1). Around every point sits the family of sets

    U_k(alpha) = { beta | beta agrees with alpha up to max(k, st(alpha))
                          and f(alpha) R f(beta) }

where f deletes zeros and R is a tree-frame relation. These families form
filter bases (the chain U_k subset-of U_m for k >= m), carry a bounded
morphism onto the tree frame via f, and pair up into product points whose
interleave-and-untag image g lands in the fused tree frame. Every lemma-level
claim here is checked on finite enumeration windows with exact constructed
witnesses, never by sampling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable

from .kripke import (FrameKind, SymbolicTreeFrame, TaggedWord, Word,
                     _rel_on_tuples, enumerate_tagged_words, enumerate_words,
                     fusion_word_rel)
from .report import BudgetExceeded, Stopwatch, VerificationReport

DEFAULT_SEQ_BUDGET = 2_000_000


@dataclass(frozen=True)
class PseudoSeq:
    """Eventually-zero sequence in canonical form: stored holds the entries up
    to the last nonzero one (so it never ends in 0); everything after is 0."""

    stored: tuple[int, ...]
    branching: int
    signed: bool = False

    def __post_init__(self) -> None:
        if self.branching < 1:
            raise ValueError("branching must be >= 1")
        if self.stored and self.stored[-1] == 0:
            raise ValueError("stored entries must be canonical (no trailing zero)")
        for x in self.stored:
            if self.signed:
                ok = abs(x) <= self.branching
            else:
                ok = 0 <= x <= self.branching
            if not ok:
                raise ValueError(f"entry {x} invalid for branching {self.branching} "
                                 f"(signed={self.signed})")

    @property
    def st(self) -> int:
        """First index from which every entry is zero (1-indexed)."""
        return len(self.stored) + 1

    def entry(self, k: int) -> int:
        """The k-th entry, 1-indexed."""
        if k < 1:
            raise ValueError("positions are 1-indexed")
        return self.stored[k - 1] if k <= len(self.stored) else 0


def pseudo(entries: Iterable[int], branching: int, signed: bool = False) -> PseudoSeq:
    """Canonicalizing constructor: strips trailing zeros."""
    stored = list(entries)
    while stored and stored[-1] == 0:
        stored.pop()
    return PseudoSeq(tuple(stored), branching, signed)


def zero_seq(branching: int, signed: bool = False) -> PseudoSeq:
    return PseudoSeq((), branching, signed)


def _prefix_tuple(stored: tuple[int, ...], k: int) -> tuple[int, ...]:
    if k <= len(stored):
        return stored[:k]
    return stored + (0,) * (k - len(stored))


def prefix(alpha: PseudoSeq, k: int) -> tuple[int, ...]:
    """First k entries, zero-padded."""
    if k < 0:
        raise ValueError("prefix length must be >= 0")
    return _prefix_tuple(alpha.stored, k)


def forget_zeros(alpha: PseudoSeq) -> Word:
    """Delete all zeros; the word of materialized letters."""
    return Word(tuple(x for x in alpha.stored if x != 0), alpha.branching, alpha.signed)


def lift(w: Word) -> PseudoSeq:
    """Zero-free lift; forget_zeros(lift(w)) == w for every word."""
    return PseudoSeq(w.letters, w.branching, w.signed)


def enumerate_pseudo(branching: int, d: int, signed: bool = False, *,
                     budget: int = DEFAULT_SEQ_BUDGET) -> list[PseudoSeq]:
    """All sequences with support inside the first d positions, in shortlex
    order of the canonical stored tuples."""
    alphabet = tuple(range(-branching, branching + 1)) if signed \
        else tuple(range(branching + 1))
    if len(alphabet) ** d > budget:
        raise BudgetExceeded(f"{len(alphabet) ** d} sequences exceeds budget {budget}")
    nonzero = tuple(x for x in alphabet if x != 0)
    out = [PseudoSeq((), branching, signed)]
    for length in range(1, d + 1):
        for head in itertools.product(alphabet, repeat=length - 1):
            for last in nonzero:
                out.append(PseudoSeq(head + (last,), branching, signed))
    return out


@dataclass
class SymbolicSet:
    """A set of pseudo-sequences given by a membership predicate; enumeration
    lists exactly the members with support inside the first d positions."""

    branching: int
    signed: bool
    contains: Callable[[PseudoSeq], bool]

    def enumerate(self, d: int, *, budget: int = DEFAULT_SEQ_BUDGET) -> list[PseudoSeq]:
        return [x for x in enumerate_pseudo(self.branching, d, self.signed, budget=budget)
                if self.contains(x)]


def _u_fast(kind: FrameKind, a_stored: tuple[int, ...], a_fw: tuple[int, ...],
            b_stored: tuple[int, ...], b_fw: tuple[int, ...], k: int) -> bool:
    m = max(k, len(a_stored) + 1)
    if _prefix_tuple(a_stored, m) != _prefix_tuple(b_stored, m):
        return False
    return _rel_on_tuples(kind, a_fw, b_fw)


def _fw(stored: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x for x in stored if x != 0)


def u_contains(frame: SymbolicTreeFrame, alpha: PseudoSeq, k: int,
               beta: PseudoSeq) -> bool:
    """Membership in U_k(alpha): prefix agreement up to max(k, st(alpha)) and
    f(alpha) R f(beta)."""
    if alpha.branching != frame.branching or beta.branching != frame.branching:
        raise ValueError("sequence branching does not match the frame")
    if alpha.signed != beta.signed:
        raise ValueError("cannot mix signed and unsigned sequences")
    if k < 0:
        raise ValueError("index must be >= 0")
    return _u_fast(frame.kind, alpha.stored, _fw(alpha.stored),
                   beta.stored, _fw(beta.stored), k)


def u_set(frame: SymbolicTreeFrame, alpha: PseudoSeq, k: int) -> SymbolicSet:
    return SymbolicSet(alpha.branching, alpha.signed,
                       lambda beta: u_contains(frame, alpha, k, beta))


def _seq_json(alpha: PseudoSeq) -> list[int]:
    return list(alpha.stored)


# --- chain lemma -----------------------------------------------------------------

def check_chain(frame: SymbolicTreeFrame, d: int, k_max: int, *,
                reverse_inclusion: bool = False,
                budget: int = DEFAULT_SEQ_BUDGET) -> VerificationReport:
    """U_k(alpha) subset-of U_m(alpha) for all m <= k <= k_max, on the window
    of sequences with support <= d.

    reverse_inclusion checks U_m subset-of U_k instead; that direction is
    false and serves as a detector self-test.
    """
    report = VerificationReport(
        lemma="chain",
        params={"kind": frame.kind.value, "branching": frame.branching, "d": d,
                "k_max": k_max, "reverse_inclusion": reverse_inclusion})
    with Stopwatch(report):
        universe = enumerate_pseudo(frame.branching, d, budget=budget)
        cooked = [(a.stored, _fw(a.stored)) for a in universe]
        for ai, (a_stored, a_fw) in enumerate(cooked):
            masks = []
            for k in range(k_max + 1):
                mask = 0
                for bi, (b_stored, b_fw) in enumerate(cooked):
                    if _u_fast(frame.kind, a_stored, a_fw, b_stored, b_fw, k):
                        mask |= 1 << bi
                masks.append(mask)
            for m in range(k_max + 1):
                for k in range(m, k_max + 1):
                    report.checked += 1
                    small, large = (masks[m], masks[k]) if reverse_inclusion \
                        else (masks[k], masks[m])
                    stray = small & ~large
                    if stray:
                        bi = stray.bit_length() - 1
                        report.fail({"alpha": _seq_json(universe[ai]), "m": m, "k": k,
                                     "beta": _seq_json(universe[bi])})
                        return report
    return report


# --- bounded morphism onto the tree frame ----------------------------------------

def verify_ff_morphism(frame: SymbolicTreeFrame, d: int, *,
                       budget: int = DEFAULT_SEQ_BUDGET) -> VerificationReport:
    """The zero-forgetting map is a surjective bounded morphism, verified on
    the window by exact witnesses:

    surjectivity  lift(w) maps back onto every word w;
    forward       every member of every U_k(alpha) lands in R(f(alpha));
    covering      every R-successor w of f(alpha) is hit from inside
                  U_k(alpha) by prefix(alpha, max(k, st(alpha))) + suffix,
                  where suffix extends f(alpha) to w.
    """
    report = VerificationReport(
        lemma="ff-morphism",
        params={"kind": frame.kind.value, "branching": frame.branching, "d": d})
    with Stopwatch(report):
        words = enumerate_words(frame.branching, d, budget=budget)
        surjectivity = forward = covering = 0
        for w in words:
            surjectivity += 1
            if forget_zeros(lift(w)) != w:
                report.checked = surjectivity + forward + covering
                report.fail({"layer": "surjectivity", "word": list(w.letters)})
                return report
        universe = enumerate_pseudo(frame.branching, d, budget=budget)
        cooked = [(a.stored, _fw(a.stored)) for a in universe]
        for ai, (a_stored, a_fw) in enumerate(cooked):
            for k in range(d + 1):
                for bi, (b_stored, b_fw) in enumerate(cooked):
                    if not _u_fast(frame.kind, a_stored, a_fw, b_stored, b_fw, k):
                        continue
                    forward += 1
                    if not _rel_on_tuples(frame.kind, a_fw, b_fw):
                        report.checked = surjectivity + forward + covering
                        report.fail({"layer": "forward",
                                     "alpha": list(a_stored), "k": k,
                                     "beta": list(b_stored)})
                        return report
                m = max(k, len(a_stored) + 1)
                for w in words:
                    if not _rel_on_tuples(frame.kind, a_fw, w.letters):
                        continue
                    covering += 1
                    suffix = w.letters[len(a_fw):]
                    beta = pseudo(_prefix_tuple(a_stored, m) + suffix, frame.branching)
                    ok = (_u_fast(frame.kind, a_stored, a_fw,
                                  beta.stored, _fw(beta.stored), k)
                          and _fw(beta.stored) == w.letters)
                    if not ok:
                        report.checked = surjectivity + forward + covering
                        report.fail({"layer": "covering",
                                     "alpha": list(a_stored), "k": k,
                                     "target": list(w.letters),
                                     "witness": _seq_json(beta)})
                        return report
        report.checked = surjectivity + forward + covering
        report.params["layers"] = {"surjectivity": surjectivity,
                                   "forward": forward, "covering": covering}
    return report


_EVIDENCE_KINDS: dict[str, tuple[FrameKind, ...]] = {
    "d": (FrameKind.IN, FrameKind.IT),
    "t": (FrameKind.RN, FrameKind.RT),
    "four": (FrameKind.IT, FrameKind.RT),
}


def axiom_evidence(frame: SymbolicTreeFrame, d: int, evidence: str | None = None, *,
                   budget: int = DEFAULT_SEQ_BUDGET) -> VerificationReport:
    """Window evidence that the U_k families validate the structural axioms
    the frame kind promises.

    d     every U_k(alpha) owns the member prefix + letter 1 (nonempty);
    t     alpha itself is in every U_k(alpha) (reflexive kinds);
    four  members of U_{max(k, st(y))}(y) for y in U_m(alpha) stay inside
          U_m(alpha) (transitive kinds), with k pinned at the index that the
          prefix constraint actually requires.
    """
    if evidence is None:
        kinds = [name for name, ks in _EVIDENCE_KINDS.items() if frame.kind in ks]
    else:
        if evidence not in _EVIDENCE_KINDS:
            raise ValueError(f"unknown evidence {evidence!r}")
        if frame.kind not in _EVIDENCE_KINDS[evidence]:
            raise ValueError(f"evidence {evidence!r} inapplicable to kind "
                             f"{frame.kind.value}")
        kinds = [evidence]
    report = VerificationReport(
        lemma="axiom-evidence",
        params={"kind": frame.kind.value, "branching": frame.branching, "d": d,
                "evidence": kinds})
    with Stopwatch(report):
        universe = enumerate_pseudo(frame.branching, d, budget=budget)
        cooked = [(a.stored, _fw(a.stored)) for a in universe]
        if "d" in kinds:
            for a_stored, a_fw in cooked:
                for k in range(d + 1):
                    report.checked += 1
                    m = max(k, len(a_stored) + 1)
                    wit = pseudo(_prefix_tuple(a_stored, m) + (1,), frame.branching)
                    if not _u_fast(frame.kind, a_stored, a_fw,
                                   wit.stored, _fw(wit.stored), k):
                        report.fail({"evidence": "d", "alpha": list(a_stored),
                                     "k": k, "witness": _seq_json(wit)})
                        return report
        if "t" in kinds:
            for a_stored, a_fw in cooked:
                for k in range(d + 1):
                    report.checked += 1
                    if not _u_fast(frame.kind, a_stored, a_fw, a_stored, a_fw, k):
                        report.fail({"evidence": "t", "alpha": list(a_stored), "k": k})
                        return report
        if "four" in kinds:
            # membership masks for every point at every index this sweep needs
            max_k = d + 1
            masks: list[list[int]] = []
            for a_stored, a_fw in cooked:
                row = []
                for k in range(max_k + 1):
                    mask = 0
                    for bi, (b_stored, b_fw) in enumerate(cooked):
                        if _u_fast(frame.kind, a_stored, a_fw, b_stored, b_fw, k):
                            mask |= 1 << bi
                    row.append(mask)
                masks.append(row)
            for ai, (a_stored, a_fw) in enumerate(cooked):
                for m in range(d + 1):
                    big_m = max(m, len(a_stored) + 1)
                    members = masks[ai][m]
                    yi_mask = members
                    while yi_mask:
                        yi = yi_mask.bit_length() - 1
                        yi_mask &= ~(1 << yi)
                        y_stored, _ = cooked[yi]
                        # big_m <= d + 1 and st(y) <= d + 1, so ky stays in the table
                        ky = max(big_m, len(y_stored) + 1)
                        report.checked += 1
                        stray = masks[yi][ky] & ~members
                        if stray:
                            bi = stray.bit_length() - 1
                            report.fail({"evidence": "four",
                                         "alpha": list(a_stored), "m": m,
                                         "y": _seq_json(universe[yi]),
                                         "z": _seq_json(universe[bi])})
                            return report
    return report


# --- product points and the interleaving map -------------------------------------

@dataclass(frozen=True)
class ProductPoint:
    first: PseudoSeq
    second: PseudoSeq


def point_json(p: ProductPoint) -> dict[str, list[int]]:
    return {"first": _seq_json(p.first), "second": _seq_json(p.second)}


def g_map(p: ProductPoint) -> TaggedWord:
    """Interleave the coordinates position by position (first coordinate
    before second), delete zeros, tag every surviving letter with its side."""
    a, b = p.first.stored, p.second.stored
    letters: list[tuple[int, int]] = []
    for slot in range(max(len(a), len(b))):
        x = a[slot] if slot < len(a) else 0
        y = b[slot] if slot < len(b) else 0
        if x:
            letters.append((1, x))
        if y:
            letters.append((2, y))
    return TaggedWord(tuple(letters), (p.first.branching, p.second.branching))


def g_preimage(z: TaggedWord) -> ProductPoint:
    """Canonical preimage: the letter in slot i goes to position i of its own
    coordinate, zeros everywhere else."""
    b1, b2 = z.branchings
    xs = [0] * len(z.letters)
    ys = [0] * len(z.letters)
    for slot, (side, letter) in enumerate(z.letters):
        if side == 1:
            xs[slot] = letter
        else:
            ys[slot] = letter
    return ProductPoint(pseudo(xs, b1), pseudo(ys, b2))


def product_u_contains(frame1: SymbolicTreeFrame, frame2: SymbolicTreeFrame,
                       i: int, base_point: ProductPoint, m: int,
                       q: ProductPoint) -> bool:
    """Membership in the modality-i base set with index m at base_point:
    the moving coordinate ranges over U_m, the other coordinate is pinned."""
    if i == 1:
        return q.second == base_point.second and \
            u_contains(frame1, base_point.first, m, q.first)
    if i == 2:
        return q.first == base_point.first and \
            u_contains(frame2, base_point.second, m, q.second)
    raise ValueError(f"modality index {i} out of range (1, 2)")


def verify_g_morphism(frame1: SymbolicTreeFrame, frame2: SymbolicTreeFrame,
                      d: int, *, budget: int = DEFAULT_SEQ_BUDGET) -> VerificationReport:
    """The interleaving map is a surjective bounded morphism from the product
    of two sequence spaces onto the fused tree frame, on the window:

    surjectivity  g(g_preimage(z)) == z for every tagged word with len <= d;
    forward       base-set members map into the fused relation image;
    covering      every fused successor g(p).c (c written on one side) is hit
                  by the exact witness prefix + c on the moving coordinate.

    The base-set index m ranges over max(st(first), st(second)) + 1 .. d; the
    interleave only splits cleanly past the stabilization of both coordinates.
    """
    report = VerificationReport(
        lemma="g-morphism",
        params={"kind1": frame1.kind.value, "kind2": frame2.kind.value,
                "branching1": frame1.branching, "branching2": frame2.branching,
                "d": d})
    with Stopwatch(report):
        b1, b2 = frame1.branching, frame2.branching
        surjectivity = forward = covering = 0
        for z in enumerate_tagged_words(b1, b2, d, budget=budget):
            surjectivity += 1
            if g_map(g_preimage(z)) != z:
                report.checked = surjectivity
                report.fail({"layer": "surjectivity",
                             "tagged": [list(t) for t in z.letters]})
                return report
        side_universe = {1: enumerate_pseudo(b1, d, budget=budget),
                         2: enumerate_pseudo(b2, d, budget=budget)}
        side_frame = {1: frame1, 2: frame2}
        # successor words () R c per side, inside the window
        side_steps = {
            i: [w for w in enumerate_words(side_frame[i].branching, d, budget=budget)
                if _rel_on_tuples(side_frame[i].kind, (), w.letters)]
            for i in (1, 2)}
        g_cache: dict[tuple[PseudoSeq, PseudoSeq], TaggedWord] = {}

        def g_of(a: PseudoSeq, b: PseudoSeq) -> TaggedWord:
            hit = g_cache.get((a, b))
            if hit is None:
                hit = g_map(ProductPoint(a, b))
                g_cache[(a, b)] = hit
            return hit

        members_cache: dict[tuple[int, PseudoSeq, int], list[PseudoSeq]] = {}

        def members_of(i: int, anchor: PseudoSeq, m: int) -> list[PseudoSeq]:
            key = (i, anchor, m)
            hit = members_cache.get(key)
            if hit is None:
                frame = side_frame[i]
                hit = [c for c in side_universe[i] if u_contains(frame, anchor, m, c)]
                members_cache[key] = hit
            return hit

        for alpha in side_universe[1]:
            for beta in side_universe[2]:
                lo = max(alpha.st, beta.st) + 1
                if lo > d:
                    continue
                image = g_of(alpha, beta)
                for m in range(lo, d + 1):
                    for i in (1, 2):
                        moving_anchor = alpha if i == 1 else beta
                        for member in members_of(i, moving_anchor, m):
                            q = (member, beta) if i == 1 else (alpha, member)
                            forward += 1
                            if not fusion_word_rel(frame1, frame2, i, image,
                                                   g_of(*q)):
                                report.checked = surjectivity + forward + covering
                                report.fail({
                                    "layer": "forward", "modality": i, "m": m,
                                    "point": point_json(ProductPoint(alpha, beta)),
                                    "member": point_json(ProductPoint(*q))})
                                return report
                        for c in side_steps[i]:
                            covering += 1
                            target = image.letters + tuple((i, x) for x in c.letters)
                            anchor = alpha if i == 1 else beta
                            moved = pseudo(_prefix_tuple(anchor.stored, m) + c.letters,
                                           anchor.branching)
                            q = ProductPoint(moved, beta) if i == 1 \
                                else ProductPoint(alpha, moved)
                            ok = (product_u_contains(frame1, frame2, i,
                                                     ProductPoint(alpha, beta), m, q)
                                  and g_of(q.first, q.second).letters == target)
                            if not ok:
                                report.checked = surjectivity + forward + covering
                                report.fail({
                                    "layer": "covering", "modality": i, "m": m,
                                    "point": point_json(ProductPoint(alpha, beta)),
                                    "step": list(c.letters),
                                    "witness": point_json(q)})
                                return report
        report.checked = surjectivity + forward + covering
        report.params["layers"] = {"surjectivity": surjectivity,
                                   "forward": forward, "covering": covering}
    return report


# --- lexicographic order on the signed alphabet -----------------------------------

def _require_signed_pair(a: PseudoSeq, b: PseudoSeq) -> None:
    if not (a.signed and b.signed):
        raise ValueError("order operations need signed sequences")
    if a.branching != b.branching:
        raise ValueError("branching mismatch")


def lex_compare(a: PseudoSeq, b: PseudoSeq) -> int:
    """-1, 0 or 1 by the first differing materialized position; zero padding
    sits strictly between negative and positive letters."""
    _require_signed_pair(a, b)
    n = max(len(a.stored), len(b.stored))
    ta = _prefix_tuple(a.stored, n)
    tb = _prefix_tuple(b.stored, n)
    if ta < tb:
        return -1
    if ta > tb:
        return 1
    return 0


def lex_between(a: PseudoSeq, b: PseudoSeq) -> PseudoSeq:
    """A point strictly between a < b: copy b up to max(st(a), st(b)), then
    write -1. Post-checked; density of the order is what makes it work."""
    _require_signed_pair(a, b)
    if lex_compare(a, b) != -1:
        raise ValueError("lex_between needs a < b")
    big_k = max(a.st, b.st)
    gamma = pseudo(_prefix_tuple(b.stored, big_k) + (-1,), b.branching, signed=True)
    if not (lex_compare(a, gamma) == -1 and lex_compare(gamma, b) == -1):
        raise RuntimeError("lex_between postcondition failed")  # unreachable
    return gamma


def strict_bounds_witnesses(alpha: PseudoSeq) -> tuple[PseudoSeq, PseudoSeq]:
    """A member strictly below and one strictly above alpha (the order has no
    endpoints): write -1 or +1 right after the stabilization point."""
    if not alpha.signed:
        raise ValueError("order operations need signed sequences")
    below = pseudo(_prefix_tuple(alpha.stored, alpha.st) + (-1,),
                   alpha.branching, signed=True)
    above = pseudo(_prefix_tuple(alpha.stored, alpha.st) + (1,),
                   alpha.branching, signed=True)
    return below, above


def lex_window_compare(frame: SymbolicTreeFrame, alpha: PseudoSeq, k: int, d: int, *,
                       k_max: int | None = None,
                       anchor_left_closed: bool = False,
                       budget: int = DEFAULT_SEQ_BUDGET) -> VerificationReport:
    """Order-topology window check for the transitive kinds.

    interval-inside      the open interval around prefix(alpha, max(k, st))
                         padded with -1 / +1 sits inside U_k(alpha) (rt), or
                         inside U_k(alpha) + {alpha} with alpha itself excluded
                         from U_k(alpha) (it, punctured);
    neighborhood-inside  every enumerated open interval (l, r) containing
                         alpha contains some U_k'(alpha) restricted to the
                         window, k' <= k_max (default d + 1). Windows where
                         U_k'(alpha) is empty discharge vacuously; the report
                         counts those.

    anchor_left_closed is the negative control: the second layer then tests
    half-closed intervals [alpha, r). Every nonempty neighborhood reaches
    strictly below its center as long as the witness prefix fits the window,
    so control runs want k_max <= d - 1 (and st(alpha) <= d - 1); at larger
    k' the window collapses U_k'(alpha) to {alpha} and the violation hides.
    """
    if not frame.kind.transitive:
        raise ValueError("order window checks need a transitive kind (it or rt)")
    if not alpha.signed or alpha.branching != frame.branching:
        raise ValueError("alpha must be signed with the frame's branching")
    if k_max is None:
        k_max = d + 1
    report = VerificationReport(
        lemma="lex-window",
        params={"kind": frame.kind.value, "branching": frame.branching,
                "alpha": _seq_json(alpha), "k": k, "d": d, "k_max": k_max,
                "anchor_left_closed": anchor_left_closed})
    with Stopwatch(report):
        universe = enumerate_pseudo(frame.branching, d, signed=True, budget=budget)
        punctured = frame.kind is FrameKind.IT
        m = max(k, alpha.st)
        p = _prefix_tuple(alpha.stored, m)
        left = pseudo(p + (-1,), frame.branching, signed=True)
        right = pseudo(p + (1,), frame.branching, signed=True)
        if punctured:
            report.checked += 1
            if u_contains(frame, alpha, k, alpha):
                report.fail({"layer": "interval-inside",
                             "reason": "alpha not excluded", "k": k})
                return report
        for gamma in universe:
            if not (lex_compare(left, gamma) == -1 and lex_compare(gamma, right) == -1):
                continue
            report.checked += 1
            ok = u_contains(frame, alpha, k, gamma) or (punctured and gamma == alpha)
            if not ok:
                report.fail({"layer": "interval-inside", "k": k,
                             "gamma": _seq_json(gamma)})
                return report
        # min and max member of each U_k'(alpha) on the window: the interval
        # test below only needs the extremes because intervals are convex
        extremes: list[tuple[PseudoSeq, PseudoSeq] | None] = []
        for kp in range(k_max + 1):
            members = [x for x in universe if u_contains(frame, alpha, kp, x)]
            if not members:
                extremes.append(None)
                continue
            lo = hi = members[0]
            for x in members[1:]:
                if lex_compare(x, lo) == -1:
                    lo = x
                if lex_compare(hi, x) == -1:
                    hi = x
            extremes.append((lo, hi))
        vacuous = 0
        above = [x for x in universe if lex_compare(alpha, x) == -1]
        if anchor_left_closed:
            pairs: Iterable[tuple[PseudoSeq, PseudoSeq]] = ((alpha, r) for r in above)
        else:
            below = [x for x in universe if lex_compare(x, alpha) == -1]
            pairs = itertools.product(below, above)
        for l, r in pairs:
            report.checked += 1
            found = False
            for ext in extremes:
                if ext is None:
                    found = True  # empty neighborhood, vacuously inside
                    vacuous += 1
                    break
                lo, hi = ext
                if anchor_left_closed:
                    left_ok = lex_compare(lo, l) != -1
                else:
                    left_ok = lex_compare(l, lo) == -1
                if left_ok and lex_compare(hi, r) == -1:
                    found = True
                    break
            if not found:
                report.fail({"layer": "neighborhood-inside",
                             "l": _seq_json(l), "r": _seq_json(r),
                             "left_closed": anchor_left_closed})
                return report
        report.params["vacuous_intervals"] = vacuous
    return report
