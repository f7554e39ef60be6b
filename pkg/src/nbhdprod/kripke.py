"""Finite Kripke frames and the symbolic infinite tree frames over words.

The four tree frames live on finite words over an alphabet {1..b} (or the
signed alphabet {-b..-1, 1..b} for order work): the relation is one-step
extension (in), its reflexive closure (rn), its transitive closure (it), or
its reflexive-transitive closure (rt). All four satisfy the fractal law
  a R (a.c)  iff  () R c
which is what makes window checks on word length meaningful.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping

from .formula import Atom, Bottom, Box, Formula, Implies
from .report import BudgetExceeded, Stopwatch, VerificationReport

DEFAULT_WORD_BUDGET = 500_000


class FrameKind(Enum):
    IN = "in"
    RN = "rn"
    IT = "it"
    RT = "rt"

    @property
    def reflexive(self) -> bool:
        return self in (FrameKind.RN, FrameKind.RT)

    @property
    def transitive(self) -> bool:
        return self in (FrameKind.IT, FrameKind.RT)


@dataclass(frozen=True)
class Word:
    """A finite word; letters in 1..b, or in +-1..+-b when signed."""

    letters: tuple[int, ...]
    branching: int
    signed: bool = False

    def __post_init__(self) -> None:
        if self.branching < 1:
            raise ValueError("branching must be >= 1")
        for x in self.letters:
            if self.signed:
                ok = x != 0 and abs(x) <= self.branching
            else:
                ok = 1 <= x <= self.branching
            if not ok:
                raise ValueError(f"letter {x} invalid for branching {self.branching} "
                                 f"(signed={self.signed})")

    def __len__(self) -> int:
        return len(self.letters)


def word(letters: Iterable[int], branching: int, signed: bool = False) -> Word:
    return Word(tuple(letters), branching, signed)


@dataclass(frozen=True)
class SymbolicTreeFrame:
    kind: FrameKind
    branching: int

    def __post_init__(self) -> None:
        if self.branching < 1:
            raise ValueError("branching must be >= 1")


def _rel_on_tuples(kind: FrameKind, u: tuple[int, ...], v: tuple[int, ...]) -> bool:
    extends = len(v) >= len(u) and v[:len(u)] == u
    step = len(v) - len(u)
    if kind is FrameKind.IN:
        return extends and step == 1
    if kind is FrameKind.RN:
        return extends and step <= 1
    if kind is FrameKind.IT:
        return extends and step >= 1
    return extends  # RT


def word_rel(frame: SymbolicTreeFrame, u: Word, v: Word) -> bool:
    if u.branching != frame.branching or v.branching != frame.branching:
        raise ValueError("word branching does not match the frame")
    if u.signed != v.signed:
        raise ValueError("cannot relate signed and unsigned words")
    return _rel_on_tuples(frame.kind, u.letters, v.letters)


def enumerate_words(branching: int, depth: int, *, signed: bool = False,
                    budget: int = DEFAULT_WORD_BUDGET) -> list[Word]:
    """All words of length <= depth in shortlex order."""
    alphabet = _alphabet(branching, signed)
    total, width = 1, 1
    for _ in range(depth):
        width *= len(alphabet)
        total += width
    if total > budget:
        raise BudgetExceeded(f"{total} words exceeds budget {budget}")
    out = [Word((), branching, signed)]
    layer: list[tuple[int, ...]] = [()]
    for _ in range(depth):
        layer = [prev + (x,) for prev in layer for x in alphabet]
        out.extend(Word(t, branching, signed) for t in layer)
    return out


def _alphabet(branching: int, signed: bool) -> tuple[int, ...]:
    if signed:
        return tuple(range(-branching, 0)) + tuple(range(1, branching + 1))
    return tuple(range(1, branching + 1))


def check_fractal(frame: SymbolicTreeFrame, depth: int, *,
                  lhs_kind: FrameKind | None = None,
                  budget: int = DEFAULT_WORD_BUDGET) -> VerificationReport:
    """Window check of  a R (a.c) iff () R c  for all len(a)+len(c) <= depth.

    lhs_kind evaluates the left-hand relation with a different kind; that is a
    detector self-test (mixing kinds must produce a violation), not a lemma.
    """
    left = frame.kind if lhs_kind is None else lhs_kind
    report = VerificationReport(
        lemma="fractal",
        params={"kind": frame.kind.value, "branching": frame.branching,
                "depth": depth, "lhs_kind": left.value},
    )
    with Stopwatch(report):
        words = enumerate_words(frame.branching, depth, budget=budget)
        for a in words:
            for c in words:
                if len(a) + len(c) > depth:
                    continue
                lhs = _rel_on_tuples(left, a.letters, a.letters + c.letters)
                rhs = _rel_on_tuples(frame.kind, (), c.letters)
                report.checked += 1
                if lhs != rhs:
                    report.fail({"a": list(a.letters), "c": list(c.letters),
                                 "lhs": lhs, "rhs": rhs})
                    return report
    return report


# --- fusion of two tree frames on tagged words -------------------------------

@dataclass(frozen=True)
class TaggedWord:
    """A word over the disjoint union of two alphabets; letters are
    (side, letter) pairs with side in {1, 2}."""

    letters: tuple[tuple[int, int], ...]
    branchings: tuple[int, int]

    def __post_init__(self) -> None:
        b1, b2 = self.branchings
        if b1 < 1 or b2 < 1:
            raise ValueError("branching must be >= 1")
        for side, letter in self.letters:
            if side not in (1, 2):
                raise ValueError(f"side {side} invalid")
            if not 1 <= letter <= self.branchings[side - 1]:
                raise ValueError(f"letter {letter} invalid for side {side}")

    def __len__(self) -> int:
        return len(self.letters)


def tagged_word(letters: Iterable[tuple[int, int]], b1: int, b2: int) -> TaggedWord:
    return TaggedWord(tuple((s, x) for s, x in letters), (b1, b2))


def enumerate_tagged_words(b1: int, b2: int, depth: int, *,
                           budget: int = DEFAULT_WORD_BUDGET) -> list[TaggedWord]:
    alphabet = [(1, x) for x in range(1, b1 + 1)] + [(2, x) for x in range(1, b2 + 1)]
    total, width = 1, 1
    for _ in range(depth):
        width *= len(alphabet)
        total += width
    if total > budget:
        raise BudgetExceeded(f"{total} tagged words exceeds budget {budget}")
    out = [TaggedWord((), (b1, b2))]
    layer: list[tuple[tuple[int, int], ...]] = [()]
    for _ in range(depth):
        layer = [prev + (x,) for prev in layer for x in alphabet]
        out.extend(TaggedWord(t, (b1, b2)) for t in layer)
    return out


def fusion_word_rel(frame1: SymbolicTreeFrame, frame2: SymbolicTreeFrame,
                    i: int, u: TaggedWord, v: TaggedWord) -> bool:
    """Modality-i relation of the fused frame: v = u.z for a z written
    entirely in side i's alphabet with () R_i untag(z)."""
    if i not in (1, 2):
        raise ValueError(f"modality index {i} out of range (1, 2)")
    if u.branchings != (frame1.branching, frame2.branching) or u.branchings != v.branchings:
        raise ValueError("tagged word branchings do not match the frames")
    if len(v) < len(u) or v.letters[:len(u)] != u.letters:
        return False
    z = v.letters[len(u):]
    if any(side != i for side, _ in z):
        return False
    frame = frame1 if i == 1 else frame2
    return _rel_on_tuples(frame.kind, (), tuple(letter for _, letter in z))


# --- finite Kripke frames -----------------------------------------------------

@dataclass
class FiniteKripkeFrame:
    worlds: tuple[str, ...]
    rel: dict[int, frozenset[tuple[str, str]]]

    def __post_init__(self) -> None:
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world names")
        wset = set(self.worlds)
        for i, pairs in self.rel.items():
            if i not in (1, 2):
                raise ValueError(f"modality index {i} out of range (1, 2)")
            for a, b in pairs:
                if a not in wset or b not in wset:
                    raise ValueError(f"relation {i} mentions unknown world in {(a, b)}")

    @property
    def modalities(self) -> tuple[int, ...]:
        return tuple(sorted(self.rel))

    def successors(self, i: int, w: str) -> frozenset[str]:
        return frozenset(b for a, b in self.rel.get(i, frozenset()) if a == w)

    def to_dict(self) -> dict[str, Any]:
        return {
            "worlds": list(self.worlds),
            "rel": {str(i): sorted([a, b] for a, b in self.rel[i])
                    for i in sorted(self.rel)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FiniteKripkeFrame":
        worlds = tuple(data["worlds"])
        rel = {int(i): frozenset((a, b) for a, b in pairs)
               for i, pairs in data["rel"].items()}
        return cls(worlds, rel)


@dataclass(frozen=True)
class FrameProps:
    serial: bool
    reflexive: bool
    transitive: bool


def frame_props(frame: FiniteKripkeFrame) -> dict[int, FrameProps]:
    """Seriality, reflexivity, transitivity of each relation, by full scan."""
    out: dict[int, FrameProps] = {}
    for i in frame.modalities:
        succ = {w: frame.successors(i, w) for w in frame.worlds}
        serial = all(succ[w] for w in frame.worlds)
        reflexive = all(w in succ[w] for w in frame.worlds)
        transitive = all(succ[v] <= succ[w] for w in frame.worlds for v in succ[w])
        out[i] = FrameProps(serial, reflexive, transitive)
    return out


def _kripke_masks(frame: FiniteKripkeFrame) -> tuple[dict[str, int], dict[int, list[int]]]:
    index = {w: n for n, w in enumerate(frame.worlds)}
    succ_masks: dict[int, list[int]] = {}
    for i in frame.modalities:
        masks = [0] * len(frame.worlds)
        for a, b in frame.rel[i]:
            masks[index[a]] |= 1 << index[b]
        succ_masks[i] = masks
    return index, succ_masks


def _denotation_mask(phi: Formula, atom_masks: Mapping[str, int],
                     succ_masks: Mapping[int, list[int]], n: int, full: int,
                     cache: dict[Formula, int]) -> int:
    hit = cache.get(phi)
    if hit is not None:
        return hit
    if isinstance(phi, Bottom):
        out = 0
    elif isinstance(phi, Atom):
        if phi.name not in atom_masks:
            raise ValueError(f"unknown atom {phi.name!r}")
        out = atom_masks[phi.name]
    elif isinstance(phi, Implies):
        left = _denotation_mask(phi.left, atom_masks, succ_masks, n, full, cache)
        right = _denotation_mask(phi.right, atom_masks, succ_masks, n, full, cache)
        out = (full & ~left) | right
    else:
        if not isinstance(phi, Box):
            raise TypeError(f"not a formula: {phi!r}")
        if phi.index not in succ_masks:
            raise ValueError(f"frame has no modality {phi.index}")
        body = _denotation_mask(phi.body, atom_masks, succ_masks, n, full, cache)
        masks = succ_masks[phi.index]
        out = 0
        for w in range(n):
            if masks[w] & ~body == 0:
                out |= 1 << w
    cache[phi] = out
    return out


def denotation(frame: FiniteKripkeFrame, valuation: Mapping[str, Iterable[str]],
               phi: Formula) -> frozenset[str]:
    """Worlds where phi holds under the relational box clause."""
    index, succ_masks = _kripke_masks(frame)
    n = len(frame.worlds)
    full = (1 << n) - 1
    atom_masks: dict[str, int] = {}
    for name, ws in valuation.items():
        mask = 0
        for w in ws:
            if w not in index:
                raise ValueError(f"unknown world {w!r} in valuation")
            mask |= 1 << index[w]
        atom_masks[name] = mask
    out = _denotation_mask(phi, atom_masks, succ_masks, n, full, {})
    return frozenset(w for w, k in index.items() if out >> k & 1)


def satisfies(frame: FiniteKripkeFrame, valuation: Mapping[str, Iterable[str]],
              w: str, phi: Formula) -> bool:
    if w not in frame.worlds:
        raise ValueError(f"unknown world {w!r}")
    return w in denotation(frame, valuation, phi)
