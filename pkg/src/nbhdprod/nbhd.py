"""Finite monotone neighborhood frames given by filter bases.

A frame assigns every world, for each modality, a finite list of base sets;
the neighborhood family at the world is the set of all supersets of base
sets (a filter when the base list satisfies the pairwise-domination
property). Box is the monotone clause: [i]f holds at x iff some base set of
modality i at x is contained in the truth set of f. Empty base sets are
allowed; they make the filter improper, which is exactly how seriality (the
D axiom) can fail.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .formula import (Atom, Bottom, Box, Formula, Implies, atoms,
                      generate_formulas, modalities_of, unparse)
from .kripke import FiniteKripkeFrame
from .report import BudgetExceeded, Stopwatch, VerificationReport

VALUATION_GUARD_BITS = 16
FOUR_GUARD_WORLDS = 12


@dataclass
class FiniteNFrame:
    worlds: tuple[str, ...]
    base: dict[int, dict[str, tuple[frozenset[str], ...]]]

    def __post_init__(self) -> None:
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world names")
        for i in self.base:
            if i not in (1, 2):
                raise ValueError(f"modality index {i} out of range (1, 2)")

    @property
    def modalities(self) -> tuple[int, ...]:
        return tuple(sorted(self.base))

    def base_sets(self, i: int, w: str) -> tuple[frozenset[str], ...]:
        return self.base[i][w]

    def to_dict(self) -> dict[str, Any]:
        return {
            "worlds": list(self.worlds),
            "base": {str(i): {w: [sorted(u) for u in self.base[i][w]]
                              for w in self.worlds}
                     for i in sorted(self.base)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FiniteNFrame":
        worlds = tuple(data["worlds"])
        base = {int(i): {w: tuple(frozenset(u) for u in sets)
                         for w, sets in per_world.items()}
                for i, per_world in data["base"].items()}
        return cls(worlds, base)


def validate_frame(frame: FiniteNFrame) -> VerificationReport:
    """Carrier coverage, base sets inside the carrier, at least one base set
    per point and modality, and the filter-base property: every pairwise
    intersection of base sets dominates some base set."""
    report = VerificationReport(lemma="frame-validity",
                                params={"worlds": len(frame.worlds)})
    with Stopwatch(report):
        wset = set(frame.worlds)
        for i in frame.modalities:
            per_world = frame.base[i]
            if set(per_world) != wset:
                report.fail({"modality": i, "reason": "carrier mismatch",
                             "missing": sorted(wset - set(per_world)),
                             "extra": sorted(set(per_world) - wset)})
                return report
            for w in frame.worlds:
                sets = per_world[w]
                report.checked += 1
                if not sets:
                    report.fail({"modality": i, "world": w,
                                 "reason": "no base sets"})
                    return report
                for u in sets:
                    if not u <= wset:
                        report.fail({"modality": i, "world": w,
                                     "reason": "base set outside carrier",
                                     "set": sorted(u)})
                        return report
                for u in sets:
                    for v in sets:
                        report.checked += 1
                        meet = u & v
                        if not any(z <= meet for z in sets):
                            report.fail({"modality": i, "world": w,
                                         "reason": "filter-base property fails",
                                         "sets": [sorted(u), sorted(v)]})
                            return report
    return report


def nof(frame: FiniteKripkeFrame) -> FiniteNFrame:
    """Neighborhood frame of a Kripke frame: one base set per point, the
    successor set. Truth values agree with the relational semantics pointwise."""
    base = {i: {w: (frame.successors(i, w),) for w in frame.worlds}
            for i in frame.modalities}
    return FiniteNFrame(frame.worlds, base)


@dataclass
class FiniteNModel:
    frame: FiniteNFrame
    valuation: dict[str, frozenset[str]]

    def __post_init__(self) -> None:
        wset = set(self.frame.worlds)
        for name, ws in self.valuation.items():
            if not ws <= wset:
                raise ValueError(f"valuation of {name!r} mentions unknown worlds")

    def to_dict(self) -> dict[str, Any]:
        out = self.frame.to_dict()
        out["val"] = {name: sorted(ws) for name, ws in sorted(self.valuation.items())}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FiniteNModel":
        frame = FiniteNFrame.from_dict(data)
        val = {name: frozenset(ws) for name, ws in data.get("val", {}).items()}
        return cls(frame, val)


# --- satisfaction over bitmasks ------------------------------------------------

class _Compiled:
    """Worlds as bit positions; base sets as masks. One compile per sweep."""

    def __init__(self, frame: FiniteNFrame):
        self.frame = frame
        self.n = len(frame.worlds)
        self.full = (1 << self.n) - 1
        self.index = {w: k for k, w in enumerate(frame.worlds)}
        self.base_masks: dict[int, list[list[int]]] = {}
        for i in frame.modalities:
            rows = []
            for w in frame.worlds:
                rows.append([self._mask(u) for u in frame.base[i][w]])
            self.base_masks[i] = rows

    def _mask(self, ws: Iterable[str]) -> int:
        out = 0
        for w in ws:
            out |= 1 << self.index[w]
        return out

    def denotation(self, phi: Formula, atom_masks: Mapping[str, int],
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
            left = self.denotation(phi.left, atom_masks, cache)
            right = self.denotation(phi.right, atom_masks, cache)
            out = (self.full & ~left) | right
        else:
            if not isinstance(phi, Box):
                raise TypeError(f"not a formula: {phi!r}")
            if phi.index not in self.base_masks:
                raise ValueError(f"frame has no modality {phi.index}")
            body = self.denotation(phi.body, atom_masks, cache)
            rows = self.base_masks[phi.index]
            out = 0
            for w in range(self.n):
                if any(u & ~body == 0 for u in rows[w]):
                    out |= 1 << w
        cache[phi] = out
        return out


def denotation(model: FiniteNModel, phi: Formula) -> frozenset[str]:
    comp = _Compiled(model.frame)
    atom_masks = {name: comp._mask(ws) for name, ws in model.valuation.items()}
    out = comp.denotation(phi, atom_masks, {})
    return frozenset(w for w, k in comp.index.items() if out >> k & 1)


def satisfies(model: FiniteNModel, w: str, phi: Formula) -> bool:
    if w not in model.frame.worlds:
        raise ValueError(f"unknown world {w!r}")
    return w in denotation(model, phi)


@dataclass(frozen=True)
class Counterexample:
    valuation: dict[str, tuple[str, ...]]
    world: str

    def to_dict(self) -> dict[str, Any]:
        return {"valuation": {a: list(ws) for a, ws in sorted(self.valuation.items())},
                "world": self.world}


def valid_on_frame(frame: FiniteNFrame, phi: Formula, *,
                   guard_bits: int = VALUATION_GUARD_BITS) -> Counterexample | None:
    """Exhaustive validity check; returns the first counterexample or None.

    Valuations run in binary-counter order over (world, atom) pairs with
    worlds in declaration order and atoms sorted; worlds are scanned in
    declaration order inside each valuation.
    """
    names = sorted(atoms(phi))
    bits = len(frame.worlds) * len(names)
    if bits > guard_bits:
        raise BudgetExceeded(f"{bits} valuation bits exceeds guard {guard_bits}")
    comp = _Compiled(frame)
    pairs = [(w, a) for w in frame.worlds for a in names]
    for v in range(1 << bits):
        atom_masks = {a: 0 for a in names}
        for j, (w, a) in enumerate(pairs):
            if v >> j & 1:
                atom_masks[a] |= 1 << comp.index[w]
        out = comp.denotation(phi, atom_masks, {})
        if out != comp.full:
            for w in frame.worlds:
                if not out >> comp.index[w] & 1:
                    val = {a: tuple(x for x in frame.worlds
                                    if atom_masks[a] >> comp.index[x] & 1)
                           for a in names}
                    return Counterexample(val, w)
    return None


@dataclass(frozen=True)
class Characteristics:
    d_ok: bool
    t_ok: bool
    four_ok: bool

    def to_dict(self) -> dict[str, bool]:
        return {"d_ok": self.d_ok, "t_ok": self.t_ok, "four_ok": self.four_ok}


def structural_characteristics(frame: FiniteNFrame, i: int, *,
                               guard_worlds: int = FOUR_GUARD_WORLDS) -> Characteristics:
    """Frame-level equivalents of D, T and Four validity at modality i.

    d_ok: no empty base set (the filter is proper everywhere).
    t_ok: every base set contains its own point.
    four_ok: for every member U of a point's filter, the set of points whose
    filter contains U is itself in the point's filter; members are enumerated
    as all subsets of the carrier, hence the world-count guard.
    """
    if i not in frame.modalities:
        raise ValueError(f"frame has no modality {i}")
    if len(frame.worlds) > guard_worlds:
        raise BudgetExceeded(
            f"{len(frame.worlds)} worlds exceeds guard {guard_worlds} for four_ok")
    comp = _Compiled(frame)
    rows = comp.base_masks[i]
    d_ok = all(u != 0 for row in rows for u in row)
    t_ok = all(all(u >> w & 1 for u in row) for w, row in enumerate(rows))

    def in_filter(w: int, u: int) -> bool:
        return any(b & ~u == 0 for b in rows[w])

    four_ok = True
    for u in range(comp.full + 1):
        holders = 0
        for w in range(comp.n):
            if in_filter(w, u):
                holders |= 1 << w
        for w in range(comp.n):
            if holders >> w & 1 and not in_filter(w, holders):
                four_ok = False
                break
        if not four_ok:
            break
    return Characteristics(d_ok, t_ok, four_ok)


def product_world(w1: str, w2: str) -> str:
    return f"{w1},{w2}"


def product_n(frame1: FiniteNFrame, frame2: FiniteNFrame) -> FiniteNFrame:
    """Product of two unimodal frames: pairs as worlds; modality 1 moves the
    first coordinate inside base-set cylinders V x {x2}, modality 2 the second."""
    for k, frame in ((1, frame1), (2, frame2)):
        if frame.modalities != (1,):
            raise ValueError(f"product input {k} must be unimodal with modality 1")
        check = validate_frame(frame)
        if not check.passed:
            raise ValueError(f"product input {k} invalid: {check.counterexample}")
    worlds = tuple(product_world(w1, w2)
                   for w1 in frame1.worlds for w2 in frame2.worlds)
    base1: dict[str, tuple[frozenset[str], ...]] = {}
    base2: dict[str, tuple[frozenset[str], ...]] = {}
    for w1 in frame1.worlds:
        for w2 in frame2.worlds:
            w = product_world(w1, w2)
            base1[w] = tuple(frozenset(product_world(v, w2) for v in u)
                             for u in frame1.base[1][w1])
            base2[w] = tuple(frozenset(product_world(w1, v) for v in u)
                             for u in frame2.base[1][w2])
    return FiniteNFrame(worlds, {1: base1, 2: base2})


# --- bounded morphisms ----------------------------------------------------------

def check_bounded_morphism(f: Mapping[str, str], source: FiniteNFrame,
                           target: FiniteNFrame) -> VerificationReport:
    """Surjectivity plus the two neighborhood conditions, reduced to base
    sets: images of base sets are neighborhoods of the image point, and every
    base set at the image point contains the image of some base set.

    Reduction soundness: images and neighborhoods are both monotone under
    supersets, so checking the generators settles the full filters.
    """
    report = VerificationReport(
        lemma="bounded-morphism",
        params={"source_worlds": len(source.worlds),
                "target_worlds": len(target.worlds)})
    with Stopwatch(report):
        if source.modalities != target.modalities:
            raise ValueError("source and target modality sets differ")
        if set(f) != set(source.worlds):
            raise ValueError("map domain is not the source carrier")
        if not set(f.values()) <= set(target.worlds):
            raise ValueError("map range leaves the target carrier")
        if set(f.values()) != set(target.worlds):
            report.fail({"condition": "surjectivity",
                         "missed": sorted(set(target.worlds) - set(f.values()))})
            return report
        report.checked += 1
        for i in source.modalities:
            for x in source.worlds:
                fx = f[x]
                target_sets = target.base[i][fx]
                for u in source.base[i][x]:
                    report.checked += 1
                    image = frozenset(f[y] for y in u)
                    if not any(v <= image for v in target_sets):
                        report.fail({"condition": "image-is-neighborhood",
                                     "modality": i, "x": x, "set": sorted(u),
                                     "image": sorted(image)})
                        return report
                for v in target_sets:
                    report.checked += 1
                    if not any(frozenset(f[y] for y in u) <= v
                               for u in source.base[i][x]):
                        report.fail({"condition": "preimage-refinement",
                                     "modality": i, "x": x, "target_set": sorted(v)})
                        return report
    return report


def check_truth_preservation(f: Mapping[str, str], source: FiniteNFrame,
                             target_model: FiniteNModel, depth: int) -> VerificationReport:
    """Pull the target valuation back along f and compare truth pointwise for
    every generated formula up to the given modal depth."""
    morphism = check_bounded_morphism(f, source, target_model.frame)
    if not morphism.passed:
        raise ValueError(f"morphism check failed: {morphism.counterexample}")
    report = VerificationReport(
        lemma="truth-preservation",
        params={"depth": depth, "source_worlds": len(source.worlds),
                "target_worlds": len(target_model.frame.worlds)})
    with Stopwatch(report):
        names = sorted(target_model.valuation)
        pulled = {name: frozenset(x for x in source.worlds
                                  if f[x] in target_model.valuation[name])
                  for name in names}
        source_model = FiniteNModel(source, pulled)
        allowed = set(source.modalities)
        for phi in generate_formulas(depth, names[:2]):
            if not modalities_of(phi) <= allowed:
                continue
            den_source = denotation(source_model, phi)
            den_target = denotation(target_model, phi)
            for x in source.worlds:
                report.checked += 1
                if (x in den_source) != (f[x] in den_target):
                    report.fail({"formula": unparse(phi), "x": x, "fx": f[x]})
                    return report
    return report


def morphism_to_dict(f: Mapping[str, str]) -> dict[str, Any]:
    return {"map": dict(sorted(f.items()))}


def morphism_from_dict(data: Mapping[str, Any]) -> dict[str, str]:
    return dict(data["map"])
