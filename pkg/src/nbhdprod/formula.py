"""Bimodal formulas: core syntax, input sugar, parser, printer, axiom schemes.

The core connective basis is {bottom, ->, [1], [2]}. Derived connectives
(true, ~, &, |, <1>, <2>) are accepted by the constructors and the parser but
normalize to the core immediately, so structural equality of ASTs is equality
up to the standard abbreviations. The printer emits the core basis only, with
minimal parentheses, and parse(unparse(f)) == f for every formula f.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .report import BudgetExceeded

MODALITIES = (1, 2)


class Formula:
    """Base class; instances are core nodes only (Atom, Bottom, Implies, Box)."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    index: int
    body: Formula

    def __post_init__(self) -> None:
        if self.index not in MODALITIES:
            raise ValueError(f"modality index {self.index} out of range {MODALITIES}")


BOT = Bottom()
TOP = Implies(BOT, BOT)


def atom(name: str) -> Atom:
    return Atom(name)


def implies(a: Formula, b: Formula) -> Implies:
    return Implies(a, b)


def box(i: int, phi: Formula) -> Box:
    return Box(i, phi)


def top() -> Formula:
    return TOP


def not_(phi: Formula) -> Formula:
    return Implies(phi, BOT)


def and_(a: Formula, b: Formula) -> Formula:
    return not_(Implies(a, not_(b)))


def or_(a: Formula, b: Formula) -> Formula:
    return Implies(not_(a), b)


def diamond(i: int, phi: Formula) -> Formula:
    return not_(Box(i, not_(phi)))


def modal_depth(phi: Formula) -> int:
    if isinstance(phi, (Atom, Bottom)):
        return 0
    if isinstance(phi, Implies):
        return max(modal_depth(phi.left), modal_depth(phi.right))
    if isinstance(phi, Box):
        return 1 + modal_depth(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def atoms(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Atom):
        return frozenset({phi.name})
    if isinstance(phi, Bottom):
        return frozenset()
    if isinstance(phi, Implies):
        return atoms(phi.left) | atoms(phi.right)
    if isinstance(phi, Box):
        return atoms(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def modalities_of(phi: Formula) -> frozenset[int]:
    if isinstance(phi, (Atom, Bottom)):
        return frozenset()
    if isinstance(phi, Implies):
        return modalities_of(phi.left) | modalities_of(phi.right)
    if isinstance(phi, Box):
        return frozenset({phi.index}) | modalities_of(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


# --- parsing ---------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_KEYWORDS = {"false", "true"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<amp>&)
  | (?P<pipe>\|)
  | (?P<tilde>~)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<box>\[\s*(?P<boxidx>[0-9]+)?\s*\])
  | (?P<dia><\s*(?P<diaidx>[0-9]+)?\s*>)
  | (?P<ident>[a-z][a-z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = next(k for k in ("ws", "arrow", "amp", "pipe", "tilde", "lpar",
                                "rpar", "box", "dia", "ident") if m.group(k))
        if kind == "ws":
            pos = m.end()
            continue
        if kind in ("box", "dia"):
            idx_text = m.group("boxidx" if kind == "box" else "diaidx")
            # bare [] / <> is unimodal shorthand for modality 1
            idx = 1 if idx_text is None else int(idx_text)
            if idx not in MODALITIES:
                raise ParseError(f"modality index {idx} out of range", pos)
            tokens.append((kind, idx, pos))
        elif kind == "ident":
            word = m.group("ident")
            if word in _KEYWORDS:
                tokens.append((word, word, pos))
            else:
                tokens.append(("ident", word, pos))
        else:
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: -> (right assoc, loosest), |, &, unary, atoms."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, object, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, object, int]:
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.peek()[0] == "pipe":
            self.take()
            out = or_(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.peek()[0] == "amp":
            self.take()
            out = and_(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "tilde":
            self.take()
            return not_(self.unary())
        if kind == "box":
            self.take()
            return Box(int(value), self.unary())
        if kind == "dia":
            self.take()
            return diamond(int(value), self.unary())
        return self.atomic()

    def atomic(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "ident":
            return Atom(str(value))
        if kind == "false":
            return BOT
        if kind == "true":
            return TOP
        if kind == "lpar":
            inner = self.formula()
            self.expect("rpar")
            return inner
        raise ParseError(f"expected a formula, found {value!r}", pos)


def parse(text: str) -> Formula:
    parser = _Parser(text)
    out = parser.formula()
    kind, value, pos = parser.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {value!r}", pos)
    return out


# --- printing ---------------------------------------------------------------

_LEVEL_IMPLIES = 1
_LEVEL_UNARY = 2
_LEVEL_ATOM = 3


def _render(phi: Formula, min_level: int) -> str:
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Box):
        text = f"[{phi.index}] {_render(phi.body, _LEVEL_UNARY)}"
        level = _LEVEL_UNARY
    else:
        if not isinstance(phi, Implies):
            raise TypeError(f"not a formula: {phi!r}")
        text = (f"{_render(phi.left, _LEVEL_IMPLIES + 1)} -> "
                f"{_render(phi.right, _LEVEL_IMPLIES)}")
        level = _LEVEL_IMPLIES
    if level < min_level:
        return f"({text})"
    return text


def unparse(phi: Formula) -> str:
    """Core-basis text with minimal parentheses; parse(unparse(f)) == f."""
    return _render(phi, _LEVEL_IMPLIES)


# --- axiom schemes ----------------------------------------------------------

class AxiomScheme(Enum):
    K = "K"
    D = "D"
    T = "T"
    FOUR = "Four"
    COM = "Com"
    CHR = "Chr"


_P = Atom("p")
_Q = Atom("q")


def axiom_instance(scheme: AxiomScheme, i: int = 1) -> Formula:
    """Instance of a scheme at modality i (Com and Chr ignore i)."""
    if i not in MODALITIES:
        raise ValueError(f"modality index {i} out of range {MODALITIES}")
    if scheme is AxiomScheme.K:
        return Implies(Box(i, Implies(_P, _Q)), Implies(Box(i, _P), Box(i, _Q)))
    if scheme is AxiomScheme.D:
        return Implies(Box(i, _P), diamond(i, _P))
    if scheme is AxiomScheme.T:
        return Implies(Box(i, _P), _P)
    if scheme is AxiomScheme.FOUR:
        return Implies(Box(i, _P), Box(i, Box(i, _P)))
    if scheme is AxiomScheme.COM:
        return Implies(Box(1, Box(2, _P)), Box(2, Box(1, _P)))
    if scheme is AxiomScheme.CHR:
        return Implies(diamond(1, Box(2, _P)), Box(2, diamond(1, _P)))
    raise ValueError(f"unknown scheme {scheme!r}")


# Defining axioms on top of K for the logics the fusion operations accept.
LOGICS: dict[str, tuple[AxiomScheme, ...]] = {
    "D": (AxiomScheme.D,),
    "T": (AxiomScheme.T,),
    "D4": (AxiomScheme.D, AxiomScheme.FOUR),
    "S4": (AxiomScheme.T, AxiomScheme.FOUR),
}


def fusion_axioms(logic1: str, logic2: str) -> list[Formula]:
    """Axioms of the fusion: K for both modalities, then each logic's defining
    axioms relativized to its own modality. Never contains Com or Chr."""
    for name in (logic1, logic2):
        if name not in LOGICS:
            raise ValueError(f"unknown logic {name!r}; expected one of {sorted(LOGICS)}")
    out = [axiom_instance(AxiomScheme.K, 1), axiom_instance(AxiomScheme.K, 2)]
    out += [axiom_instance(s, 1) for s in LOGICS[logic1]]
    out += [axiom_instance(s, 2) for s in LOGICS[logic2]]
    return out


# --- exhaustive enumeration ---------------------------------------------------

_MAX_GEN_DEPTH = 3
_MAX_GEN_ATOMS = 2


def generate_formulas(depth: int, atom_names: Sequence[str],
                      max_nodes: int | None = None) -> Iterator[Formula]:
    """All core-basis ASTs with at most max_nodes nodes (default depth + 5)
    and modal depth <= depth, in (size, structure) order, without duplicates.

    The node budget makes the family finite; depth + 5 is the least budget
    whose window contains a diamond over one atom (6 core nodes) at depth 1.
    """
    if depth > _MAX_GEN_DEPTH or len(atom_names) > _MAX_GEN_ATOMS:
        raise BudgetExceeded(
            f"generate_formulas guard: depth <= {_MAX_GEN_DEPTH} and "
            f"at most {_MAX_GEN_ATOMS} atoms")
    if max_nodes is None:
        max_nodes = depth + 5
    leaves: list[Formula] = [BOT] + [Atom(a) for a in atom_names]
    by_size: dict[int, list[Formula]] = {1: leaves}
    for n in range(2, max_nodes + 1):
        layer: list[Formula] = []
        for i in MODALITIES:
            layer.extend(Box(i, b) for b in by_size[n - 1])
        for left_n in range(1, n - 1):
            for left in by_size[left_n]:
                layer.extend(Implies(left, right) for right in by_size[n - 1 - left_n])
        by_size[n] = layer
    seen: set[Formula] = set()
    for n in range(1, max_nodes + 1):
        for phi in by_size[n]:
            if phi not in seen and modal_depth(phi) <= depth:
                seen.add(phi)
                yield phi
