"""Catalogue of axioms and derived equations, soundness checks, and a rewriter.

Each equation is a ``RuleScheme``: two builders for the sides plus the slots
they take (complex parameters and small arities).  ``catalogue()`` expands
every scheme over the parameter samples and arities up to the cap into
concrete ``RewriteRule`` instances.

Rule names follow ``G<group>.<letter>`` for axioms and ``P-<family>.<letter>``
for derived equations; both are stable and used by the CLI.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence


from .builders import (CAP, CUP, black_state, black_vertex, bra0, comult, mult, projector,
                       self_crossing, self_crossing_left, white_state, white_vertex, x_gate)
from .errors import ArityError, NoMatch
from .evaluate import evaluate
from .layout import Wiring
from .linalg import DEFAULT_TOL, max_deviation
from .terms import (BLACK2, BLACK3, FSWAP, SWAP, Gen, Id, Kind, Par, Seq, Term, White, layer,
                    par, seq)

SAMPLES: tuple[complex, ...] = (0, 1, -1, 1j, 0.5, 0.3 + 0.7j)
ARITY_CAP = 6
GROUPS = ("Structural", "FSwap", "Black", "White", "DerivedBlack", "DerivedWhite", "Spider", "Inductive")


@dataclass(frozen=True)
class Var:
    """Named placeholder for a complex parameter inside a pattern."""
    name: str


@dataclass(frozen=True)
class RewriteRule:
    name: str
    group: str
    lhs: Term
    rhs: Term
    parameters: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.lhs.arity != self.rhs.arity:
            raise ArityError(f"{self.name}: sides have arities {self.lhs.arity} and {self.rhs.arity}")

    @property
    def label(self) -> str:
        if not self.parameters:
            return self.name
        inner = ",".join(f"{k}={_show(v)}" for k, v in self.parameters)
        return f"{self.name}[{inner}]"

    def reversed(self) -> "RewriteRule":
        return RewriteRule(self.name + "^-1", self.group, self.rhs, self.lhs, self.parameters)


def _show(v) -> str:
    if isinstance(v, complex):
        from .dsl import format_complex
        return format_complex(v)
    return str(v)


@dataclass(frozen=True)
class RuleScheme:
    name: str
    group: str
    lhs: Callable[..., Term]
    rhs: Callable[..., Term]
    complex_slots: tuple[str, ...] = ()
    arities: tuple[Mapping[str, int], ...] = field(default=({},))
    doc: str = ""

    def instantiate(self, **values) -> RewriteRule:
        vals = {k: (complex(v) if k in self.complex_slots else v) for k, v in values.items()}
        params = tuple((k, vals[k]) for k in (*sorted(_arity_keys(self)), *self.complex_slots) if k in vals)
        return RewriteRule(self.name, self.group, self.lhs(**vals), self.rhs(**vals), params)

    def instances(self, samples: Sequence[complex] = SAMPLES) -> Iterator[RewriteRule]:
        for ar in self.arities:
            for combo in itertools.product(samples, repeat=len(self.complex_slots)):
                yield self.instantiate(**ar, **dict(zip(self.complex_slots, combo)))


def _arity_keys(s: RuleScheme) -> set[str]:
    return set().union(*(a.keys() for a in s.arities))


# Shorthand --------------------------------------------------------------------------

_swap = Gen(SWAP)
_fswap = Gen(FSWAP)
_b2 = Gen(BLACK2)
_b3 = Gen(BLACK3)
I1, I2 = Id(1), Id(2)


def _w(z) -> Term:
    return Gen(White(z))


def _wz(z) -> Term:
    return white_vertex(1, 1, z)


def _flip_split() -> Term:
    return Seq(x_gate(), comult())


def _bra_one() -> Term:
    """comult followed by a cap: the effect <1|."""
    return Seq(comult(), CAP)


def _unary() -> Term:
    return black_state(1)


def _slide(width: int, crossing) -> Term:
    """Carry the wire right of a width-leg block across it to the left."""
    steps = [layer(width + 1, k, Gen(crossing)) for k in range(width - 1, -1, -1)]
    return seq(*steps) if steps else Id(1)


def _bipartite(n: int, m: int, crossing, source: Callable[[], Term], sink: Callable[[], Term]) -> Term:
    """n inputs, each split by ``source`` into m wires, regathered by m ``sink`` boxes."""
    w = Wiring([("in", i) for i in range(n)])
    for i in range(n):
        w.apply(source(), [("in", i)], [(i, j) for j in range(m)])
    w.arrange([(i, j) for j in range(m) for i in range(n)], crossing)
    for j in range(m):
        w.apply(sink(), [(i, j) for i in range(n)], [("out", j)])
    return w.term()


# The catalogue -----------------------------------------------------------------------

def _structural() -> list[RuleScheme]:
    g = "Structural"
    return [
        RuleScheme("G1.a", g, lambda: Seq(Par(I1, CUP), Par(CAP, I1)), lambda: I1,
                   doc="snake equation"),
        RuleScheme("G1.b", g, lambda: Seq(CUP, _swap), lambda: CUP, doc="the cup is symmetric"),
        RuleScheme("G1.c", g, lambda: Seq(_swap, _swap), lambda: I2, doc="swap is an involution"),
        RuleScheme("G1.d", g, lambda: seq(Par(_swap, I1), Par(I1, _swap), Par(_swap, I1)),
                   lambda: seq(Par(I1, _swap), Par(_swap, I1), Par(I1, _swap)), doc="braid relation"),
        RuleScheme("G1.e", g, lambda: seq(Par(CUP, I1), Par(I1, _swap), Par(_swap, I1)),
                   lambda: Par(I1, CUP), doc="cup slides across a wire"),
        RuleScheme("G1.f", g, lambda: Par(CAP, I1),
                   lambda: seq(Par(I1, _swap), Par(_swap, I1), Par(I1, CAP)), doc="cap slides across a wire"),
        RuleScheme("G1.g", g, lambda: seq(Par(_b2, I1), Par(I1, _swap), Par(_swap, I1)),
                   lambda: Par(I1, _b2), doc="binary black slides across a wire"),
        RuleScheme("G1.h", g, lambda: seq(Par(_b3, I1), Par(I2, _swap), par(I1, _swap, I1), Par(_swap, I2)),
                   lambda: Par(I1, _b3), doc="ternary black slides across a wire"),
        RuleScheme("G1.i", g, lambda z: seq(Par(_w(z), I1), Par(I1, _swap), Par(_swap, I1)),
                   lambda z: Par(I1, _w(z)), ("z",), doc="white slides across a wire"),
        RuleScheme("G1.j", g, lambda: seq(Par(_fswap, I1), Par(I1, _swap), Par(_swap, I1)),
                   lambda: seq(Par(I1, _swap), Par(_swap, I1), Par(I1, _fswap)),
                   doc="fermionic swap slides across a wire"),
    ]


def _fermionic() -> list[RuleScheme]:
    g = "FSwap"
    sc = self_crossing
    return [
        RuleScheme("G2.a", g, lambda: Seq(_fswap, _fswap), lambda: I2),
        RuleScheme("G2.b", g, lambda: seq(Par(_fswap, I1), Par(I1, _fswap), Par(_fswap, I1)),
                   lambda: seq(Par(I1, _fswap), Par(_fswap, I1), Par(I1, _fswap))),
        RuleScheme("G2.c", g, lambda: seq(Par(CUP, I1), Par(I1, _fswap), Par(_fswap, I1)),
                   lambda: Par(I1, CUP)),
        RuleScheme("G2.d", g, lambda: Par(CAP, I1),
                   lambda: seq(Par(I1, _fswap), Par(_fswap, I1), Par(I1, CAP))),
        RuleScheme("G2.e", g, lambda: Seq(_fswap, _swap), lambda: Seq(_swap, _fswap)),
        RuleScheme("G2.f", g, lambda: seq(Par(_swap, I1), Par(I1, _fswap), Par(_fswap, I1)),
                   lambda: seq(Par(I1, _fswap), Par(_fswap, I1), Par(I1, _swap))),
        RuleScheme("G2.g", g, lambda: seq(Par(_b2, I1), Par(I1, _fswap), Par(_fswap, I1)),
                   lambda: Par(sc(), _b2), doc="an odd vertex leaves a self-crossing behind"),
        RuleScheme("G2.h", g, lambda: seq(Par(_b3, I1), Par(I2, _fswap), par(I1, _fswap, I1), Par(_fswap, I2)),
                   lambda: Par(sc(), _b3)),
        RuleScheme("G2.i", g, lambda z: seq(Par(_w(z), I1), Par(I1, _fswap), Par(_fswap, I1)),
                   lambda z: Par(I1, _w(z)), ("z",)),
    ]


def _black() -> list[RuleScheme]:
    g = "Black"
    X = x_gate
    return [
        RuleScheme("G3.a", g, lambda: Seq(_b2, _swap), lambda: _b2),
        RuleScheme("G3.b", g, lambda: Seq(_b3, Par(_swap, I1)), lambda: _b3),
        RuleScheme("G3.b'", g, lambda: _b3, lambda: Seq(_b3, Par(I1, _swap))),
        RuleScheme("G3.c", g, lambda: Seq(_b3, Par(I1, _swap)), lambda: Seq(_b3, Par(I1, _fswap))),
        RuleScheme("G3.d", g, lambda: Seq(X(), X()), lambda: I1, doc="two binary blacks cancel"),
        RuleScheme("G3.e", g, lambda: Seq(_flip_split(), Par(_flip_split(), I1)),
                   lambda: Seq(_flip_split(), Par(I1, _flip_split())), doc="coassociativity"),
        RuleScheme("G3.f", g, lambda: Seq(_flip_split(), Par(seq(X(), comult(), CAP), I1)),
                   lambda: I1, doc="counit"),
        RuleScheme("G3.g", g,
                   lambda: seq(Par(X(), X()), Par(comult(), comult()), par(I1, _fswap, I1),
                               Par(mult(), mult()), Par(X(), X())),
                   lambda: seq(mult(), X(), X(), comult()), doc="bialgebra"),
        RuleScheme("G3.h", g, lambda: Par(Seq(_unary(), X()), Seq(_unary(), X())),
                   lambda: seq(_unary(), X(), X(), comult())),
        RuleScheme("G3.i", g, lambda: Id(0), lambda: seq(_unary(), X(), X(), _bra_one())),
        RuleScheme("G3.j", g, lambda: Par(seq(_unary(), X(), _bra_one()), seq(_unary(), X(), _bra_one())),
                   lambda: seq(_unary(), X(), _bra_one()), doc="0 times 0 is 0"),
    ]


def _g4i_lhs() -> Term:
    w = Wiring(["A", "B"])
    w.apply(_flip_split(), ["A"], ["a1", "a2"])
    w.apply(_flip_split(), ["B"], ["b1", "b2"])
    w.apply(projector(), ["a1", "b1"], ["m1", "o2"])
    w.apply(projector(), ["a2", "b2"], ["m2", "o3"])
    w.apply(Seq(mult(), x_gate()), ["m1", "m2"], ["o1"])
    w.arrange(["o1", "o2", "o3"])
    return w.term()


def _g4i_rhs() -> Term:
    return Seq(projector(), Par(I1, _flip_split()))


def _white() -> list[RuleScheme]:
    g = "White"
    X = x_gate
    zero_map = lambda: seq(X(), _bra_one(), _unary(), X())
    return [
        RuleScheme("G4.a", g, lambda: Seq(_w(1), _swap), lambda: _w(1)),
        RuleScheme("G4.b", g, lambda z: Seq(_flip_split(), Par(_wz(z), _wz(z))),
                   lambda z: Seq(_wz(z), _flip_split()), ("z",)),
        RuleScheme("G4.c", g, lambda z: Seq(X(), _bra_one()), lambda z: seq(_wz(z), X(), _bra_one()), ("z",)),
        RuleScheme("G4.d", g, lambda: _wz(1), lambda: I1),
        RuleScheme("G4.e", g, lambda: _wz(0), zero_map),
        RuleScheme("G4.f", g, lambda z, w: seq(_flip_split(), Par(_wz(z), _wz(w)), mult(), X()),
                   lambda z, w: _wz(z + w), ("z", "w"), doc="convolution adds parameters"),
        RuleScheme("G4.g", g, lambda z, w: Seq(_wz(z), _wz(w)), lambda z, w: _wz(z * w), ("z", "w"),
                   doc="composition multiplies parameters"),
        RuleScheme("G4.h", g, projector,
                   lambda: seq(Par(I2, CUP), par(I1, projector(), I1), Par(CAP, I2)),
                   doc="the projector is invariant under rotation"),
        RuleScheme("G4.i", g, _g4i_lhs, _g4i_rhs),
    ]


def _derived_black() -> list[RuleScheme]:
    g = "DerivedBlack"
    X = x_gate
    loop = lambda: seq(par(I1, CUP, I1), Par(_fswap, I2), Par(I2, _swap), par(I1, CAP, I1))
    return [
        RuleScheme("P-black.a", g, self_crossing, self_crossing_left),
        RuleScheme("P-black.b", g, lambda: Seq(self_crossing(), self_crossing()), lambda: I1),
        RuleScheme("P-black.c", g, lambda: Seq(loop(), _swap), loop),
        RuleScheme("P-black.d", g, lambda: Seq(_b2, _fswap), lambda: _b2),
        RuleScheme("P-black.e", g, lambda: seq(_flip_split(), Par(I1, self_crossing()), mult(), X()),
                   lambda: seq(X(), _bra_one(), _unary(), X())),
        RuleScheme("P-black.f", g, self_crossing, lambda: _wz(-1)),
    ]


def _g_white_g(crossing) -> Term:
    w = Wiring(["A", "B", "C"])
    w.apply(_flip_split(), ["B"], ["b1", "b2"])
    w.apply(projector(), ["A", "b1"], ["o1", "x1"])
    w.apply(projector(), ["b2", "C"], ["x2", "o4"])
    w.apply(Gen(crossing), ["x1", "x2"], ["x2'", "x1'"])
    return w.term()


def _derived_white() -> list[RuleScheme]:
    g = "DerivedWhite"
    P = projector
    ring = lambda: seq(Par(_b2, _b2), par(I1, white_vertex(2, 0, 0.5), I1), white_vertex(2, 0, 0.5))
    return [
        RuleScheme("P-white.a", g, lambda: Seq(P(), _swap), P),
        RuleScheme("P-white.a'", g, P, lambda: Seq(_swap, P())),
        RuleScheme("P-white.b", g, lambda: Seq(Par(P(), I1), Par(I1, P())),
                   lambda: Seq(Par(I1, P()), Par(P(), I1))),
        RuleScheme("P-white.c", g, lambda z: Seq(Par(_wz(z), I1), P()),
                   lambda z: Seq(Par(I1, _wz(z)), P()), ("z",)),
        RuleScheme("P-white.c'", g, lambda z: Seq(Par(I1, _wz(z)), P()),
                   lambda z: Seq(P(), Par(_wz(z), I1)), ("z",)),
        RuleScheme("P-white.c''", g, lambda z: Seq(P(), Par(_wz(z), I1)),
                   lambda z: Seq(P(), Par(I1, _wz(z))), ("z",)),
        RuleScheme("P-white.d", g, lambda: Seq(CUP, P()), lambda: CUP),
        RuleScheme("P-white.e", g, ring, lambda: Id(0), doc="black/half-white ring is the unit scalar"),
        RuleScheme("P-white.f", g, lambda: Seq(_flip_split(), P()),
                   lambda: Seq(Seq(x_gate(), _bra_one()), Par(Seq(_unary(), x_gate()), Seq(_unary(), x_gate())))),
        RuleScheme("P-white.g", g, lambda: _g_white_g(FSWAP), lambda: _g_white_g(SWAP)),
    ]


def _adjacent(ns: Sequence[int]) -> tuple[dict, ...]:
    return tuple({"n": n, "j": j} for n in ns for j in range(n - 1))


def _spider() -> list[RuleScheme]:
    g = "Spider"
    cap = ARITY_CAP
    fusion_black = tuple({"p": p, "q": q} for p in range(1, cap) for q in range(0, cap) if p + q + 1 <= cap)
    fusion_white = tuple({"p": p, "q": q} for p in range(2, cap, 2) for q in range(1, cap, 2) if p + q + 1 <= cap)
    return [
        RuleScheme("P-spider.a", g, lambda n, j: Seq(black_state(n), layer(n, j, _swap)),
                   lambda n, j: black_state(n), arities=_adjacent(range(2, cap + 1))),
        RuleScheme("P-spider.a'", g, lambda n, j, z: Seq(white_state(n, z), layer(n, j, _swap)),
                   lambda n, j, z: white_state(n, z), ("z",), _adjacent(range(2, cap + 1, 2))),
        RuleScheme("P-spider.b", g,
                   lambda p, q: seq(black_state(p), layer(p, p - 1, x_gate()), layer(p, p - 1, black_vertex(1, q))),
                   lambda p, q: black_state(p - 1 + q), arities=fusion_black,
                   doc="black vertices joined through a binary black fuse"),
        RuleScheme("P-spider.b'", g,
                   lambda p, q, z, w: Seq(white_state(p, z), layer(p, p - 1, white_vertex(1, q, w))),
                   lambda p, q, z, w: white_state(p - 1 + q, z * w), ("z", "w"), fusion_white,
                   doc="adjacent white vertices fuse, multiplying parameters"),
        RuleScheme("P-spider.c", g, lambda n: Seq(black_state(n), layer(n, n - 2, CAP)),
                   lambda n: black_state(n - 2), arities=tuple({"n": n} for n in range(2, cap + 1))),
        RuleScheme("P-spider.c'", g, lambda n, z: Seq(white_state(n, z), layer(n, n - 2, CAP)),
                   lambda n, z: white_state(n - 2, z), ("z",), tuple({"n": n} for n in range(2, cap + 1, 2))),
        RuleScheme("P-spider.d", g, lambda n: Seq(Par(black_state(n), I1), _slide(n, FSWAP)),
                   lambda n: Par(self_crossing(), black_state(n)),
                   arities=tuple({"n": n} for n in range(0, cap + 1))),
        RuleScheme("P-spider.d'", g, lambda n, z: Seq(Par(white_state(n, z), I1), _slide(n, FSWAP)),
                   lambda n, z: Par(I1, white_state(n, z)), ("z",), tuple({"n": n} for n in range(0, cap + 1, 2))),
        RuleScheme("P-spider.e", g, lambda n, j: Seq(black_state(n), layer(n, j, _fswap)),
                   lambda n, j: black_state(n), arities=_adjacent(range(2, cap + 1))),
        RuleScheme("P-spider.e'", g, lambda n, j, z: Seq(white_state(n, z), layer(n, j, _fswap)),
                   lambda n, j, z: white_state(n, -z), ("z",), _adjacent(range(2, cap + 1, 2)),
                   doc="a fermionic crossing between white legs negates the parameter"),
    ]


def _alternating(n: int, z, w) -> list:
    return [z if i % 2 == 0 else w for i in range(n)]


def _ind_c_lhs(p, n, q, z, w) -> Term:
    whites = par(*[_wz(u) for u in _alternating(n, z, w)]) if n else Id(0)
    return seq(black_vertex(p, n), whites, black_vertex(n, q))


def _ind_c_rhs(p, n, q, z, w) -> Term:
    return seq(black_vertex(p, 1), _wz(sum(_alternating(n, z, w))), black_vertex(1, q))


def _ind_e(k, a, z, w, crossing) -> Term:
    inputs = [("in", i) for i in range(k)]
    wr = Wiring(inputs)
    wr.apply(black_vertex(k, 2), inputs, ["u", "v"])
    left = [("l", i) for i in range(a)] + ["x1"]
    right = ["x2"] + [("r", i) for i in range(a)]
    wr.apply(white_vertex(1, a + 1, z), ["u"], left)
    wr.apply(white_vertex(1, a + 1, w), ["v"], right)
    wr.apply(Gen(crossing), ["x1", "x2"], ["x2'", "x1'"])
    return wr.term()


def _inductive() -> list[RuleScheme]:
    g = "Inductive"
    X = x_gate
    bip = tuple({"n": n, "m": m} for n in range(4) for m in range(4) if n * m <= 9)
    bip_w = tuple({"n": n, "m": m} for n in range(4) for m in (1, 2, 3) if n * (2 * m - 1) <= 9)
    conv = tuple({"p": p, "n": n, "q": q} for p in (1, 2) for n in (1, 2, 3) for q in (1, 2))
    loopy = tuple({"p": p, "n": n, "q": q} for p in range(3) for n in range(2, 5) for q in range(3)
                  if (p + n) % 2 == 0 and p + n <= ARITY_CAP and n + q <= ARITY_CAP)
    cross = tuple({"k": k, "a": a} for k in range(3) for a in (0, 2))
    return [
        RuleScheme("P-inductive.a", g,
                   lambda n, m: _bipartite(n, m, FSWAP, lambda: Seq(X(), black_vertex(1, m)),
                                           lambda: Seq(black_vertex(n, 1), X())),
                   lambda n, m: Seq(black_vertex(n, 1), black_vertex(1, m)), arities=bip,
                   doc="generalized bialgebra"),
        RuleScheme("P-inductive.b", g,
                   lambda n, m, z: _bipartite(n, 2 * m - 1, SWAP, lambda: white_vertex(1, 2 * m - 1, z),
                                              lambda: Seq(black_vertex(n, 1), X())),
                   lambda n, m, z: seq(black_vertex(n, 1), X(), white_vertex(1, 2 * m - 1, z)), ("z",), bip_w),
        RuleScheme("P-inductive.c", g, _ind_c_lhs, _ind_c_rhs, ("z", "w"), conv,
                   doc="parallel whites between two blacks add up"),
        RuleScheme("P-inductive.d", g,
                   lambda p, n, q, z: Seq(white_vertex(p, n, z), black_vertex(n, q)),
                   lambda p, n, q, z: Par(par(*[bra0() for _ in range(p)]) if p else Id(0), black_vertex(0, q)),
                   ("z",), loopy),
        RuleScheme("P-inductive.e", g, lambda k, a, z, w: _ind_e(k, a, z, w, FSWAP),
                   lambda k, a, z, w: _ind_e(k, a, z, w, SWAP), ("z", "w"), cross),
    ]


_SCHEMES: list[RuleScheme] | None = None


def schemes() -> list[RuleScheme]:
    global _SCHEMES
    if _SCHEMES is None:
        _SCHEMES = [*_structural(), *_fermionic(), *_black(), *_white(),
                    *_derived_black(), *_derived_white(), *_spider(), *_inductive()]
    return list(_SCHEMES)


def scheme(name: str) -> RuleScheme:
    for s in schemes():
        if s.name == name:
            return s
    raise KeyError(name)


def catalogue(group: str | None = None, samples: Sequence[complex] = SAMPLES) -> list[RewriteRule]:
    """Every rule instance, in scheme order; optionally restricted to one group."""
    if group is not None and group not in GROUPS:
        raise ValueError(f"unknown group {group!r}; choose from {', '.join(GROUPS)}")
    return [r for s in schemes() if group in (None, s.group) for r in s.instances(samples)]


# Soundness --------------------------------------------------------------------------

@dataclass(frozen=True)
class SoundnessReport:
    rule: str
    group: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def check_soundness(rule: RewriteRule, tolerance: float = DEFAULT_TOL) -> SoundnessReport:
    try:
        dev = max_deviation(evaluate(rule.lhs).entries, evaluate(rule.rhs).entries)
    except ArityError:
        dev = float("inf")
    return SoundnessReport(rule.label, rule.group, float(dev), tolerance)


def check_all(tolerance: float = DEFAULT_TOL, group: str | None = None) -> list[SoundnessReport]:
    return [check_soundness(r, tolerance) for r in catalogue(group)]


# Rewriting modulo associativity and units ---------------------------------------------

@dataclass(frozen=True)
class _Node:
    """Flattened Seq or Par with at least two items."""
    kind: str  # "seq" or "par"
    items: tuple
    n_in: int
    n_out: int


def spine(t: Term):
    """Flatten nested Seq/Par, drop identities in sequences, merge adjacent Ids in Par."""
    if isinstance(t, (Gen, Id)):
        return t
    kind, cls = ("seq", Seq) if isinstance(t, Seq) else ("par", Par)
    leaves, stack = [], [t]
    while stack:
        node = stack.pop()
        if isinstance(node, cls):
            stack.extend(((node.second, node.first) if cls is Seq else (node.right, node.left)))
        else:
            leaves.append(node)
    items = []
    for leaf in leaves:
        s = spine(leaf)
        if isinstance(s, _Node) and s.kind == kind:
            items.extend(s.items)
        else:
            items.append(s)
    if kind == "seq":
        items = [s for s in items if not isinstance(s, Id)]
        if not items:
            return Id(t.n_in)
    else:
        merged = []
        for s in items:
            if isinstance(s, Id) and merged and isinstance(merged[-1], Id):
                merged[-1] = Id(merged[-1].n + s.n)
            else:
                merged.append(s)
        items = [s for s in merged if not (isinstance(s, Id) and s.n == 0)]
        if not items:
            return Id(0)
    if len(items) == 1:
        return items[0]
    return _Node(kind, tuple(items), t.n_in, t.n_out)


def unspine(s) -> Term:
    if not isinstance(s, _Node):
        return s
    parts = [unspine(x) for x in s.items]
    out = parts[-1]
    for x in reversed(parts[:-1]):
        out = Seq(x, out) if s.kind == "seq" else Par(x, out)
    return out


_PARAM_TOL = 1e-12


def _unify(p, t, env: dict) -> bool:
    if isinstance(p, Gen):
        if not isinstance(t, Gen) or p.gen.kind is not t.gen.kind:
            return False
        if p.gen.kind is not Kind.WHITE:
            return True
        pz, tz = p.gen.z, t.gen.z
        if isinstance(pz, Var):
            if pz.name in env:
                return abs(env[pz.name] - tz) <= _PARAM_TOL
            env[pz.name] = tz
            return True
        return isinstance(tz, complex) and abs(pz - tz) <= _PARAM_TOL
    if isinstance(p, Id):
        return isinstance(t, Id) and p.n == t.n
    if not isinstance(t, _Node) or t.kind != p.kind or len(t.items) != len(p.items):
        return False
    return all(_unify(a, b, env) for a, b in zip(p.items, t.items))


@dataclass(frozen=True)
class Match:
    path: tuple[int, ...]
    start: int | None = None
    stop: int | None = None
    bindings: tuple[tuple[str, complex], ...] = ()
    pad_left: int = 0
    pad_right: int = 0


def _window_matches(p: _Node, node: _Node, path) -> Iterator[Match]:
    k = len(p.items)
    for i in range(len(node.items) - k + 1):
        env: dict = {}
        pad_l = pad_r = 0
        ok = True
        for j, (a, b) in enumerate(zip(p.items, node.items[i:i + k])):
            edge = p.kind == "par" and isinstance(a, Id) and isinstance(b, Id) and b.n > a.n
            if edge and j == 0 and k > 1:
                pad_l = b.n - a.n
            elif edge and j == k - 1 and k > 1:
                pad_r = b.n - a.n
            elif not _unify(a, b, env):
                ok = False
                break
        if ok:
            yield Match(path, i, i + k, tuple(sorted(env.items())), pad_l, pad_r)


def _matches(pattern, target, path=()) -> Iterator[Match]:
    if isinstance(pattern, _Node) and isinstance(target, _Node) and pattern.kind == target.kind:
        yield from _window_matches(pattern, target, path)
    else:
        env: dict = {}
        if _unify(pattern, target, env):
            yield Match(path, bindings=tuple(sorted(env.items())))
    if isinstance(target, _Node):
        for i, child in enumerate(target.items):
            yield from _matches(pattern, child, path + (i,))


def _patterns(rule) -> Iterator[tuple[object, Callable[[Mapping], Term]]]:
    """(spined lhs pattern, rhs builder from bindings) pairs for a rule or scheme."""
    if isinstance(rule, RewriteRule):
        yield spine(rule.lhs), lambda env: rule.rhs
        return
    for ar in rule.arities:
        placeholders = {k: Var(k) for k in rule.complex_slots}
        try:
            pat = rule.lhs(**ar, **placeholders)
        except TypeError:
            pat = None  # the side computes with its parameters; fall back to samples
        if pat is not None:
            yield spine(pat), (lambda env, ar=ar: rule.rhs(**ar, **{k: complex(v) for k, v in env.items()}))
        else:
            for inst in rule.instances():
                yield spine(inst.lhs), (lambda env, inst=inst: inst.rhs)


def find_matches(rule, t: Term) -> list[Match]:
    target = spine(t)
    out: list[Match] = []
    for pattern, _ in _patterns(rule):
        if isinstance(pattern, Id):
            continue  # a bare wire matches everywhere; such rules only apply right to left
        out.extend(m for m in _matches(pattern, target) if m not in out)
    return out


def _replace(node, path, fn):
    if not path:
        return fn(node)
    i = path[0]
    items = list(node.items)
    items[i] = _replace(items[i], path[1:], fn)
    return _Node(node.kind, tuple(items), node.n_in, node.n_out)


def apply_rule(rule, t: Term, position: Match | None = None) -> Term:
    """Rewrite one occurrence of the rule's left side in t.

    ``rule`` is a concrete ``RewriteRule`` or a ``RuleScheme`` whose complex
    parameters are unified against the term.  Without a position the first
    match in pre-order is used.
    """
    target = spine(t)
    for pattern, build in _patterns(rule):
        if isinstance(pattern, Id):
            continue
        for m in _matches(pattern, target):
            if position is not None and (m.path, m.start, m.stop, m.pad_left, m.pad_right) != (
                    position.path, position.start, position.stop, position.pad_left, position.pad_right):
                continue
            rhs = spine(build(dict(m.bindings)))

            def swap_in(node, m=m, rhs=rhs):
                if m.start is None:
                    return rhs
                pads = ([Id(m.pad_left)] if m.pad_left else []) + [rhs] + ([Id(m.pad_right)] if m.pad_right else [])
                items = list(node.items[:m.start]) + pads + list(node.items[m.stop:])
                return _Node(node.kind, tuple(items), node.n_in, node.n_out)

            out = unspine(spine(unspine(_replace(target, m.path, swap_in))))
            if out.arity != t.arity:
                raise ArityError("rewrite changed the arity")
            return out
    raise NoMatch(f"{getattr(rule, 'name', rule)!s} does not match at the requested position")


def corrupted_convolution() -> RuleScheme:
    """G4.f with the sum replaced by a product; used to exercise failure reports."""
    base = scheme("G4.f")
    return RuleScheme("G4.f*", base.group, base.lhs, lambda z, w: _wz(z * w), ("z", "w"))
