"""Pre-normal and normal forms, normalization and the equality decision.

A pre-normal form records a parity and a list of white-vertex records
``(z, pattern)``; it stands for the diagram where a bottom black spider (two
of them in the even case) feeds one white vertex per record, whose outputs
connect to the output wires flagged by the pattern.  Its interpretation is
``sum z |pattern>``.

Terms are normalized by bending inputs up to outputs (so a map becomes the
state ``S[in ++ out] = M[out, in]``), folding generators to fixed records,
``Par`` to a product of records and ``Seq`` to a product followed by plugging
the shared wires.  Records are deduplicated after every step.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .builders import black_state, black_vertex, white_vertex, x_gate
from .errors import ArityError, MixedParityError
from .layout import Wiring
from .linalg import DEFAULT_TOL, Parity, StateVector
from .terms import Gen, Id, Kind, Par, Seq, Term, Generator

Record = tuple[complex, str]


@dataclass(frozen=True)
class PreNormalForm:
    n_outputs: int
    parity: Parity
    whites: tuple[Record, ...] = ()

    def __post_init__(self):
        if self.parity not in (Parity.EVEN, Parity.ODD):
            raise ValueError("a pre-normal form is even or odd")
        whites = tuple((complex(z), str(p)) for z, p in self.whites)
        for _, p in whites:
            if len(p) != self.n_outputs or set(p) - {"0", "1"}:
                raise ArityError(f"pattern {p!r} does not have {self.n_outputs} bits")
            if p.count("1") % 2 != self.parity.bit:
                raise MixedParityError(f"pattern {p!r} disagrees with parity {self.parity.value}")
        object.__setattr__(self, "whites", whites)

    @property
    def is_zero(self) -> bool:
        return not self.whites


@dataclass(frozen=True)
class NormalForm(PreNormalForm):
    """Sorted, duplicate-free, zero-free; the zero state is empty and even."""

    def __post_init__(self):
        super().__post_init__()
        pats = [p for _, p in self.whites]
        if any(a >= b for a, b in zip(pats, pats[1:])):
            raise ValueError("normal form patterns must be strictly increasing")
        if any(z == 0 for z, _ in self.whites):
            raise ValueError("normal form has a zero coefficient")
        if not self.whites and self.parity is not Parity.EVEN:
            raise ValueError("the canonical zero normal form is even")

    def to_dict(self) -> dict:
        return {
            "wires": self.n_outputs,
            "parity": self.parity.value,
            "terms": [{"bits": p, "re": z.real, "im": z.imag} for z, p in self.whites],
        }


def _flip(parity: Parity) -> Parity:
    return Parity.ODD if parity is Parity.EVEN else Parity.EVEN


def _add(a: Parity, b: Parity) -> Parity:
    return Parity.EVEN if a is b else Parity.ODD


# Operations on the list form -------------------------------------------------

def pnf_interpret(p: PreNormalForm, tol: float = DEFAULT_TOL) -> StateVector:
    acc: dict[str, complex] = {}
    for z, pat in p.whites:
        acc[pat] = acc.get(pat, 0) + z
    return StateVector.from_dict(p.n_outputs, acc, tol)


def negate(p: PreNormalForm, j: int) -> PreNormalForm:
    """X on output j: complement bit j of every record."""
    if not 0 <= j < p.n_outputs:
        raise ArityError(f"output {j} out of range")
    flip = {"0": "1", "1": "0"}
    whites = tuple((z, pat[:j] + flip[pat[j]] + pat[j + 1:]) for z, pat in p.whites)
    return PreNormalForm(p.n_outputs, _flip(p.parity), whites)


def trace(p: PreNormalForm, a: int, b: int) -> PreNormalForm:
    """Plug outputs a and b together with a cap."""
    if a == b or not (0 <= a < p.n_outputs and 0 <= b < p.n_outputs):
        raise ArityError(f"cannot trace outputs {a} and {b}")
    keep = [k for k in range(p.n_outputs) if k not in (a, b)]
    whites = tuple((z, "".join(pat[k] for k in keep)) for z, pat in p.whites if pat[a] == pat[b])
    return PreNormalForm(p.n_outputs - 2, p.parity, whites)


def merge(p: PreNormalForm, q: PreNormalForm) -> PreNormalForm:
    """Juxtapose two pre-normal forms (tensor of states)."""
    parity = _add(p.parity, q.parity)
    if p.is_zero or q.is_zero:
        return PreNormalForm(p.n_outputs + q.n_outputs, parity, ())
    whites = tuple((z * w, a + b) for z, a in p.whites for w, b in q.whites)
    return PreNormalForm(p.n_outputs + q.n_outputs, parity, whites)


def permute(p: PreNormalForm, perm: Sequence[int]) -> PreNormalForm:
    """Plain rewiring: output k of the result is output ``perm[k]`` of p."""
    if sorted(perm) != list(range(p.n_outputs)):
        raise ArityError(f"{perm!r} is not a permutation of {p.n_outputs} outputs")
    whites = tuple((z, "".join(pat[k] for k in perm)) for z, pat in p.whites)
    return PreNormalForm(p.n_outputs, p.parity, whites)


def dedupe(p: PreNormalForm, tol: float = DEFAULT_TOL) -> PreNormalForm:
    acc: dict[str, complex] = {}
    for z, pat in p.whites:
        acc[pat] = acc.get(pat, 0) + z
    return PreNormalForm(p.n_outputs, p.parity, tuple((z, k) for k, z in acc.items() if abs(z) > tol))


def to_normal(p: PreNormalForm, tol: float = DEFAULT_TOL) -> NormalForm:
    """Sort, merge repeated patterns and drop negligible coefficients."""
    d = dedupe(p, tol)
    whites = tuple(sorted(d.whites, key=lambda r: r[1]))
    return NormalForm(p.n_outputs, p.parity if whites else Parity.EVEN, whites)


def synthesize(v: StateVector, tol: float = DEFAULT_TOL) -> NormalForm:
    parity = Parity.ODD if v.parity is Parity.ODD else Parity.EVEN
    whites = tuple((complex(z), k) for k, z in sorted(v.amplitudes.items()) if abs(z) > tol)
    return NormalForm(v.n, parity if whites else Parity.EVEN, whites)


# Diagram synthesis ------------------------------------------------------------------

class _Spider:
    """Legs of a black state produced one at a time from a right-hand spine.

    The leg structure is the n-ary recursion itself: a ternary vertex, then
    repeatedly the last leg through a bit flip into a binary split.
    """

    def __init__(self, w: Wiring, tag: str, m: int):
        self.w, self.tag, self.m = w, tag, m
        self.made = 0
        self.spine = None
        if m == 0:
            w.state(black_state(0), [])
        elif m == 1:
            w.state(black_state(1), [(tag, 0)])
            self.made = 1
        elif m == 2:
            w.state(black_state(2), [(tag, 0), (tag, 1)])
            self.made = 2
        else:
            self.spine = (tag, "spine", 2)
            w.state(black_state(3), [(tag, 0), (tag, 1), self.spine])
            self.made = 2

    def leg(self, i: int):
        while self.made <= i:
            k = self.made
            if k == self.m - 1:
                self.w.wires[self.w.wires.index(self.spine)] = (self.tag, k)
                self.spine = None
            else:
                nxt = (self.tag, "spine", k + 1)
                self.w.apply(Seq(x_gate(), black_vertex(1, 2)), [self.spine], [(self.tag, k), nxt])
                self.spine = nxt
            self.made += 1
        return (self.tag, i)


class _Collector:
    """Output black vertex that absorbs incoming wires one at a time."""

    def __init__(self, j: int):
        self.j = j
        self.wire = None
        self.count = 0

    def absorb(self, w: Wiring, label, slot: int) -> None:
        if self.count == 0:
            w.move(label, slot)
            self.wire = label
        else:
            out = ("acc", self.j, self.count)
            box = black_vertex(2, 1) if self.count == 1 else Seq(Par(x_gate(), Id(1)), black_vertex(2, 1))
            w.apply(box, [self.wire, label], [out])
            self.wire = out
        self.count += 1

    def close(self, w: Wiring, slot: int):
        out = ("out", self.j)
        if self.count == 0:
            w.state(Seq(black_vertex(0, 1), x_gate()), [out], at=slot)
        elif self.count == 1:
            w.apply(Seq(black_vertex(1, 1), x_gate()), [self.wire], [out])
        else:
            w.apply(x_gate(), [self.wire], [out])
        return out


def nf_to_term(nf: PreNormalForm) -> Term:
    """The normal-form diagram of nf as a Term built from the generators.

    Bottom spider legs are produced just before the white vertex that uses
    them and output collectors absorb white outputs as soon as they appear,
    so the number of live wires stays near ``n_outputs`` plus one white.
    All crossings are plain swaps.
    """
    n = nf.n_outputs
    records = nf.whites
    m = len(records)
    w = Wiring()
    even = nf.parity is Parity.EVEN
    spiders = [_Spider(w, "L", m)] + ([_Spider(w, "R", m)] if even else [])
    collectors = [_Collector(j) for j in range(n)]

    def slot(j: int) -> int:
        return sum(1 for c in collectors[:j] if c.count)

    for i, (z, pat) in enumerate(records):
        legs = [s.leg(i) for s in spiders]
        targets = [j for j in range(n) if pat[j] == "1"]
        outs = [("w", i, j) for j in targets]
        w.apply(white_vertex(len(legs), len(outs), z), legs, outs)
        for j, label in zip(targets, outs):
            collectors[j].absorb(w, label, slot(j))
    outputs = [c.close(w, j) for j, c in enumerate(collectors)]
    w.arrange(outputs)
    return w.term()


# Normalization of Terms --------------------------------------------------------------

class _Records:
    """Deduplicated records on integer patterns of a fixed width."""

    __slots__ = ("width", "parity", "data")

    def __init__(self, width: int, parity: Parity, data: Mapping[int, complex]):
        self.width, self.parity, self.data = width, parity, dict(data)

    def pruned(self, tol: float) -> "_Records":
        self.data = {k: z for k, z in self.data.items() if abs(z) > tol}
        return self


def _pattern_records(items: Iterable[tuple[complex, str]], parity: Parity) -> _Records:
    items = list(items)
    width = len(items[0][1])
    return _Records(width, parity, {int(p, 2): complex(z) for z, p in items})


_GEN_RECORDS = {
    Kind.DUAL: [(1, "00"), (1, "11")],
    Kind.DUAL_DAGGER: [(1, "00"), (1, "11")],
    Kind.SWAP: [(1, "0000"), (1, "0110"), (1, "1001"), (1, "1111")],
    Kind.FSWAP: [(1, "0000"), (1, "0110"), (1, "1001"), (-1, "1111")],
    Kind.BLACK2: [(1, "10"), (1, "01")],
    Kind.BLACK3: [(1, "100"), (1, "010"), (1, "001")],
}


def generator_pnf(g: Generator) -> PreNormalForm:
    """Fixed records of a generator with its inputs bent to outputs."""
    if g.kind is Kind.WHITE:
        whites = ((1, "00"), (g.z, "11"))
    else:
        whites = tuple(_GEN_RECORDS[g.kind])
    n = len(whites[0][1])
    return PreNormalForm(n, Parity.ODD if g.is_odd else Parity.EVEN, whites)


def _records_of_gen(g: Generator) -> _Records:
    p = generator_pnf(g)
    return _pattern_records(p.whites, p.parity)


def _identity_records(n: int) -> _Records:
    return _Records(2 * n, Parity.EVEN, {(x << n) | x: 1 + 0j for x in range(1 << n)})


def _par(a: _Records, an: tuple[int, int], b: _Records, bn: tuple[int, int], tol: float) -> _Records:
    (na, ma), (nb, mb) = an, bn
    if not a.data or not b.data:
        return _Records(na + ma + nb + mb, _add(a.parity, b.parity), {})
    out: dict[int, complex] = {}
    amask_o, bmask_o = (1 << ma) - 1, (1 << mb) - 1
    for x, z in a.data.items():
        ai, ao = x >> ma, x & amask_o
        for y, u in b.data.items():
            bi, bo = y >> mb, y & bmask_o
            key = (((((ai << nb) | bi) << ma) | ao) << mb) | bo
            out[key] = out.get(key, 0) + z * u
    return _Records(na + ma + nb + mb, _add(a.parity, b.parity), out).pruned(tol)


def _seq(a: _Records, an: tuple[int, int], b: _Records, bn: tuple[int, int], tol: float) -> _Records:
    (na, ma), (_, mb) = an, bn
    by_key: dict[int, list[tuple[int, complex]]] = {}
    bmask = (1 << mb) - 1
    for y, u in b.data.items():
        by_key.setdefault(y >> mb, []).append((y & bmask, u))
    out: dict[int, complex] = {}
    amask = (1 << ma) - 1
    for x, z in a.data.items():
        for bo, u in by_key.get(x & amask, ()):
            key = ((x >> ma) << mb) | bo
            out[key] = out.get(key, 0) + z * u
    return _Records(na + mb, _add(a.parity, b.parity), out).pruned(tol)


@lru_cache(maxsize=4096)
def _normalize_records(t: Term, tol: float) -> _Records:
    if isinstance(t, Gen):
        return _records_of_gen(t.gen)
    if isinstance(t, Id):
        return _identity_records(t.n)
    if isinstance(t, Seq):
        a = _normalize_records(t.first, tol)
        b = _normalize_records(t.second, tol)
        return _seq(a, t.first.arity, b, t.second.arity, tol)
    if isinstance(t, Par):
        a = _normalize_records(t.left, tol)
        b = _normalize_records(t.right, tol)
        return _par(a, t.left.arity, b, t.right.arity, tol)
    raise TypeError(f"not a Term: {t!r}")


def normalize(t: Term, tol: float = DEFAULT_TOL) -> tuple[NormalForm, int, int]:
    """Normal form of t viewed as a state on ``n_in + n_out`` wires (inputs first)."""
    rec = _normalize_records(t, tol)
    width = t.n_in + t.n_out
    whites = tuple((z, format(k, f"0{width}b") if width else "") for k, z in sorted(rec.data.items()))
    parity = rec.parity if whites else Parity.EVEN
    return NormalForm(width, parity, whites), t.n_in, t.n_out


def equal(t: Term, u: Term, tol: float = DEFAULT_TOL) -> bool:
    """Semantic equality of two Terms via their normal forms."""
    if t.arity != u.arity:
        raise ArityError(f"arities differ: {t.arity} vs {u.arity}")
    a, _, _ = normalize(t, tol)
    b, _, _ = normalize(u, tol)
    return nf_equal(a, b, tol)


def nf_equal(a: NormalForm, b: NormalForm, tol: float = DEFAULT_TOL) -> bool:
    if a.n_outputs != b.n_outputs:
        return False
    da = {p: z for z, p in a.whites}
    db = {p: z for z, p in b.whites}
    if any(abs(da.get(p, 0) - db.get(p, 0)) > tol for p in set(da) | set(db)):
        return False
    return a.parity is b.parity or (a.is_zero and b.is_zero)


def state_of_map(t: Term, tol: float = DEFAULT_TOL) -> StateVector:
    """Map-state duality applied to the evaluated Term (inputs become leading bits)."""
    from .evaluate import evaluate

    m = evaluate(t).entries
    n_in, n_out = t.n_in, t.n_out
    amps = {}
    for r in range(m.shape[0]):
        for c in range(m.shape[1]):
            if abs(m[r, c]) > tol:
                amps[(format(c, f"0{n_in}b") if n_in else "") + (format(r, f"0{n_out}b") if n_out else "")] = m[r, c]
    return StateVector.from_dict(n_in + n_out, amps, tol)
