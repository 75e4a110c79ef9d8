"""Dual-rail qubits: logical |0> and |1> live on a mode pair as |00> and |11>.

``encode`` reads a logical matrix off an even Term on mode pairs; the gate
constructions below realize H, Z phases, Z spiders and CZ from beam splitters,
phases, bit flips and bent wires.  Gadgets that mix pairs can leave the
encoded subspace (a *hole*); ``eliminate_holes`` inserts even projectors at
the marked stage boundaries so that encoding composes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


import numpy as np

from . import builders as B
from .errors import ArityError, OddParityError
from .evaluate import evaluate
from .linalg import DEFAULT_TOL, Parity
from .terms import Gen, Id, Kind, Par, Seq, Term, generators, par, seq


@dataclass(frozen=True)
class LogicalMap:
    n_in: int
    n_out: int
    entries: np.ndarray

    @property
    def n_qubits(self) -> int:
        return self.n_in

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (1 << self.n_out, 1 << self.n_in):
            raise ArityError(f"a {self.n_in}->{self.n_out} qubit map needs shape {(1 << self.n_out, 1 << self.n_in)}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)


def _encoded_indices(n_pairs: int) -> np.ndarray:
    """Mode-space index of enc(x) for each logical x, enc(b) = bb per pair."""
    out = np.zeros(1 << n_pairs, dtype=np.int64)
    for x in range(1 << n_pairs):
        k = 0
        for q in range(n_pairs):
            b = (x >> (n_pairs - 1 - q)) & 1
            k = (k << 2) | (0b11 * b)
        out[x] = k
    return out


def encode(t: Term, tol: float = DEFAULT_TOL) -> LogicalMap:
    """Logical matrix ``M_L[x, y] = <enc x| eval(t) |enc y>``."""
    if t.n_in % 2 or t.n_out % 2:
        raise ArityError(f"dual-rail terms act on mode pairs, got {t.n_in}->{t.n_out}")
    m = evaluate(t)
    if m.parity is Parity.ODD:
        raise OddParityError("only even maps have a dual-rail encoding")
    rows, cols = _encoded_indices(t.n_out // 2), _encoded_indices(t.n_in // 2)
    return LogicalMap(t.n_in // 2, t.n_out // 2, m.entries[np.ix_(rows, cols)])


# Reference gates and scalar comparison ---------------------------------------------

def hadamard_matrix() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def zphase_matrix(theta: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * theta)])


def cz_matrix() -> np.ndarray:
    return np.diag([1, 1, 1, -1]).astype(complex)


def zspider_matrix(n_in: int, n_out: int) -> np.ndarray:
    m = np.zeros((1 << n_out, 1 << n_in), dtype=complex)
    m[0, 0] = 1
    m[-1, -1] = 1
    return m


def scalar_fit(actual: np.ndarray, target: np.ndarray) -> tuple[complex, float]:
    """Best single scalar s with actual ~ s * target, and the residual max deviation."""
    a, t = np.asarray(actual, dtype=complex), np.asarray(target, dtype=complex)
    s = complex(np.vdot(t, a) / np.vdot(t, t))
    return s, float(np.max(np.abs(a - s * t), initial=0.0))


# Gate constructions ------------------------------------------------------------------

def hadamard() -> Term:
    """Bit flip on the left input rail, a (1,1) splitter, bit flip on the right output rail."""
    return seq(Par(B.x_gate(), Id(1)), B.beam_splitter(1, 1), Par(Id(1), B.x_gate()))


def zphase(theta: float) -> Term:
    return Par(Id(1), B.phase(theta))


def zspider(n_in: int, n_out: int) -> Term:
    """Planar Z spider: outer rails run straight, inner rails of neighbouring pairs are bent together."""
    if n_in < 0 or n_out < 0 or n_in + n_out == 0:
        raise ArityError("a Z spider needs at least one leg")
    caps = par(Id(1), *[B.CAP] * (n_in - 1), Id(1)) if n_in else None
    cups = par(Id(1), *[B.CUP] * (n_out - 1), Id(1)) if n_out else None
    if n_in and n_out:
        return Seq(caps, cups)
    if n_out:
        return Seq(B.CUP, cups)
    return Seq(caps, B.CAP)


def cz() -> Term:
    """Two pairs; the inner rails pass through a Hadamard gadget bent on its side."""
    bent = seq(Par(B.CUP, Id(2)), par(Id(1), hadamard(), Id(1)), Par(Id(2), B.CAP))
    return par(Id(1), bent, Id(1))


def logical_gate(name: str, *args) -> Term:
    key = name.lower()
    if key == "h":
        return hadamard()
    if key == "zphase":
        return zphase(*args)
    if key == "zspider":
        return zspider(*args)
    if key == "cz":
        return cz()
    raise ValueError(f"unknown logical gate {name!r}")


def reference_matrix(name: str, *args) -> np.ndarray:
    key = name.lower()
    if key == "h":
        return hadamard_matrix()
    if key == "zphase":
        return zphase_matrix(*args)
    if key == "zspider":
        return zspider_matrix(*args)
    if key == "cz":
        return cz_matrix()
    raise ValueError(f"unknown logical gate {name!r}")


@dataclass(frozen=True)
class GateReport:
    name: str
    term: Term
    logical: LogicalMap
    target: np.ndarray
    scalar: complex
    deviation: float


def gate_report(name: str, *args) -> GateReport:
    t = logical_gate(name, *args)
    logical = encode(t)
    target = reference_matrix(name, *args)
    s, dev = scalar_fit(logical.entries, target)
    return GateReport(name, t, logical, target, s, dev)


# Block-level inspection -----------------------------------------------------------------

def _as_beam_splitter(t: Term) -> bool:
    whites = [g.z for g in generators(t) if g.kind is Kind.WHITE]
    if len(whites) != 4:
        return False
    return t == B.beam_splitter(whites[0], whites[1])


def _as_phase(t: Term) -> bool:
    whites = [g.z for g in generators(t) if g.kind is Kind.WHITE]
    return len(whites) == 1 and t == B.white_vertex(1, 1, whites[0])


_PROJECTOR = B.projector()
_X = B.x_gate()


def blocks(t: Term) -> list[str]:
    """Decompose t into named physical blocks; bare generators are reported by kind."""
    if isinstance(t, Id):
        return []
    if t == _PROJECTOR:
        return ["proj"]
    if t == _X:
        return ["X"]
    if t.arity == (2, 2) and _as_beam_splitter(t):
        return ["bs"]
    if t.arity == (1, 1) and _as_phase(t):
        return ["phase"]
    if isinstance(t, Gen):
        return [t.gen.kind.value]
    if isinstance(t, Seq):
        return blocks(t.first) + blocks(t.second)
    return blocks(t.left) + blocks(t.right)


def stray_crossings(t: Term) -> int:
    """Swap or fermionic swap generators not inside a beam splitter or projector block."""
    return sum(1 for b in blocks(t) if b in ("swap", "fswap"))


# Encoding maps and holes --------------------------------------------------------------

def p_matrix(n_pairs: int) -> np.ndarray:
    """Map from 2n modes onto n logical qubits: keeps enc(x), kills every other basis state."""
    m = np.zeros((1 << n_pairs, 1 << (2 * n_pairs)), dtype=complex)
    m[np.arange(1 << n_pairs), _encoded_indices(n_pairs)] = 1
    return m


def p_dagger_matrix(n_pairs: int) -> np.ndarray:
    return p_matrix(n_pairs).conj().T


def even_projectors(n_pairs: int) -> Term:
    return par(*[B.projector()] * n_pairs) if n_pairs else Id(0)


@dataclass(frozen=True)
class DualRailCircuit:
    """Stages on 2n modes; every boundary between stages is a marked hole site."""
    n_qubits: int
    stages: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        for s in self.stages:
            if s.arity != (2 * self.n_qubits, 2 * self.n_qubits):
                raise ArityError(f"stage arity {s.arity} does not fit {self.n_qubits} dual-rail qubits")

    def term(self) -> Term:
        return seq(*self.stages) if self.stages else Id(2 * self.n_qubits)

    def logical(self) -> np.ndarray:
        """Product of the stage encodings (logical composition)."""
        out = np.eye(1 << self.n_qubits, dtype=complex)
        for s in self.stages:
            out = encode(s).entries @ out
        return out


def eliminate_holes(c: DualRailCircuit | Term) -> Term:
    """Insert a layer of even projectors at every marked site; plain Terms are unchanged."""
    if isinstance(c, Term):
        return c
    if not c.stages:
        return c.term()
    parts = [c.stages[0]]
    for s in c.stages[1:]:
        parts += [even_projectors(c.n_qubits), s]
    return seq(*parts)
