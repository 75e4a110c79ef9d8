"""Optical fermionic circuits: placed gates, circuit lifting, detection amplitudes.

Modes are numbered left to right.  A beam splitter with parameters (r, t) acts
on one particle as the matrix ``[[r, -conj(t)], [t, conj(r)]]`` in mode order,
and a phase gate on mode k multiplies its occupied state by ``exp(i theta)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import builders as B
from .errors import ArityError
from .evaluate import closed_amplitude
from .layout import Wiring
from .terms import FSWAP, SWAP, Gen, Id, Par, Seq, Term

creation = B.creation
annihilation = B.annihilation

UNITARITY_TOL = 1e-9
_ARITY = {"bs": 2, "phase": 1, "fswap": 2, "swap": 2, "x": 1}


@dataclass(frozen=True)
class Gate:
    kind: str
    modes: tuple[int, ...]
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"unknown gate {self.kind!r}")
        if len(self.modes) != _ARITY[self.kind] or len(set(self.modes)) != len(self.modes):
            raise ArityError(f"{self.kind} needs {_ARITY[self.kind]} distinct modes, got {self.modes}")

    @classmethod
    def beam_splitter(cls, a: int, b: int, r, t) -> "Gate":
        return cls("bs", (a, b), (complex(r), complex(t)))

    @classmethod
    def phase(cls, k: int, theta: float) -> "Gate":
        return cls("phase", (k,), (float(theta),))

    def term(self) -> Term:
        if self.kind == "bs":
            return B.beam_splitter(*self.params)
        if self.kind == "phase":
            return B.phase(*self.params)
        if self.kind == "x":
            return B.x_gate()
        return Gen(FSWAP if self.kind == "fswap" else SWAP)

    def single_particle(self) -> np.ndarray:
        """The gate's action on one particle, in the order of its target modes."""
        if self.kind == "bs":
            r, t = self.params
            return np.array([[r, -t.conjugate()], [t, r.conjugate()]])
        if self.kind == "phase":
            return np.array([[np.exp(1j * self.params[0])]])
        if self.kind in ("swap", "fswap"):
            return np.array([[0, 1], [1, 0]], dtype=complex)
        raise ValueError("a bit flip changes the particle number")


@dataclass(frozen=True)
class CircuitSpec:
    n_modes: int
    elements: tuple[Gate, ...] = ()
    preparations: tuple[int | None, ...] | None = None
    detections: tuple[int | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for name in ("preparations", "detections"):
            v = getattr(self, name)
            if v is None:
                v = (None,) * self.n_modes
            v = tuple(v)
            if len(v) != self.n_modes or any(b not in (None, 0, 1) for b in v):
                raise ArityError(f"{name} must give 0, 1 or None for each of {self.n_modes} modes")
            object.__setattr__(self, name, v)
        for g in self.elements:
            if any(not 0 <= k < self.n_modes for k in g.modes):
                raise ArityError(f"gate {g.kind} targets modes {g.modes} outside 0..{self.n_modes - 1}")
            if g.kind == "bs":
                r, t = g.params
                if abs(abs(r) ** 2 + abs(t) ** 2 - 1) > UNITARITY_TOL:
                    warnings.warn(f"beam splitter ({r}, {t}) is not unitary", stacklevel=3)

    def with_detections(self, outcomes: Sequence[int | None]) -> "CircuitSpec":
        return CircuitSpec(self.n_modes, self.elements, self.preparations, tuple(outcomes))


def to_term(c: CircuitSpec) -> Term:
    """The circuit as a Term; gates on non-adjacent modes are routed with plain swaps."""
    w = Wiring([k for k in range(c.n_modes) if c.preparations[k] is None])
    for k in range(c.n_modes):
        b = c.preparations[k]
        if b is not None:
            at = sum(1 for x in w.wires if x < k)
            w.state(B.ket1() if b else B.ket0(), [k], at=at)
    for g in c.elements:
        w.apply(g.term(), list(g.modes), list(g.modes))
    w.arrange(list(range(c.n_modes)))
    for k in reversed(range(c.n_modes)):
        b = c.detections[k]
        if b is not None:
            w.apply(B.bra1() if b else B.bra0(), [k], [])
    return w.term()


def single_particle_matrix(c: CircuitSpec) -> np.ndarray:
    """Product of the gates' one-particle matrices embedded in n_modes dimensions."""
    u = np.eye(c.n_modes, dtype=complex)
    for g in c.elements:
        m = np.eye(c.n_modes, dtype=complex)
        idx = np.array(g.modes)
        m[np.ix_(idx, idx)] = g.single_particle()
        u = m @ u
    return u


def _fan_out(m: int) -> Term:
    """1 -> m black vertex fused from binary splits, so it never opens a wide state."""
    if m <= 2:
        return B.black_vertex(1, m)
    return Seq(B.comult(), Par(Seq(B.x_gate(), _fan_out(m - 1)), Id(1)))


def _fan_in(n: int) -> Term:
    if n <= 2:
        return B.black_vertex(n, 1)
    return Seq(Par(Seq(_fan_in(n - 1), B.x_gate()), Id(1)), B.mult())


def lift_matrix(f) -> Term:
    """A Term whose interpretation is the many-particle action of f.

    Each input is split by a black vertex into one wire per output, the wire
    from input i to output j carries a white vertex with parameter ``f[j, i]``,
    the wires are regrouped by output with fermionic swaps, and each output
    collects its wires with a black vertex.  Bit flips sit at both boundaries.
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 2:
        raise ArityError("lift_matrix needs a matrix")
    m, n = f.shape
    w = Wiring([("in", i) for i in range(n)])
    for i in range(n):
        w.apply(Seq(B.x_gate(), _fan_out(m)), [("in", i)], [(i, j) for j in range(m)])
        for j in range(m):
            w.apply(B.white_vertex(1, 1, f[j, i]), [(i, j)], [(i, j)])
    w.arrange([(i, j) for j in range(m) for i in range(n)], FSWAP)
    for j in range(m):
        w.apply(Seq(_fan_in(n), B.x_gate()), [(i, j) for i in range(n)], [("out", j)])
    return w.term()


def amplitude(c: CircuitSpec) -> complex:
    if None in c.preparations or None in c.detections:
        raise ArityError("every mode must be prepared and detected")
    return closed_amplitude(to_term(c))


amplitudes = amplitude


def probability(c: CircuitSpec, outcomes: Sequence[int]) -> float:
    return abs(amplitude(c.with_detections(outcomes))) ** 2


probabilities = probability


def outcome_distribution(c: CircuitSpec) -> dict[str, float]:
    """Probability of every detection pattern of a fully prepared circuit."""
    if None in c.preparations:
        raise ArityError("every mode must be prepared")
    out = {}
    for k in range(1 << c.n_modes):
        bits = tuple(int(ch) for ch in format(k, f"0{c.n_modes}b"))
        out["".join(map(str, bits))] = probability(c, bits)
    return out


def mach_zehnder_circuit(r, t, r2, t2, theta: float, detect: Sequence[int] | None = None) -> CircuitSpec:
    """One particle enters the left arm, meets splitter (r2, t2), a phase on the
    left arm, then splitter (r, t)."""
    return CircuitSpec(
        2,
        (Gate.beam_splitter(0, 1, r2, t2), Gate.phase(0, theta), Gate.beam_splitter(0, 1, r, t)),
        (1, 0),
        tuple(detect) if detect is not None else None,
    )


def mach_zehnder(r, t, r2, t2, theta: float) -> tuple[float, float]:
    """Detection probabilities (left, right) computed from the diagram."""
    c = mach_zehnder_circuit(r, t, r2, t2, theta)
    return probability(c, (1, 0)), probability(c, (0, 1))


def mach_zehnder_closed_form(r, t, r2, t2, theta: float) -> tuple[float, float]:
    r, t, r2, t2 = map(complex, (r, t, r2, t2))
    e = complex(math.cos(theta), math.sin(theta))
    return abs(r2 * r * e - t2 * t.conjugate()) ** 2, abs(r2 * t * e + t2 * r.conjugate()) ** 2
