"""Graded linear algebra on tensor powers of a single fermionic mode.

Basis states of n wires are indexed by integers whose binary expansion is the
occupation bitstring, leftmost wire as the most significant bit.  A map from
n_in to n_out wires is stored as a dense ``2**n_out x 2**n_in`` array.

The tensor product is the plain Kronecker product.  No sign is ever produced by
juxtaposing wires; all exchange signs come from the fermionic swap generator.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import ArityError, CapacityError, MixedParityError

DEFAULT_TOL = 1e-10
MAX_WIRES = 14


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"
    ZERO = "zero"

    def __add__(self, other: "Parity") -> "Parity":
        if self is Parity.ZERO or other is Parity.ZERO:
            return Parity.ZERO
        return Parity.EVEN if self is other else Parity.ODD

    @property
    def bit(self) -> int:
        """0 for even (and zero), 1 for odd."""
        return 1 if self is Parity.ODD else 0


def bits(index: int, n: int) -> str:
    return format(index, f"0{n}b") if n else ""


def index(bitstring: str) -> int:
    return int(bitstring, 2) if bitstring else 0


@lru_cache(maxsize=None)
def popcount_parity(n: int) -> np.ndarray:
    """Parity of every basis index on n wires, as a read-only int8 vector."""
    out = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        out = np.concatenate([out, out ^ 1])
    out.setflags(write=False)
    return out


def check_capacity(n: int, limit: int = MAX_WIRES) -> None:
    if n > limit:
        raise CapacityError(f"{n} wires exceeds the dense limit of {limit}")


def _log2_dim(d: int) -> int:
    n = d.bit_length() - 1
    if d <= 0 or 1 << n != d:
        raise ArityError(f"dimension {d} is not a power of two")
    return n


def parity_classify(entries: np.ndarray, tol: float = DEFAULT_TOL) -> Parity:
    """Even/Odd/Zero classification of a ``2**m x 2**n`` array.

    Raises MixedParityError when nonzero entries occur in both classes.
    """
    a = np.asarray(entries)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    m, n = _log2_dim(a.shape[0]), _log2_dim(a.shape[1])
    nz = np.abs(a) > tol
    if not nz.any():
        return Parity.ZERO
    cls = popcount_parity(m)[:, None] ^ popcount_parity(n)[None, :]
    has_even = bool((nz & (cls == 0)).any())
    has_odd = bool((nz & (cls == 1)).any())
    if has_even and has_odd:
        raise MixedParityError("nonzero entries in both parity classes")
    return Parity.EVEN if has_even else Parity.ODD


@dataclass(frozen=True, eq=False)
class GradedMatrix:
    """Dense pure map on occupation-number bases with parity metadata."""

    n_in: int
    n_out: int
    entries: np.ndarray
    parity: Parity
    tol: float = field(default=DEFAULT_TOL, repr=False)

    @classmethod
    def from_array(cls, entries, n_in: int | None = None, n_out: int | None = None,
                   tol: float = DEFAULT_TOL, max_wires: int = MAX_WIRES) -> "GradedMatrix":
        a = np.array(entries, dtype=complex)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        m, n = _log2_dim(a.shape[0]), _log2_dim(a.shape[1])
        if (n_in is not None and n_in != n) or (n_out is not None and n_out != m):
            raise ArityError(f"shape {a.shape} does not match {n_in}->{n_out}")
        check_capacity(max(m, n), max_wires)
        a.setflags(write=False)
        return cls(n, m, a, parity_classify(a, tol), tol)

    @classmethod
    def identity(cls, n: int) -> "GradedMatrix":
        check_capacity(n)
        return cls.from_array(np.eye(1 << n), n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def dagger(self) -> "GradedMatrix":
        return GradedMatrix.from_array(self.entries.conj().T, self.n_out, self.n_in, self.tol)

    def allclose(self, other: "GradedMatrix", tol: float | None = None) -> bool:
        return (self.n_in, self.n_out) == (other.n_in, other.n_out) and \
            max_deviation(self, other) <= (self.tol if tol is None else tol)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return compose(self, other)

    def column_state(self, col: int = 0) -> "StateVector":
        return StateVector.from_array(self.entries[:, col], tol=self.tol)


def max_deviation(f: GradedMatrix | np.ndarray, g: GradedMatrix | np.ndarray) -> float:
    a = f.entries if isinstance(f, GradedMatrix) else np.asarray(f)
    b = g.entries if isinstance(g, GradedMatrix) else np.asarray(g)
    if a.shape != b.shape:
        raise ArityError(f"shapes {a.shape} and {b.shape} differ")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def compose(g: GradedMatrix, f: GradedMatrix) -> GradedMatrix:
    """``g . f`` -- apply f first."""
    if f.n_out != g.n_in:
        raise ArityError(f"cannot compose {f.n_in}->{f.n_out} with {g.n_in}->{g.n_out}")
    out = GradedMatrix.from_array(g.entries @ f.entries, f.n_in, g.n_out, min(f.tol, g.tol))
    if out.parity is not Parity.ZERO and out.parity is not f.parity + g.parity:
        raise MixedParityError("composite parity disagrees with the parity sum")
    return out


def tensor(f: GradedMatrix, g: GradedMatrix) -> GradedMatrix:
    """Plain Kronecker product; f occupies the leftmost wires."""
    check_capacity(max(f.n_in + g.n_in, f.n_out + g.n_out))
    return GradedMatrix.from_array(np.kron(f.entries, g.entries), f.n_in + g.n_in,
                                   f.n_out + g.n_out, min(f.tol, g.tol))


def fock(f) -> GradedMatrix:
    """Many-particle action of a single-particle matrix ``f`` (m x n).

    Entry (T, S) is the determinant of the minor of f on rows T and columns S,
    where T and S are the occupied modes of the output and input bitstrings.
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 2:
        raise ArityError("fock expects a 2-d matrix")
    m, n = f.shape
    check_capacity(max(m, n))
    out = np.zeros((1 << m, 1 << n), dtype=complex)
    rows_by_size: dict[int, list[tuple[int, ...]]] = {}
    for k in range(m + 1):
        rows_by_size[k] = list(itertools.combinations(range(m), k))
    for k in range(min(m, n) + 1):
        for cols in itertools.combinations(range(n), k):
            c = _subset_index(cols, n)
            for rows in rows_by_size[k]:
                # numpy's det is LAPACK LU with partial pivoting; 0x0 gives 1.
                out[_subset_index(rows, m), c] = np.linalg.det(f[np.ix_(rows, cols)]) if k else 1.0
    return GradedMatrix.from_array(out, n, m)


def _subset_index(modes: Iterable[int], n: int) -> int:
    return sum(1 << (n - 1 - k) for k in modes)


@dataclass(frozen=True)
class StateVector:
    """Sparse pure-parity state: occupation bitstring -> amplitude."""

    n: int
    amplitudes: Mapping[str, complex]

    def __post_init__(self):
        amps = dict(self.amplitudes)
        parities = set()
        for key in amps:
            if len(key) != self.n or set(key) - {"0", "1"}:
                raise ArityError(f"bad basis label {key!r} for {self.n} wires")
            parities.add(key.count("1") & 1)
        if len(parities) > 1:
            raise MixedParityError("state mixes even and odd occupation numbers")
        object.__setattr__(self, "amplitudes", dict(sorted(amps.items())))

    @classmethod
    def from_dict(cls, n: int, amps: Mapping[str, complex], tol: float = DEFAULT_TOL) -> "StateVector":
        return cls(n, {k: complex(v) for k, v in amps.items() if abs(v) > tol})

    @classmethod
    def from_array(cls, vec, tol: float = DEFAULT_TOL) -> "StateVector":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        n = _log2_dim(v.shape[0])
        return cls(n, {bits(i, n): complex(v[i]) for i in np.flatnonzero(np.abs(v) > tol)})

    @property
    def parity(self) -> Parity:
        if not self.amplitudes:
            return Parity.ZERO
        return Parity.ODD if next(iter(self.amplitudes)).count("1") & 1 else Parity.EVEN

    def to_array(self) -> np.ndarray:
        v = np.zeros(1 << self.n, dtype=complex)
        for k, a in self.amplitudes.items():
            v[index(k)] = a
        return v

    def max_deviation(self, other: "StateVector") -> float:
        if self.n != other.n:
            raise ArityError("states on different wire counts")
        keys = set(self.amplitudes) | set(other.amplitudes)
        return max((abs(self.amplitudes.get(k, 0) - other.amplitudes.get(k, 0)) for k in keys), default=0.0)


def dump(m: GradedMatrix, tol: float = DEFAULT_TOL) -> str:
    """One line per nonzero entry: ``ROWBITS COLBITS RE IM``."""
    lines = []
    for r, c in zip(*np.nonzero(np.abs(m.entries) > tol)):
        z = m.entries[r, c]
        lines.append(f"{bits(int(r), m.n_out) or '-'} {bits(int(c), m.n_in) or '-'} "
                     f"{format_real(z.real)} {format_real(z.imag)}")
    return "\n".join(lines) + ("\n" if lines else "")


def format_real(x: float, digits: int = 17) -> str:
    """Minimal-digit decimal when it round-trips at 15 digits, else ``digits``."""
    x = float(x)
    if x == 0:
        return "0"
    short = format(x, ".15g")
    if float(short) == x:
        return short
    return format(x, f".{digits}g")
