"""Interpretation of Terms as graded matrices.

``evaluate`` is the structural fold (generators to their tables, Seq to matrix
product, Par to Kronecker product), memoized on the structural hash.
``eval_state`` computes the same column for a state-shaped Term by pushing a
dense state tensor through the tree; it never materializes ``Id(k) | f`` as a
Kronecker product, so wide but thin diagrams stay within the wire limit.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ArityError, CapacityError
from .linalg import (DEFAULT_TOL, MAX_WIRES, GradedMatrix, StateVector, check_capacity,
                     compose, tensor)
from .terms import Gen, Generator, Id, Kind, Par, Seq, Term

# A dense map is also refused when it would hold more than 2**MAX_ENTRIES_LOG2 entries.
MAX_ENTRIES_LOG2 = 24


def _table(g: Generator) -> np.ndarray:
    k = g.kind
    if k is Kind.SWAP:
        m = np.zeros((4, 4))
        m[0, 0] = m[3, 3] = m[1, 2] = m[2, 1] = 1
        return m
    if k is Kind.FSWAP:
        m = np.zeros((4, 4))
        m[0, 0] = m[1, 2] = m[2, 1] = 1
        m[3, 3] = -1
        return m
    if k is Kind.DUAL:
        return np.array([[1], [0], [0], [1]])
    if k is Kind.DUAL_DAGGER:
        return np.array([[1, 0, 0, 1]])
    if k is Kind.BLACK2:
        return np.array([[0], [1], [1], [0]])
    if k is Kind.BLACK3:
        v = np.zeros((8, 1))
        v[0b100] = v[0b010] = v[0b001] = 1
        return v
    return np.array([[1], [0], [0], [g.z]], dtype=complex)


@lru_cache(maxsize=None)
def generator_matrix(g: Generator) -> GradedMatrix:
    n_in, n_out = g.arity
    return GradedMatrix.from_array(_table(g), n_in, n_out)


def _check(t: Term, max_wires: int) -> None:
    check_capacity(max(t.n_in, t.n_out), max_wires)
    if t.n_in + t.n_out > MAX_ENTRIES_LOG2:
        raise CapacityError(f"a dense {t.n_in}->{t.n_out} map is too large")


def evaluate(t: Term, max_wires: int = MAX_WIRES) -> GradedMatrix:
    """Structural fold of t; raises CapacityError past the wire limit.

    When only an interior layer is too wide for a dense matrix, the basis
    columns are pushed through t instead (see ``INTERNAL_SLACK``).
    """
    _check(t, max_wires)
    if _widest(t) <= max_wires:
        return _evaluate(t, max_wires)
    d = 1 << t.n_in
    psi = np.eye(d, dtype=complex).reshape((2,) * t.n_in + (d,))
    out = _apply(t, psi, 0, max_wires)
    return GradedMatrix.from_array(out.reshape(1 << t.n_out, d), t.n_in, t.n_out)


@lru_cache(maxsize=8192)
def _evaluate(t: Term, max_wires: int) -> GradedMatrix:
    _check(t, max_wires)
    if isinstance(t, Gen):
        return generator_matrix(t.gen)
    if isinstance(t, Id):
        return GradedMatrix.identity(t.n)
    if isinstance(t, Seq):
        return compose(_evaluate(t.second, max_wires), _evaluate(t.first, max_wires))
    if isinstance(t, Par):
        return tensor(_evaluate(t.left, max_wires), _evaluate(t.right, max_wires))
    raise TypeError(f"not a Term: {t!r}")


def clear_cache() -> None:
    _evaluate.cache_clear()


# State pushing --------------------------------------------------------------------

_DENSE_LEAF = 10  # subterms with at most this many legs are applied as one matrix
# Derived vertices open a few wires internally (bent legs, projector rings); the
# pushed state may grow this far past the declared limit.
INTERNAL_SLACK = 6


@lru_cache(maxsize=8192)
def _peak(t: Term) -> int:
    """Largest leg count (inputs + outputs) of any node in t."""
    own = t.n_in + t.n_out
    if isinstance(t, Seq):
        return max(own, _peak(t.first), _peak(t.second))
    if isinstance(t, Par):
        return max(own, _peak(t.left), _peak(t.right))
    return own


@lru_cache(maxsize=8192)
def _widest(t: Term) -> int:
    own = max(t.n_in, t.n_out)
    if isinstance(t, Seq):
        return max(own, _widest(t.first), _widest(t.second))
    if isinstance(t, Par):
        return max(own, _widest(t.left), _widest(t.right))
    return own


def _apply(t: Term, psi: np.ndarray, off: int, max_wires: int) -> np.ndarray:
    if isinstance(t, Id):
        return psi
    if isinstance(t, Seq) and _peak(t) > _DENSE_LEAF:
        psi = _apply(t.first, psi, off, max_wires)
        return _apply(t.second, psi, off, max_wires)
    if isinstance(t, Par) and _peak(t) > _DENSE_LEAF:
        psi = _apply(t.left, psi, off, max_wires)
        return _apply(t.right, psi, off + t.left.n_out, max_wires)
    width = psi.ndim - t.n_in + t.n_out
    check_capacity(width, max_wires + INTERNAL_SLACK)
    m = _evaluate(t, max_wires).entries.reshape((2,) * (t.n_out + t.n_in))
    in_axes = list(range(t.n_out, t.n_out + t.n_in))
    out = np.tensordot(m, psi, axes=(in_axes, list(range(off, off + t.n_in))))
    # tensordot puts the new output legs first; move them back to position off.
    return np.moveaxis(out, list(range(t.n_out)), list(range(off, off + t.n_out)))


def state_array(t: Term, max_wires: int = MAX_WIRES) -> np.ndarray:
    if t.n_in != 0:
        raise ArityError(f"expected a state (0 inputs), got {t.n_in}")
    check_capacity(t.n_out, max_wires)
    psi = _apply(t, np.ones(()), 0, max_wires)
    return np.asarray(psi, dtype=complex).reshape(-1)


def eval_state(t: Term, tol: float = DEFAULT_TOL, max_wires: int = MAX_WIRES) -> StateVector:
    """The single column of a 0 -> n Term as a sparse state."""
    return StateVector.from_array(state_array(t, max_wires), tol=tol)


def closed_amplitude(t: Term) -> complex:
    if t.n_in or t.n_out:
        raise ArityError(f"expected a closed diagram, got {t.n_in}->{t.n_out}")
    return complex(state_array(t)[0])
