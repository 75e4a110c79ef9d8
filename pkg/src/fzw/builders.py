"""Derived diagrams expanded into the seven generators.

Vertices with inputs are obtained from states by bending the first ``n_in``
legs down on the left: ``vertex(n_in, n_out) = (Id(n_in) | state) ; caps``
with nested caps.  Black and white states are symmetric under plain swaps, so
the entry of the bent map at (out, in) is the state entry at ``in ++ out``.
"""
from __future__ import annotations

import cmath

from .terms import (BLACK2, BLACK3, DUAL, DUAL_DAGGER, FSWAP, SWAP, Gen, Generator, Id,
                    Kind, Par, Seq, Term, White, layer, par, seq)

CUP = Gen(DUAL)
CAP = Gen(DUAL_DAGGER)


def nested_caps(k: int, rest: int) -> Term:
    """Close the first k wires against the next k (innermost pair first)."""
    steps = [layer(2 * k - 2 * i + rest, k - 1 - i, CAP) for i in range(k)]
    return seq(*steps) if steps else Id(rest)


def nested_cups(k: int, above: int) -> Term:
    """Inverse of ``nested_caps``: create k nested cup pairs on the left."""
    steps = [layer(2 * i + above, i, CUP) for i in range(k)]
    return seq(*steps) if steps else Id(above)


def bend_inputs(state: Term, n_in: int) -> Term:
    """Partial transposition to the left of a 0 -> (n_in + n_out) state."""
    if state.n_in != 0 or state.n_out < n_in:
        raise ValueError("bend_inputs expects a state with enough legs")
    if n_in == 0:
        return state
    n_out = state.n_out - n_in
    return Seq(Par(Id(n_in), state), nested_caps(n_in, n_out))


def costate(g: Generator) -> Term:
    """The generator's state bent fully down; used as its vertical reflection."""
    src = g if g.kind is not Kind.WHITE else White(g.z.conjugate())
    return bend_inputs(Gen(src), src.arity[1])


# Black vertices ---------------------------------------------------------------

def black_state(n: int) -> Term:
    """0 -> n black vertex: sum of the single-occupation basis states."""
    if n < 0:
        raise ValueError("negative arity")
    if n == 0:
        return Seq(Gen(BLACK2), CAP)
    if n == 1:
        return Seq(Gen(BLACK3), Par(CAP, Id(1)))
    if n == 2:
        return Gen(BLACK2)
    if n == 3:
        return Gen(BLACK3)
    prev = black_state(n - 1)
    return Seq(prev, Par(Id(n - 2), Seq(x_gate(), black_vertex(1, 2))))


def black_vertex(n_in: int, n_out: int) -> Term:
    if n_in == 0:
        return black_state(n_out)
    return bend_inputs(black_state(n_in + n_out), n_in)


def x_gate() -> Term:
    """Binary black vertex read as a 1 -> 1 map: the bit flip."""
    return bend_inputs(Gen(BLACK2), 1)


def comult() -> Term:
    return black_vertex(1, 2)


def mult() -> Term:
    return black_vertex(2, 1)


# White vertices ---------------------------------------------------------------

def white_state(n: int, z) -> Term:
    """0 -> n white vertex: |0...0> + z|1...1>, n even."""
    if n % 2:
        raise ValueError("white vertices have even total arity")
    if n == 0:
        return Seq(Gen(White(z)), CAP)
    if n == 2:
        return Gen(White(z))
    prev = white_state(n - 2, z)
    return Seq(prev, Par(Id(n - 3), projector_1_3()))


def white_vertex(n_in: int, n_out: int, z) -> Term:
    if (n_in + n_out) % 2:
        raise ValueError("white vertices have even total arity")
    if n_in == 0:
        return white_state(n_out, z)
    return bend_inputs(white_state(n_in + n_out, z), n_in)


def projector() -> Term:
    """Even-subspace projector on two modes, the quaternary white vertex.

    A ring of two binary blacks and two half-weight whites encircles both wires;
    the lower arcs cross the wires fermionically, the upper arcs plainly.
    """
    half = Gen(White(0.5))
    black_cap = black_vertex(2, 0)
    return seq(
        Par(Id(1), Par(half, Id(1))),          # [a, p, q, b]
        Par(Gen(FSWAP), Id(2)),                 # [p, a, q, b]
        Par(Id(2), Gen(FSWAP)),                 # [p, a, b, q]
        Par(Id(2), Par(half, Id(2))),           # [p, a, u, v, b, q]
        Par(Id(1), Par(Gen(SWAP), Id(3))),      # [p, u, a, v, b, q]
        Par(Id(3), Par(Gen(SWAP), Id(1))),      # [p, u, a, b, v, q]
        Par(black_cap, Id(4)),                  # [a, b, v, q]
        Par(Id(2), black_cap),                  # [a, b]
    )


def projector_1_3() -> Term:
    """The projector with its first input bent up: 1 -> 3."""
    return Seq(Par(CUP, Id(1)), Par(Id(1), projector()))


# States, effects and physical gates ---------------------------------------------

def ket1() -> Term:
    return black_state(1)


def ket0() -> Term:
    return Seq(ket1(), x_gate())


def bra1() -> Term:
    return black_vertex(1, 0)


def bra0() -> Term:
    return Seq(x_gate(), bra1())


def phase(theta: float) -> Term:
    return white_vertex(1, 1, cmath.exp(1j * theta))


def beam_splitter(r, t) -> Term:
    """Two-mode splitter: |10> -> r|10> + t|01>, |01> -> -conj(t)|10> + conj(r)|01>."""
    r, t = complex(r), complex(t)
    x2 = Par(x_gate(), x_gate())
    return seq(
        x2,
        Par(comult(), comult()),
        par(white_vertex(1, 1, r), white_vertex(1, 1, t),
            white_vertex(1, 1, -t.conjugate()), white_vertex(1, 1, r.conjugate())),
        Par(Id(1), Par(Gen(FSWAP), Id(1))),
        Par(mult(), mult()),
        x2,
    )


def creation() -> Term:
    """a-dagger: feed an occupied mode into a black merge, then flip."""
    return seq(Par(Id(1), ket1()), mult(), x_gate())


def annihilation() -> Term:
    return seq(x_gate(), comult(), Par(Id(1), bra1()))


def self_crossing() -> Term:
    """A wire looped through itself with one fermionic crossing (acts as Z)."""
    return seq(Par(Id(1), CUP), Par(Gen(FSWAP), Id(1)), Par(Id(1), CAP))


def self_crossing_left() -> Term:
    return seq(Par(CUP, Id(1)), Par(Id(1), Gen(FSWAP)), Par(CAP, Id(1)))


# Vertical reflection ------------------------------------------------------------

def dagger(t: Term) -> Term:
    """Vertical reflection; White parameters are conjugated.

    Generator states reflect to their bent costates, and an exact bent costate
    reflects back to the bare generator so that dagger is an involution.
    """
    if isinstance(t, Gen):
        k = t.gen.kind
        if k is Kind.DUAL:
            return CAP
        if k is Kind.DUAL_DAGGER:
            return CUP
        if k in (Kind.SWAP, Kind.FSWAP):
            return t
        return costate(t.gen)
    if isinstance(t, Id):
        return t
    g = _as_costate(t)
    if g is not None:
        return Gen(g)
    if isinstance(t, Seq):
        return Seq(dagger(t.second), dagger(t.first))
    return Par(dagger(t.left), dagger(t.right))


def _as_costate(t: Term) -> Generator | None:
    """If t is exactly ``costate(g)`` return the generator g it was bent from."""
    if not (isinstance(t, Seq) and t.n_out == 0 and isinstance(t.first, Par)):
        return None
    inner = t.first.right
    if not isinstance(inner, Gen) or inner.gen.kind in (Kind.SWAP, Kind.FSWAP, Kind.DUAL_DAGGER):
        return None
    g = inner.gen
    src = g if g.kind is not Kind.WHITE else White(g.z.conjugate())
    return src if costate(src) == t else None
