"""Term language of the free PRO over the seven generators.

A Term is an immutable tree of ``Gen``, ``Id``, ``Seq`` and ``Par`` nodes.
``Seq(a, b)`` means a first, then b.  ``Par(a, b)`` puts a on the left wires.
Arity and a structural hash are computed once at construction, so Terms are
cheap dictionary keys for memoization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

from .errors import ArityError


class Kind(Enum):
    SWAP = "swap"
    DUAL = "cup"
    DUAL_DAGGER = "cap"
    FSWAP = "fswap"
    BLACK2 = "black2"
    BLACK3 = "black3"
    WHITE = "white"


ARITY = {
    Kind.SWAP: (2, 2),
    Kind.DUAL: (0, 2),
    Kind.DUAL_DAGGER: (2, 0),
    Kind.FSWAP: (2, 2),
    Kind.BLACK2: (0, 2),
    Kind.BLACK3: (0, 3),
    Kind.WHITE: (0, 2),
}


@dataclass(frozen=True)
class Generator:
    kind: Kind
    z: complex | None = None

    def __post_init__(self):
        if (self.kind is Kind.WHITE) != (self.z is not None):
            raise ValueError("exactly the white generator carries a parameter")
        if self.kind is Kind.WHITE and isinstance(self.z, (int, float)):
            object.__setattr__(self, "z", complex(self.z))

    @property
    def arity(self) -> tuple[int, int]:
        return ARITY[self.kind]

    @property
    def is_odd(self) -> bool:
        return self.kind in (Kind.BLACK2, Kind.BLACK3)


SWAP = Generator(Kind.SWAP)
DUAL = Generator(Kind.DUAL)
DUAL_DAGGER = Generator(Kind.DUAL_DAGGER)
FSWAP = Generator(Kind.FSWAP)
BLACK2 = Generator(Kind.BLACK2)
BLACK3 = Generator(Kind.BLACK3)


def White(z) -> Generator:
    return Generator(Kind.WHITE, z)


class Term:
    """Base class; use the four node constructors below."""

    __slots__ = ()
    n_in: int
    n_out: int

    @property
    def arity(self) -> tuple[int, int]:
        return self.n_in, self.n_out

    def __rshift__(self, other: "Term") -> "Term":
        return Seq(self, other)

    def __matmul__(self, other: "Term") -> "Term":
        return Par(self, other)


def _init(node, n_in: int, n_out: int, key) -> None:
    object.__setattr__(node, "n_in", n_in)
    object.__setattr__(node, "n_out", n_out)
    object.__setattr__(node, "_hash", hash(key))


@dataclass(frozen=True, eq=False, repr=False)
class Gen(Term):
    gen: Generator
    n_in: int = field(init=False)
    n_out: int = field(init=False)
    _hash: int = field(init=False)

    def __post_init__(self):
        _init(self, *self.gen.arity, ("gen", self.gen))

    def __eq__(self, other):
        return isinstance(other, Gen) and self._hash == other._hash and self.gen == other.gen

    def __hash__(self):
        return self._hash

    def __repr__(self):
        g = self.gen
        return f"Gen({g.kind.name}{'' if g.z is None else f', {g.z!r}'})"


@dataclass(frozen=True, eq=False, repr=False)
class Id(Term):
    n: int
    n_in: int = field(init=False)
    n_out: int = field(init=False)
    _hash: int = field(init=False)

    def __post_init__(self):
        if self.n < 0:
            raise ArityError("negative wire count")
        _init(self, self.n, self.n, ("id", self.n))

    def __eq__(self, other):
        return isinstance(other, Id) and self.n == other.n

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Id({self.n})"


@dataclass(frozen=True, eq=False, repr=False)
class Seq(Term):
    first: Term
    second: Term
    n_in: int = field(init=False)
    n_out: int = field(init=False)
    _hash: int = field(init=False)

    def __post_init__(self):
        if self.first.n_out != self.second.n_in:
            raise ArityError(f"Seq: first has {self.first.n_out} outputs, "
                             f"second has {self.second.n_in} inputs")
        _init(self, self.first.n_in, self.second.n_out, ("seq", self.first._hash, self.second._hash))

    def __eq__(self, other):
        return _tree_eq(self, other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Seq({self.first!r}, {self.second!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Par(Term):
    left: Term
    right: Term
    n_in: int = field(init=False)
    n_out: int = field(init=False)
    _hash: int = field(init=False)

    def __post_init__(self):
        _init(self, self.left.n_in + self.right.n_in, self.left.n_out + self.right.n_out,
              ("par", self.left._hash, self.right._hash))

    def __eq__(self, other):
        return _tree_eq(self, other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Par({self.left!r}, {self.right!r})"


def _tree_eq(a: Term, b: Term) -> bool:
    # Iterative, so very deep trees do not hit the recursion limit.
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if type(x) is not type(y) or x._hash != y._hash:
            return False
        if isinstance(x, Seq):
            stack += [(x.first, y.first), (x.second, y.second)]
        elif isinstance(x, Par):
            stack += [(x.left, y.left), (x.right, y.right)]
        elif x != y:
            return False
    return True


def arity(t: Term) -> tuple[int, int]:
    return t.n_in, t.n_out


# Combinators ---------------------------------------------------------------

def seq(*terms: Term) -> Term:
    """Sequential composite of one or more terms, balanced to keep depth low."""
    if not terms:
        raise ArityError("seq needs at least one term")
    if len(terms) == 1:
        return terms[0]
    mid = len(terms) // 2
    return Seq(seq(*terms[:mid]), seq(*terms[mid:]))


def par(*terms: Term) -> Term:
    """Parallel composite, left to right; the empty product is Id(0)."""
    if not terms:
        return Id(0)
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def layer(width: int, pos: int, t: Term) -> Term:
    """t acting on wires ``pos .. pos + t.n_in - 1`` of a ``width``-wire bundle."""
    rest = width - pos - t.n_in
    if pos < 0 or rest < 0:
        raise ArityError(f"cannot place a {t.n_in}-input term at {pos} in {width} wires")
    parts = ([Id(pos)] if pos else []) + [t] + ([Id(rest)] if rest else [])
    return par(*parts)


def permutation(perm: Sequence[int], crossing: Generator = SWAP) -> Term:
    """Wire permutation: output k carries input ``perm[k]``.

    Realized by adjacent transpositions (bubble sort) of the given crossing.
    """
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ArityError(f"{perm!r} is not a permutation")
    current = list(perm)
    steps: list[int] = []
    # Sort target order back to identity, recording swaps; reverse to build.
    for i in range(n):
        for j in range(n - 1 - i):
            if current[j] > current[j + 1]:
                current[j], current[j + 1] = current[j + 1], current[j]
                steps.append(j)
    layers = [layer(n, j, Gen(crossing)) for j in reversed(steps)]
    return seq(*layers) if layers else Id(n)


def generators(t: Term) -> Iterator[Generator]:
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Gen):
            yield x.gen
        elif isinstance(x, Seq):
            stack += [x.second, x.first]
        elif isinstance(x, Par):
            stack += [x.right, x.left]


def size(t: Term) -> int:
    return sum(1 for _ in generators(t))


def depth(t: Term) -> int:
    if isinstance(t, Seq):
        return 1 + max(depth(t.first), depth(t.second))
    if isinstance(t, Par):
        return 1 + max(depth(t.left), depth(t.right))
    return 0
