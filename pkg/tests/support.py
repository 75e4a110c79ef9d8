"""Shared test machinery: random Terms and an independent tensor-network oracle."""
from __future__ import annotations

import numpy as np

from fzw import builders as B
from fzw.terms import (BLACK2, BLACK3, DUAL, DUAL_DAGGER, FSWAP, SWAP, Gen, Id, Kind, Par, Seq,
                       Term, White, depth, layer)

SAMPLE_Z = (0, 1, -1, 1j, 0.5, 0.3 + 0.7j, -2.5)


def random_complex(rng: np.random.Generator) -> complex:
    if rng.random() < 0.4:
        return complex(SAMPLE_Z[rng.integers(len(SAMPLE_Z))])
    return complex(round(rng.normal(), 3), round(rng.normal(), 3))


def _gadgets(rng):
    z = random_complex(rng)
    return [
        Gen(SWAP), Gen(FSWAP), Gen(DUAL), Gen(DUAL_DAGGER), Gen(BLACK2), Gen(BLACK3), Gen(White(z)),
        B.x_gate(), B.white_vertex(1, 1, z), B.comult(), B.mult(), B.bra1(), B.ket1(),
    ]


def _leaf(rng, n: int, width: int, budget: int) -> Term:
    options = []
    for g in _gadgets(rng):
        if g.n_in > n or n - g.n_in + g.n_out > width:
            continue
        for pos in range(n - g.n_in + 1):
            t = layer(n, pos, g) if n > g.n_in else g
            if depth(t) <= budget:
                options.append(t)
    if not options or rng.random() < 0.1:
        return Id(n)
    return options[rng.integers(len(options))]


def random_term(rng: np.random.Generator, n_in: int = None, max_depth: int = 8, width: int = 5) -> Term:
    """Random well-typed Term, every intermediate bundle at most ``width`` wires."""
    if n_in is None:
        n_in = int(rng.integers(0, width + 1))
    return _grow(rng, n_in, max_depth, width)


def _grow(rng, n: int, budget: int, width: int) -> Term:
    if budget <= 2 or rng.random() < 0.2:
        return _leaf(rng, n, width, budget)
    if rng.random() < 0.6:
        a = _grow(rng, n, budget - 1, width)
        b = _grow(rng, a.n_out, budget - 1, width)
        return Seq(a, b)
    k = int(rng.integers(0, n + 1))
    wa = int(rng.integers(k, width - (n - k) + 1))
    a = _grow(rng, k, budget - 1, wa)
    b = _grow(rng, n - k, budget - 1, width - wa)
    return Par(a, b)


def random_unitary(rng, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_matrix(rng, m: int, n: int) -> np.ndarray:
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


# Oracle ----------------------------------------------------------------------------
# Each generator is written as an explicit list of nonzero basis amplitudes; a Term is
# flattened into a wire graph and contracted pairwise.  No code is shared with
# the package's evaluator.

def _gen_tensor(g) -> np.ndarray:
    k = g.kind
    if k in (Kind.SWAP, Kind.FSWAP):
        t = np.zeros((2, 2, 2, 2), dtype=complex)  # out0, out1, in0, in1
        for a in (0, 1):
            for b in (0, 1):
                t[b, a, a, b] = -1 if (k is Kind.FSWAP and a and b) else 1
        return t
    if k in (Kind.DUAL, Kind.DUAL_DAGGER):
        t = np.zeros((2, 2), dtype=complex)
        t[0, 0] = t[1, 1] = 1
        return t
    if k is Kind.BLACK2:
        t = np.zeros((2, 2), dtype=complex)
        t[0, 1] = t[1, 0] = 1
        return t
    if k is Kind.BLACK3:
        t = np.zeros((2, 2, 2), dtype=complex)
        t[1, 0, 0] = t[0, 1, 0] = t[0, 0, 1] = 1
        return t
    t = np.zeros((2, 2), dtype=complex)
    t[0, 0], t[1, 1] = 1, g.z
    return t


class _Net:
    def __init__(self):
        self.next = 0
        self.ops: list = []

    def fresh(self, k: int) -> list[int]:
        out = list(range(self.next, self.next + k))
        self.next += k
        return out

    def walk(self, t: Term, ins: list[int]) -> list[int]:
        if isinstance(t, Id):
            return ins
        if isinstance(t, Seq):
            return self.walk(t.second, self.walk(t.first, ins))
        if isinstance(t, Par):
            k = t.left.n_in
            return self.walk(t.left, ins[:k]) + self.walk(t.right, ins[k:])
        outs = self.fresh(t.n_out)
        self.ops.append((_gen_tensor(t.gen), outs + ins))
        return outs


def _contract(a, la, b, lb):
    """Contract two labelled tensors over their shared labels."""
    local = {lab: k for k, lab in enumerate(dict.fromkeys(la + lb))}
    shared = set(la) & set(lb)
    keep = [lab for lab in la + lb if lab not in shared]
    keep = list(dict.fromkeys(keep))
    out = np.einsum(a, [local[x] for x in la], b, [local[x] for x in lb], [local[x] for x in keep])
    return out, keep


def oracle_matrix(t: Term) -> np.ndarray:
    net = _Net()
    ins = net.fresh(t.n_in)
    outs = net.walk(t, ins)
    pool = [(tensor, list(legs)) for tensor, legs in net.ops]
    fixed_out = []
    for lab in outs:
        if lab in ins:  # a wire running straight through
            new = net.fresh(1)[0]
            pool.append((np.eye(2, dtype=complex), [new, lab]))
            fixed_out.append(new)
        else:
            fixed_out.append(lab)
    free = set(fixed_out + ins)
    while len(pool) > 1:
        # Prefer a pair that shares a label; otherwise take an outer product.
        pick = None
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                if set(pool[i][1]) & set(pool[j][1]):
                    pick = (i, j)
                    break
            if pick:
                break
        i, j = pick or (0, 1)
        (a, la), (b, lb) = pool[i], pool[j]
        merged = _contract(a, la, b, lb)
        pool = [p for k, p in enumerate(pool) if k not in (i, j)] + [merged]
    if not pool:
        return np.ones((1, 1), dtype=complex)
    tensor, labels = pool[0]
    # A label seen twice in one tensor is a closed loop (cap on cup): trace it.
    while len(labels) != len(set(labels)):
        for k, lab in enumerate(labels):
            if labels.index(lab) != k:
                tensor = np.trace(tensor, axis1=labels.index(lab), axis2=k)
                labels = [x for x in labels if x != lab]
                break
    assert set(labels) == free
    order = [labels.index(lab) for lab in fixed_out + ins]
    return np.transpose(tensor, order).reshape(1 << t.n_out, 1 << t.n_in)
