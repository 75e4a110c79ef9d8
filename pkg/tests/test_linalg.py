import itertools

import numpy as np
import pytest

from fzw import builders as B
from fzw.errors import ArityError, CapacityError, MixedParityError
from fzw.evaluate import evaluate, generator_matrix
from fzw.linalg import (GradedMatrix, Parity, StateVector, bits, compose, dump, fock, format_real,
                        index, max_deviation, parity_classify, tensor)
from fzw.terms import FSWAP

from support import random_matrix, random_unitary


def flow_count(f, rows, cols):
    """Fock entry by enumerating bijections: sum over matchings of the product of
    edge weights, with a minus sign for every pair of crossing edges."""
    if len(rows) != len(cols):
        return 0
    total = 0
    for perm in itertools.permutations(range(len(cols))):
        w = 1
        for k, j in enumerate(perm):
            w *= f[rows[j], cols[k]]
        inversions = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
        total += (-1) ** inversions * w
    return total


def occupied(i, n):
    return tuple(k for k in range(n) if (i >> (n - 1 - k)) & 1)


X = evaluate(B.x_gate())
ID1 = GradedMatrix.identity(1)
ID2 = GradedMatrix.identity(2)


def test_compose_identity():
    out = compose(ID2, ID2)
    assert out.allclose(ID2)
    assert out.parity is Parity.EVEN


def test_x_squared_is_identity():
    assert compose(X, X).allclose(ID1)
    assert X.parity is Parity.ODD


def test_creation_anticommutator():
    a = GradedMatrix.from_array([[0, 1], [0, 0]])
    ad = GradedMatrix.from_array([[0, 0], [1, 0]])
    total = compose(a, ad).entries + compose(ad, a).entries
    assert max_deviation(total, np.eye(2)) == 0


def test_compose_arity_error():
    with pytest.raises(ArityError):
        compose(ID1, ID2)


def test_tensor_ket_order():
    k1 = evaluate(B.ket1())
    k0 = evaluate(B.ket0())
    v = tensor(k1, k0).entries[:, 0]
    assert v[index("10")] == 1 and np.count_nonzero(v) == 1


def test_tensor_identities_and_bitflip():
    assert tensor(ID1, ID1).allclose(ID2)
    xx = tensor(X, X)
    assert xx.entries[index("00"), index("11")] == 1
    assert xx.parity is Parity.EVEN


def test_tensor_is_plain_kronecker():
    # Odd times odd: no sign appears anywhere.
    b = evaluate(B.black_vertex(0, 1))
    out = tensor(b, b)
    assert out.entries[index("11"), 0] == 1


def test_tensor_associative():
    rng = np.random.default_rng(3)
    f, g, h = (GradedMatrix.from_array(fock(random_matrix(rng, 2, 2)).entries) for _ in range(3))
    assert tensor(tensor(f, g), h).allclose(tensor(f, tensor(g, h)))


def test_parity_table():
    e, o = Parity.EVEN, Parity.ODD
    assert (e + e, e + o, o + e, o + o) == (e, o, o, e)
    assert Parity.ZERO + o is Parity.ZERO


def test_parity_classify():
    assert parity_classify(np.zeros((4, 4))) is Parity.ZERO
    assert parity_classify(generator_matrix(FSWAP).entries) is Parity.EVEN
    with pytest.raises(MixedParityError):
        parity_classify(np.array([[1, 0], [1, 0]]))


def test_from_array_rejects_non_power_of_two():
    with pytest.raises(ArityError):
        GradedMatrix.from_array(np.zeros((3, 2)))


def test_capacity_rejected():
    with pytest.raises(CapacityError):
        GradedMatrix.identity(15)


def test_fock_two_mode_example():
    # The picture's edges: d straight along the bottom, a along the top, b and c crossing.
    a, b, c, d = 2.0, 3.0 - 1j, 0.5j, -1.25
    m = fock(np.array([[d, b], [c, a]]))
    e = m.entries
    assert e[index("00"), index("00")] == 1
    assert (e[index("01"), index("01")], e[index("10"), index("01")]) == (a, b)
    assert (e[index("01"), index("10")], e[index("10"), index("10")]) == (c, d)
    assert e[index("11"), index("11")] == pytest.approx(a * d - b * c, abs=1e-15)
    assert m.parity is Parity.EVEN


def test_fock_identity():
    for n in range(5):
        assert fock(np.eye(n)).allclose(GradedMatrix.identity(n))


@pytest.mark.parametrize("seed", range(3))
def test_fock_matches_flow_counting(seed):
    rng = np.random.default_rng(seed)
    f = random_matrix(rng, 3, 3)
    m = fock(f).entries
    for r, c in itertools.product(range(8), repeat=2):
        assert m[r, c] == pytest.approx(flow_count(f, occupied(r, 3), occupied(c, 3)), abs=1e-12)


def test_fock_rectangular_zero_off_number():
    f = random_matrix(np.random.default_rng(0), 2, 3)
    m = fock(f)
    assert (m.n_in, m.n_out) == (3, 2)
    assert m.entries[index("11"), index("111")] == 0


def test_fock_functorial():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n, m, p = rng.integers(1, 6, size=3)
        f, g = random_matrix(rng, m, n), random_matrix(rng, p, m)
        assert max_deviation(fock(g @ f), compose(fock(g), fock(f))) <= 1e-9


def test_fock_unitary():
    rng = np.random.default_rng(5)
    for _ in range(5):
        u = fock(random_unitary(rng, 4)).entries
        assert max_deviation(u.conj().T @ u, np.eye(16)) <= 1e-9


def test_state_vector():
    v = StateVector.from_dict(2, {"01": 1j, "10": 2, "00": 1e-14})
    assert list(v.amplitudes) == ["01", "10"]
    assert v.parity is Parity.ODD
    assert np.allclose(StateVector.from_array(v.to_array()).to_array(), v.to_array())
    with pytest.raises(MixedParityError):
        StateVector(1, {"0": 1, "1": 1})
    with pytest.raises(ArityError):
        StateVector(2, {"0": 1})


def test_bits_roundtrip():
    assert bits(5, 4) == "0101" and index("0101") == 5
    assert bits(0, 0) == "" and index("") == 0


def test_dump_format():
    assert dump(generator_matrix(FSWAP)) == "00 00 1 0\n01 10 1 0\n10 01 1 0\n11 11 -1 0\n"


def test_format_real():
    assert format_real(0.5) == "0.5"
    assert format_real(-0.0) == "0"
    assert format_real(0.1 + 0.2) == "0.30000000000000004"
    assert float(format_real(1 / 3)) == 1 / 3


def test_immutable():
    with pytest.raises(ValueError):
        ID1.entries[0, 0] = 5
