import cmath

import numpy as np
import pytest

from fzw import builders as B
from fzw.errors import ArityError, CapacityError
from fzw.evaluate import closed_amplitude, eval_state, evaluate, generator_matrix, state_array
from fzw.linalg import Parity, index
from fzw.terms import BLACK3, DUAL, DUAL_DAGGER, FSWAP, Gen, Id, Kind, Par, Seq, White, generators, par

from support import oracle_matrix, random_term


def closed_black(n_in, n_out):
    """Entry 1 exactly where one leg of the vertex is occupied."""
    m = np.zeros((1 << n_out, 1 << n_in))
    for r in range(1 << n_out):
        for c in range(1 << n_in):
            if bin(r).count("1") + bin(c).count("1") == 1:
                m[r, c] = 1
    return m


def closed_white(n_in, n_out, z):
    m = np.zeros((1 << n_out, 1 << n_in), dtype=complex)
    m[0, 0] += 1
    m[-1, -1] += z
    return m


def test_fswap_table():
    m = generator_matrix(FSWAP).entries
    assert m[index("10"), index("01")] == 1
    assert m[index("11"), index("11")] == -1


def test_white_zero_is_vacuum():
    v = generator_matrix(White(0)).entries[:, 0]
    assert list(v) == [1, 0, 0, 0]


def test_black3():
    m = generator_matrix(BLACK3)
    assert m.parity is Parity.ODD
    assert [i for i, x in enumerate(m.entries[:, 0]) if x] == [0b001, 0b010, 0b100]


def test_projector():
    m = evaluate(B.projector()).entries
    assert np.allclose(m, np.diag([1, 0, 0, 1]))
    assert np.allclose(m @ m, m)


def test_phase():
    assert np.allclose(evaluate(B.phase(0.4)).entries, np.diag([1, cmath.exp(0.4j)]))
    assert np.allclose(evaluate(B.phase(0)).entries, np.eye(2))


@pytest.mark.parametrize("total", range(7))
def test_black_vertex_closed_form(total):
    for n_in in range(total + 1):
        m = evaluate(B.black_vertex(n_in, total - n_in))
        assert np.max(np.abs(m.entries - closed_black(n_in, total - n_in))) <= 1e-12
        if total:
            assert m.parity is Parity.ODD


@pytest.mark.parametrize("total", [0, 2, 4, 6])
def test_white_vertex_closed_form(total):
    for n_in in range(total + 1):
        m = evaluate(B.white_vertex(n_in, total - n_in, 0.3 - 2j))
        assert np.max(np.abs(m.entries - closed_white(n_in, total - n_in, 0.3 - 2j))) <= 1e-12


def test_white_odd_arity_rejected():
    with pytest.raises(ValueError):
        B.white_vertex(1, 2, 1)


def test_beam_splitter_table():
    r, t = 0.6, 0.8j
    m = evaluate(B.beam_splitter(r, t)).entries
    assert m[index("10"), index("10")] == pytest.approx(r)
    assert m[index("01"), index("10")] == pytest.approx(t)
    assert m[index("10"), index("01")] == pytest.approx(-np.conj(t))
    assert m[index("01"), index("01")] == pytest.approx(np.conj(r))
    assert m[0, 0] == pytest.approx(1)
    # one particle in each arm leaves as the determinant times |11>
    assert m[3, 3] == pytest.approx(r * np.conj(r) + t * np.conj(t))


def test_states_and_effects():
    assert eval_state(Par(B.ket1(), B.ket0())).amplitudes == {"10": 1}
    assert closed_amplitude(Seq(Gen(DUAL), Gen(DUAL_DAGGER))) == 2
    assert closed_amplitude(Seq(B.ket1(), B.bra0())) == 0
    assert closed_amplitude(Seq(B.ket1(), B.bra1())) == 1


def test_arity_guards():
    with pytest.raises(ArityError):
        eval_state(Id(1))
    with pytest.raises(ArityError):
        closed_amplitude(Gen(DUAL))


def test_capacity():
    with pytest.raises(CapacityError):
        evaluate(Id(15))
    with pytest.raises(CapacityError):
        evaluate(Id(5), max_wires=4)


def test_state_push_matches_fold():
    t = Seq(Par(B.black_vertex(0, 5), B.white_vertex(0, 4, 1j)), par(Id(3), B.projector(), Id(4)))
    assert np.allclose(state_array(t), evaluate(t).entries[:, 0])


def test_random_terms_match_oracle():
    rng = np.random.default_rng(21)
    for _ in range(300):
        t = random_term(rng)
        assert np.max(np.abs(evaluate(t).entries - oracle_matrix(t)), initial=0) <= 1e-12


def test_parity_counts_black_vertices():
    rng = np.random.default_rng(22)
    for _ in range(300):
        t = random_term(rng)
        p = evaluate(t).parity
        blacks = sum(1 for g in generators(t) if g.kind in (Kind.BLACK2, Kind.BLACK3))
        if p is not Parity.ZERO:
            assert p.bit == blacks % 2
