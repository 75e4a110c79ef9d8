"""Acceptance run: one PASS/FAIL line per criterion (see them with ``pytest -s``)."""
import math
import time

import numpy as np

from fzw import builders as B
from fzw.axioms import apply_rule, check_all, find_matches
from fzw.cli import human_complex
from fzw.circuits import lift_matrix, mach_zehnder, mach_zehnder_closed_form
from fzw.dsl import format_term, parse
from fzw.dualrail import (DualRailCircuit, eliminate_holes, encode, even_projectors, gate_report,
                          logical_gate, p_dagger_matrix, p_matrix, stray_crossings)
from fzw.errors import MixedParityError
from fzw.evaluate import eval_state, evaluate
from fzw.linalg import Parity, StateVector, bits, fock, max_deviation
from fzw.normalform import equal, nf_to_term, synthesize
from fzw.terms import Gen, Id, Kind, Par, Seq, White

from support import random_complex, random_matrix, random_term, random_unitary
from test_axioms import embed, small_rules
from test_circuits import single_particle_oracle
from test_cli import CASES, GOLDEN, run


def report(n, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def test_criterion_1_axiom_soundness():
    start = time.perf_counter()
    reports = check_all(1e-10)
    elapsed = time.perf_counter() - start
    bad = [r.rule for r in reports if not r.passed]
    worst = max(r.deviation for r in reports)
    report(1, not bad and elapsed < 30,
           f"{len(reports) - len(bad)}/{len(reports)} rule instances within 1e-10 "
           f"(worst {worst:.1e}) in {elapsed:.1f}s")


def random_pure_state(rng):
    n = int(rng.integers(0, 7))
    parity = int(rng.integers(2))
    keys = [bits(i, n) for i in range(1 << n) if bin(i).count("1") % 2 == parity]
    mode = rng.random()
    if mode < 0.05:
        chosen = []
    elif mode < 0.3:
        chosen = keys
    else:
        chosen = [k for k in keys if rng.random() < 0.4] or keys[:1]
    return StateVector(n, {k: random_complex(rng) or 1 for k in chosen})


def test_criterion_2_universality_round_trip():
    rng = np.random.default_rng(2002)
    worst = 0.0
    for _ in range(200):
        v = random_pure_state(rng)
        worst = max(worst, eval_state(nf_to_term(synthesize(v))).max_deviation(v))
    report(2, worst <= 1e-9, f"200 random pure states on up to 6 wires, worst deviation {worst:.1e}")


def perturb(t):
    """The same Term with its first white parameter shifted; None if it has no white vertex."""
    if isinstance(t, Gen):
        return Gen(White(t.gen.z + 0.5)) if t.gen.kind is Kind.WHITE else None
    if isinstance(t, (Seq, Par)):
        a, b = (t.first, t.second) if isinstance(t, Seq) else (t.left, t.right)
        pa = perturb(a)
        if pa is not None:
            return type(t)(pa, b)
        pb = perturb(b)
        return None if pb is None else type(t)(a, pb)
    return None


def variant(rng, t):
    kind = rng.integers(4)
    if kind == 0:
        for _ in range(50):
            u = random_term(rng, t.n_in)
            if u.n_out == t.n_out:
                return u
    if kind == 1:
        u = perturb(t)
        if u is not None:
            return u
    if kind == 2:
        return Seq(Seq(Id(t.n_in), t), Par(Id(t.n_out), Id(0)))
    return B.dagger(B.dagger(t))


def test_criterion_3_completeness():
    rng = np.random.default_rng(3003)
    pairs = []
    for _ in range(500):
        t = random_term(rng)
        pairs.append((t, variant(rng, t)))
    rules = small_rules()
    rewritten = 0
    while rewritten < 200:
        rule = rules[rng.integers(len(rules))]
        emb = embed(rng, rule)
        if emb is None:
            continue
        t = emb[0]
        m = find_matches(rule, t)
        pairs.append((t, apply_rule(rule, t, m[rng.integers(len(m))])))
        rewritten += 1
    wrong, same = 0, 0
    for t, u in pairs:
        truth = max_deviation(evaluate(t), evaluate(u)) <= 1e-9
        same += truth
        wrong += equal(t, u) != truth
    report(3, wrong == 0, f"{len(pairs)} pairs ({same} equal, {len(pairs) - same} unequal), "
                          f"{wrong} disagreements with the matrix check")


def test_criterion_4_fock_functor():
    rng = np.random.default_rng(4004)
    worst = 0.0
    for _ in range(100):
        a, b, c = (int(x) for x in rng.integers(1, 6, size=3))
        f, g = random_matrix(rng, b, a), random_matrix(rng, c, b)
        big, small = fock(g @ f).entries, fock(g).entries @ fock(f).entries
        worst = max(worst, max_deviation(big, small))
    p, q, r, s = 1.5 - 2j, 0.25, -3j, 0.75 + 1j
    ex = fock(np.array([[s, q], [r, p]])).entries
    expect = np.array([[1, 0, 0, 0], [0, p, r, 0], [0, q, s, 0], [0, 0, 0, p * s - q * r]])
    det_dev = max_deviation(ex, expect)
    det_ok = det_dev <= 4 * np.finfo(float).eps * np.max(np.abs(expect))
    lift_worst = 0.0
    for _ in range(5):
        m = random_matrix(rng, 3, 3)
        lift_worst = max(lift_worst, max_deviation(evaluate(lift_matrix(m)), fock(m)))
    report(4, worst <= 1e-9 and det_ok and lift_worst <= 1e-9,
           f"functoriality worst deviation {worst:.1e} over 100 pairs; "
           f"determinant example off by {det_dev:.1e}; 3x3 lift deviation {lift_worst:.1e}")


def test_criterion_5_mach_zehnder():
    rng = np.random.default_rng(5005)
    worst = 0.0
    for _ in range(50):
        u, v = random_unitary(rng, 2), random_unitary(rng, 2)
        args = (u[0, 0], u[1, 0], v[0, 0], v[1, 0], rng.uniform(0, 2 * math.pi))
        got = np.array(mach_zehnder(*args))
        worst = max(worst, np.max(np.abs(got - mach_zehnder_closed_form(*args))),
                    np.max(np.abs(got - single_particle_oracle(*args))))
    h = 1 / math.sqrt(2)
    sym = max(abs(mach_zehnder(h, h * 1j, h, h * 1j, th)[0] - math.sin(th / 2) ** 2)
              for th in np.linspace(0, 2 * math.pi, 13))
    report(5, worst <= 1e-9 and sym <= 1e-9,
           f"50 random settings, worst deviation {worst:.1e}; balanced case follows "
           f"sin^2(theta/2) to {sym:.1e}")


def test_criterion_6_dual_rail():
    reps = [gate_report("h"), gate_report("zphase", 0.9), gate_report("cz")]
    fits = all(r.deviation <= 1e-10 for r in reps)
    strong = max(max_deviation(p_matrix(n) @ p_dagger_matrix(n), np.eye(1 << n)) for n in (1, 2, 3))
    strong = max(strong, max(max_deviation(p_dagger_matrix(n) @ p_matrix(n), evaluate(even_projectors(n)))
                             for n in (1, 2)))
    rng = np.random.default_rng(6006)
    pool = [logical_gate("cz"), Par(logical_gate("h"), Id(2)), Par(Id(2), logical_gate("zphase", 0.4)),
            Par(Id(1), Par(B.beam_splitter(0.6, 0.8), Id(1)))]
    holes = 0.0
    for _ in range(10):
        c = DualRailCircuit(2, tuple(pool[i] for i in rng.integers(len(pool), size=3)))
        holes = max(holes, max_deviation(encode(eliminate_holes(c)).entries, c.logical()))
    stray = sum(stray_crossings(logical_gate(*g)) for g in (("h",), ("zphase", 0.9), ("cz",)))
    scalars = ", ".join(f"{r.name} {human_complex(r.scalar)}" for r in reps)
    report(6, fits and strong <= 1e-10 and holes <= 1e-10 and stray == 0,
           f"gate scalars ({scalars}) fit within {max(r.deviation for r in reps):.1e}; "
           f"encoding identities {strong:.1e}; projector insertion {holes:.1e}; "
           f"{stray} crossings outside splitter blocks")


def test_criterion_7_purity():
    rng = np.random.default_rng(7007)
    mixed, counts = 0, {p: 0 for p in Parity}
    for _ in range(1000):
        try:
            counts[evaluate(random_term(rng)).parity] += 1
        except MixedParityError:
            mixed += 1
    report(7, mixed == 0, f"1000 random terms, {mixed} mixed; "
                          + ", ".join(f"{p.name.lower()} {n}" for p, n in counts.items()))


def test_criterion_8_dsl():
    rng = np.random.default_rng(8008)
    broken = 0
    for _ in range(1000):
        t = random_term(rng, width=6)
        broken += parse(format_term(t)) != t
    stale = [name for name, argv in CASES.items()
             if (GOLDEN / name).read_bytes() != run(argv)[1].encode("utf-8")]
    report(8, broken == 0 and not stale,
           f"1000 round-trips, {broken} mismatched; {len(CASES) - len(stale)}/{len(CASES)} "
           f"CLI golden files byte-exact")
