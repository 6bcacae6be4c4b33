from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flaskchem import (
    Algebra,
    App,
    BudgetExceeded,
    Distribution,
    FlaskProcess,
    Homomorphism,
    Multiset,
    Protocol,
    ProtocolMismatch,
    Signature,
    Stream,
    Var,
    check_naturality,
    check_output_order_invariance,
    markov_morphism,
    run_trajectory,
    step_exact,
    step_exact_single,
    step_sample,
    unit,
)
from flaskchem.chem import C, DELETE, I, K, P1, STAR, ReducerConfig, division_algebra, fine_library, mc0
from flaskchem.chem import coarse_grain, corrupted_library, modular_group_algebra, reduce_mod, square_hom
from flaskchem.dist import empirical, tv_distance

from helpers import all_multisets, protocol_family, random_multiset
from oracles import freeze_dist, token_step

half = Fraction(1, 2)


def test_group_product_step():
    z5 = modular_group_algebra(5)
    assert step_exact_single(z5, STAR, Multiset({2: 2})) == unit(Multiset({4: 1}))


def test_too_few_members_is_identity():
    sigma = Multiset({"l": 1})
    assert step_exact_single(fine_library(), C, sigma) == unit(sigma)


def test_division_step_example():
    got = step_exact_single(division_algebra(), C, Multiset({6: 1, 3: 1}))
    assert got == Distribution({Multiset({6: 1, 2: 1}): half, Multiset({3: 2}): half})


def test_mc0_identity_reactor():
    sigma = Multiset({I: 2})
    assert step_exact(mc0(), sigma) == unit(sigma)


def test_single_protocol_process_matches_single_step():
    alg = division_algebra()
    sigma = Multiset({6: 1, 3: 1, 4: 1})
    assert step_exact(FlaskProcess(alg, [C]), sigma) == step_exact_single(alg, C, sigma)


def test_composite_is_sequential_composition():
    # C then delete on {6,3}: weights follow from composing two small kernels by hand
    alg = division_algebra()
    d = step_exact(FlaskProcess(alg, [C, DELETE]), Multiset({6: 1, 3: 1}))
    assert d == Distribution({Multiset({6: 1}): Fraction(1, 4), Multiset({2: 1}): Fraction(1, 4), Multiset({3: 1}): half})


def test_budget_guard():
    sigma = Multiset(range(1, 11))
    with pytest.raises(BudgetExceeded) as exc:
        step_exact_single(division_algebra(), C, sigma, budget=99)
    assert exc.value.tuples == 100
    step_exact_single(division_algebra(), C, sigma, budget=100)


def test_process_validates_protocols():
    with pytest.raises(ValueError):
        FlaskProcess(division_algebra(), [])
    with pytest.raises(ValueError):
        FlaskProcess(division_algebra(), [STAR])


def test_sample_empty_and_deterministic_cases():
    proc = FlaskProcess(modular_group_algebra(5), [STAR])
    assert step_sample(proc, Multiset(), Stream(0)) == Multiset()
    for seed in range(10):
        assert step_sample(proc, Multiset({2: 2}), Stream(seed)) == Multiset({4: 1})


def test_trajectory_shapes_and_determinism():
    proc = FlaskProcess(division_algebra(), [C])
    sigma0 = Multiset([12, 6, 4, 3, 2])
    assert run_trajectory(proc, sigma0, 0, Stream(1)) == [sigma0]
    a = run_trajectory(proc, sigma0, 30, Stream(3, 7))
    b = run_trajectory(proc, sigma0, 30, Stream(3, 7))
    assert a == b and len(a) == 31
    assert all(s.total() == 5 for s in a)
    with pytest.raises(ValueError):
        run_trajectory(proc, sigma0, -1, Stream(1))


def test_trajectories_use_independent_streams():
    proc = FlaskProcess(division_algebra(), [C])
    sigma0 = Multiset(range(1, 25))
    runs = {tuple(run_trajectory(proc, sigma0, 20, Stream.for_trajectory(0, i))) for i in range(4)}
    assert len(runs) == 4


@pytest.mark.parametrize(
    "alg,labels,op",
    [
        (fine_library(), ("l", "m_n", "m_q"), "interact"),
        (modular_group_algebra(3), (0, 1, 2), "star"),
        (division_algebra(), (2, 3, 6), "interact"),
    ],
    ids=["library", "Z/3", "division"],
)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_support_arithmetic_and_mass(alg, labels, op, k):
    for p in itertools.islice(protocol_family(op, k, max_outputs=2), 60):
        for sigma in all_multisets(labels, 4):
            d = step_exact_single(alg, p, sigma)
            assert sum(w for _, w in d.items()) == 1
            if k <= sigma.total():
                assert {s.total() for s in d.support()} == {sigma.total() - k + p.l}
            else:
                assert d == unit(sigma)


def test_three_input_protocol_matches_oracle():
    alg = division_algebra()
    p = Protocol(3, [App("interact", Var(0), Var(2)), Var(1)])
    for sigma in all_multisets((2, 3, 6), 4):
        want = token_step(alg, lambda a: [alg("interact", a[0], a[2]), a[1]], 3, dict(sigma.items()))
        assert freeze_dist(step_exact_single(alg, p, sigma)) == want


def test_naturality_examples():
    alg = fine_library()
    ident = Homomorphism(alg, alg, lambda x: x)
    proc = FlaskProcess(alg, [C])
    m = markov_morphism(proc, proc, ident)
    assert check_naturality(m, Multiset({"l": 1, "m_n": 2, "m_q": 1})).ok

    h = coarse_grain(alg)
    m = markov_morphism(proc, FlaskProcess(h.target, [C]), h)
    assert m(Multiset({"l": 1, "m_n": 1, "m_q": 1})) == Multiset({"l": 1, "m": 2})
    assert check_naturality(m, Multiset({"l": 1, "m_n": 2, "m_q": 1})).ok

    div = division_algebra()
    sq = square_hom(div)
    dproc = FlaskProcess(div, [C])
    assert check_naturality(markov_morphism(dproc, dproc, sq), Multiset({6: 1, 3: 1, 4: 1})).ok

    r = reduce_mod(6, 3)
    m = markov_morphism(FlaskProcess(r.source, [STAR]), FlaskProcess(r.target, [STAR]), r)
    assert m(Multiset({1: 1, 4: 1, 5: 1})) == Multiset({1: 2, 2: 1})
    assert check_naturality(m, Multiset({1: 1, 4: 1, 5: 1})).ok


def test_naturality_fails_for_corrupted_table():
    src = corrupted_library()
    h = coarse_grain(src)
    m = markov_morphism(FlaskProcess(src, [C]), FlaskProcess(h.target, [C]), h)
    failures = [s for s in all_multisets(("l", "m_n", "m_q"), 3) if not check_naturality(m, s).ok]
    assert Multiset({"l": 1, "m_n": 1}) in failures


def test_markov_morphism_requires_matching_protocols():
    alg = fine_library()
    ident = Homomorphism(alg, alg, lambda x: x)
    with pytest.raises(ProtocolMismatch):
        markov_morphism(FlaskProcess(alg, [C]), FlaskProcess(alg, [P1]), ident)


def test_output_order_examples():
    assert check_output_order_invariance(mc0().alg, P1, (2, 1, 0), Multiset({I: 1, K: 1}))
    assert check_output_order_invariance(division_algebra(), C, (1, 0), Multiset({6: 1, 3: 1}))
    assert check_output_order_invariance(division_algebra(), DELETE, (), Multiset({6: 1}))


def test_k0_protocol_fires_on_empty_state():
    alg = Algebra(Signature.of(seed=0), {"seed": lambda: "s"})
    p = Protocol(0, [App("seed")])
    assert step_exact_single(alg, p, Multiset()) == unit(Multiset({"s": 1}))


@given(st.integers(0, 2**32), st.lists(st.integers(1, 12), min_size=2, max_size=6))
def test_sampled_step_is_in_exact_support(seed, labels):
    proc = FlaskProcess(division_algebra(), [C, DELETE])
    sigma = Multiset(labels)
    assert step_sample(proc, sigma, Stream(seed)) in step_exact(proc, sigma)


def test_sampler_faithful_two_protocols():
    proc = FlaskProcess(fine_library(), [P1, DELETE])
    sigma = Multiset({"l": 1, "m_n": 1, "m_q": 2})
    exact = step_exact(proc, sigma)
    rng = Stream(21)
    emp = empirical(step_sample(proc, sigma, rng) for _ in range(30_000))
    assert tv_distance(emp, exact) < Fraction(1, 50)


def test_random_states_mass_mc0():
    rng = random.Random(0)
    proc = mc0(ReducerConfig(100))
    for _ in range(10):
        sigma = random_multiset(rng, [I, K], 4)
        d = step_exact(proc, sigma)
        assert sum(w for _, w in d.items()) == 1
