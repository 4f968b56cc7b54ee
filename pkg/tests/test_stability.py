from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from quivermod.errors import BudgetExceeded, NoLimit, QuivermodError
from quivermod.forms import dot
from quivermod.linalg import GF, QQ, Matrix, Subspace
from quivermod.nakajima import double_quiver
from quivermod.quiver import Arrow, GroupElement, Quiver, Representation, act, random_representation, \
    restrict_to_subspaces
from quivermod.stability import (
    SEMISTABLE, STABLE, UNSTABLE, SubrepWitness, VertexGrading, associated_graded, character_pairing,
    decide_theta_stability_exhaustive, enumerate_subreps, enumeration_size, generated_subrep,
    grading_for_filtration, hm_pairing, is_semisimple_exhaustive, is_simple_exhaustive, largest_subrep_within,
    one_parameter_limit, shift_theta,
)

F2, F3, F5 = GF(2), GF(3), GF(5)
J2 = [[0, 1], [0, 0]]


def a2(f, field=F5, dims=(1, 1)):
    return Representation(Quiver.a_n(2), field, dims, {"a1": f})


def jordan(m, field=F5):
    return Representation(Quiver.jordan(), field, (len(m),), {"a": m})


def brute_subreps(v: Representation) -> set:
    """All subrepresentations, found from spanning sets and checked arrow by arrow."""
    p = v.field.p
    per_vertex = []
    for d in v.dims:
        vecs = list(itertools.product(range(p), repeat=d))
        spaces = {Subspace.span(v.field, d, c) for k in range(d + 1) for c in itertools.combinations(vecs, k)}
        per_vertex.append(spaces)
    out = set()
    for choice in itertools.product(*per_vertex):
        if all(choice[a.target].contains(v.map(a.id).apply(b)) for a in v.quiver.arrows
               for b in choice[a.source].basis):
            out.add(choice)
    return out


# ---------------------------------------------------------------- enumeration


TRIANGLE = Quiver(3, [Arrow("x", 0, 1), Arrow("y", 1, 2), Arrow("z", 0, 2), Arrow("l", 1, 1)])


@given(st.integers(0, 10**6), st.sampled_from([(1, 1, 1), (2, 1, 1), (1, 2, 0), (0, 2, 2)]))
def test_enumerate_subreps_matches_brute_force(seed, dims):
    v = random_representation(TRIANGLE, F2, dims, random.Random(seed), 0, 1)
    found = [w.subspaces for w in enumerate_subreps(v)]
    assert len(found) == len(set(found))
    assert set(found) == brute_subreps(v)


def test_enumeration_parallel_matches_serial(rng):
    v = random_representation(TRIANGLE, F3, (2, 2, 1), rng, 0, 2)
    serial = list(enumerate_subreps(v))
    assert list(enumerate_subreps(v, jobs=2)) == serial
    theta = (1, 1, -4)
    assert decide_theta_stability_exhaustive(v, theta, jobs=2) == decide_theta_stability_exhaustive(v, theta)


def test_budget_is_checked_up_front():
    v = Representation.zero(Quiver.jordan(), F5, (4,))
    assert enumeration_size(v) > 100
    with pytest.raises(BudgetExceeded):
        next(iter(enumerate_subreps(v, budget=100)))
    with pytest.raises(BudgetExceeded):
        decide_theta_stability_exhaustive(v, (0,), budget=100)


# ---------------------------------------------------------------- King criterion


def test_king_examples():
    assert decide_theta_stability_exhaustive(a2([[1]]), (1, -1)).status == STABLE
    verdict = decide_theta_stability_exhaustive(a2([[0]]), (1, -1))
    assert verdict.status == UNSTABLE and verdict.witness.beta == (1, 0) and verdict.theta_beta == 1
    with pytest.raises(QuivermodError, match="theta-alpha nonzero"):
        decide_theta_stability_exhaustive(a2([[1]]), (1, 1))
    with pytest.raises(QuivermodError):
        decide_theta_stability_exhaustive(a2([[1]], field=QQ), (1, -1))


@given(st.integers(0, 10**6), st.sampled_from([(1, 1, 1), (2, 1, 0), (1, 1, 2)]))
def test_theta_zero_semistable_and_stable_iff_simple(seed, dims):
    v = random_representation(TRIANGLE, F2, dims, random.Random(seed), 0, 1)
    verdict = decide_theta_stability_exhaustive(v, (0, 0, 0))
    assert verdict.semistable
    assert verdict.stable == is_simple_exhaustive(v)


@given(st.integers(0, 10**6), st.sampled_from([(1, 1, 1), (2, 1, 1), (1, 2, 1)]),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_king_verdict_against_brute_force(seed, dims, raw_theta):
    v = random_representation(TRIANGLE, F2, dims, random.Random(seed), 0, 1)
    theta, _, _ = shift_theta(raw_theta, dims)
    verdict = decide_theta_stability_exhaustive(v, theta)
    proper = [s for s in brute_subreps(v) if 0 < sum(x.dim for x in s) < sum(dims)]
    values = [dot(theta, [x.dim for x in s]) for s in proper]
    expected = UNSTABLE if any(x > 0 for x in values) else SEMISTABLE if 0 in values else STABLE
    assert verdict.status == expected
    if verdict.witness is not None:
        # witness soundness
        restrict_to_subspaces(v, verdict.witness.subspaces)
        assert verdict.theta_beta == dot(theta, verdict.witness.beta)
        if expected == UNSTABLE:
            assert verdict.theta_beta == max(values)


@given(st.integers(0, 10**6))
def test_king_verdict_invariant_under_action(seed):
    rng = random.Random(seed)
    v = random_representation(TRIANGLE, F3, (1, 2, 1), rng, 0, 2)
    g = GroupElement.random(F3, v.dims, rng)
    for theta in [(1, 1, -3), (-1, 1, -1), (2, -1, 0)]:
        assert decide_theta_stability_exhaustive(act(g, v), theta).status == \
            decide_theta_stability_exhaustive(v, theta).status


def test_shift_theta():
    assert shift_theta((1, 0), (1, 1)) == ((1, -1), 2, -1)
    assert shift_theta((2, 0), (1, 1)) == ((1, -1), 1, -1)
    t, c, k = shift_theta((3, 0, 1), (1, 2, 3))
    assert dot(t, (1, 2, 3)) == 0 and c > 0
    assert t == tuple(c * x + k for x in (3, 0, 1))


# ---------------------------------------------------------------- closures


def test_generated_and_largest_examples():
    j = jordan(J2)
    e1, e2 = (1, 0), (0, 1)
    assert generated_subrep(j, [[e1, e2]]).is_full()
    assert generated_subrep(j, [[e2]]).beta == (2,)
    assert generated_subrep(j, [[e1]]).beta == (1,)
    full = [Subspace.full(F5, 2)]
    assert largest_subrep_within(j, full).is_full()
    assert largest_subrep_within(j, [Subspace.span(F5, 2, [e1])]).beta == (1,)
    w = largest_subrep_within(a2([[1]]), [Subspace.zero(F5, 1), Subspace.full(F5, 1)])
    assert w.beta == (0, 1)
    w = largest_subrep_within(a2([[1]]), [Subspace.full(F5, 1), Subspace.zero(F5, 1)])
    assert w.is_zero()


@given(st.integers(0, 10**6))
def test_closures_monotone_and_idempotent(seed):
    rng = random.Random(seed)
    v = random_representation(TRIANGLE, F3, (2, 2, 2), rng, 0, 2)
    seeds = [[tuple(rng.randint(0, 2) for _ in range(2))] for _ in range(3)]
    more = [s + [tuple(rng.randint(0, 2) for _ in range(2))] for s in seeds]
    w = generated_subrep(v, seeds)
    assert generated_subrep(v, more).contains(w)
    assert generated_subrep(v, [list(s.basis) for s in w.subspaces]) == w
    restrict_to_subspaces(v, w.subspaces)
    k = [Subspace.span(F3, 2, s) for s in seeds]
    bigger = [Subspace.span(F3, 2, s) for s in more]
    u = largest_subrep_within(v, k)
    assert largest_subrep_within(v, bigger).contains(u)
    assert largest_subrep_within(v, list(u.subspaces)) == u
    restrict_to_subspaces(v, u.subspaces)


# ---------------------------------------------------------------- one-parameter subgroups


def test_hm_pairing_examples():
    theta, alpha, beta = (2, -1), (1, 2), (1, 1)
    rest = tuple(a - b for a, b in zip(alpha, beta))
    assert hm_pairing(theta, [beta, rest]) == -dot(theta, beta)
    assert hm_pairing((1, -1), [(1, 1)]) == 0
    assert hm_pairing((1, -1), [(1, 0), (0, 1)]) == -1
    with pytest.raises(QuivermodError, match="sum mismatch"):
        hm_pairing((1, -1), [(1, 0), (0, 1)], alpha=(2, 1))


def test_one_parameter_limit_examples():
    j = jordan(J2, QQ)
    assert one_parameter_limit(j, VertexGrading([(0, 0)])) == j
    assert one_parameter_limit(j, VertexGrading([(0, 1)])).map("a").is_zero()
    with pytest.raises(NoLimit):
        one_parameter_limit(j, VertexGrading([(1, 0)]))


def test_associated_graded_examples():
    j = jordan(J2, QQ)
    assert associated_graded(j, []) == j
    e1 = Subspace.span(QQ, 2, [(1, 0)])
    assert associated_graded(j, [[e1]]).map("a").is_zero()
    v = a2([[1]], QQ)
    gr = associated_graded(v, [[Subspace.zero(QQ, 1), Subspace.full(QQ, 1)]])
    assert gr.map("a1").is_zero()


@given(st.integers(0, 10**6))
def test_associated_graded_is_a_limit(seed):
    rng = random.Random(seed)
    v = random_representation(TRIANGLE, F3, (2, 1, 2), rng, 0, 2)
    subs = list(enumerate_subreps(v))
    chain = []
    for w in subs:
        proper = not w.is_zero() and not w.is_full()
        if proper and (not chain or (w.contains(chain[-1]) and w != chain[-1])):
            chain.append(w)
    g = grading_for_filtration(v, chain)
    assert one_parameter_limit(v, g, coordinates="grading") == associated_graded(v, chain)


@given(st.integers(0, 10**6), st.sampled_from([F2, F3]))
def test_two_step_filtration_pairing(seed, field):
    rng = random.Random(seed)
    v = random_representation(Quiver.a_n(2), field, (2, 1), rng, 0, field.p - 1)
    for w in enumerate_subreps(v):
        if w.is_zero() or w.is_full():
            continue
        for theta in [(1, -2), (-1, 2)]:
            g = grading_for_filtration(v, [w])
            one_parameter_limit(v, g)  # exists
            rest = tuple(a - b for a, b in zip(v.dims, w.beta))
            assert hm_pairing(theta, [w.beta, rest]) == -dot(theta, w.beta) == character_pairing(theta, g)


# ---------------------------------------------------------------- simple and semisimple


def test_simplicity_examples():
    for c in range(5):
        assert is_simple_exhaustive(jordan([[c]]))
    assert not is_simple_exhaustive(jordan(J2))
    double = double_quiver(Quiver.a_n(2))
    v = Representation(double, F5, (1, 1), {"a1": [[2]], "a1*": [[3]]})
    assert is_simple_exhaustive(v)


def test_semisimplicity_examples():
    assert is_semisimple_exhaustive(jordan([[1, 0], [0, 2]]))
    assert not is_semisimple_exhaustive(jordan(J2))
    assert is_semisimple_exhaustive(Representation.zero(TRIANGLE, F2, (1, 2, 1)))


@given(st.integers(0, 10**6))
def test_graded_of_composition_series_is_semisimple(seed):
    rng = random.Random(seed)
    v = random_representation(Quiver.jordan(), F2, (3,), rng, 0, 1)
    # refine greedily into a chain where every step is a minimal extension
    subs = sorted(enumerate_subreps(v), key=lambda w: sum(w.beta))
    chain = []
    current = subs[0]
    while not current.is_full():
        current = next(w for w in subs if w.contains(current) and w != current and
                       not any(u.contains(current) and w.contains(u) and u not in (current, w) for u in subs))
        if not current.is_full():
            chain.append(current)
    gr = associated_graded(v, chain)
    assert is_semisimple_exhaustive(gr)
