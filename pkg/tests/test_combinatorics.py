import itertools
import math

import numpy as np
import pytest

from linres.combinatorics import (
    BasisFamily,
    Implication,
    c_e,
    c_i,
    cover_check_addcomb,
    ecc_sat_solve,
    extract_independent_blocks,
    find_line,
    image_size_bound_check,
    implied_equation_check,
    kill_narrow,
    random_basis_family,
    trunc_dim_bound_check,
    zero_one_sumset,
)
from linres.errors import DimensionError, NotFound, PreconditionFailed
from linres.gf import AffinePoly, AffineSpan, Field, FMatrix, rank
from linres.instances import LinearSystem, code_distance, random_matrix, zero_one_sat


def _sumset_by_brute_force(vectors, p):
    m = len(vectors[0])
    out = set()
    for eps in itertools.product((0, 1), repeat=len(vectors)):
        out.add(tuple(sum(e * v[i] for e, v in zip(eps, vectors)) % p for i in range(m)))
    return out


def test_constants():
    assert c_e(5) == pytest.approx(8.8275, abs=1e-3)
    assert c_i(5) == pytest.approx(6 * c_e(5))
    assert c_e(7) > c_e(5)


@pytest.mark.parametrize("copies, size", [(1, 2), (3, 4), (4, 5), (9, 5)])
def test_sumset_of_repeated_unit_vector(f5, copies, size):
    points, witnesses = zero_one_sumset([(1,)] * copies, f5)
    assert len(points) == size
    for point in points:
        eps = witnesses[point]
        assert sum(eps) % 5 == point[0]


def test_sumset_matches_brute_force(f5, rng_factory):
    rng = rng_factory(5)
    for _ in range(5):
        vectors = [tuple(int(c) for c in rng.integers(0, 5, size=2)) for _ in range(6)]
        points, witnesses = zero_one_sumset(vectors, f5)
        assert points == _sumset_by_brute_force(vectors, 5)
        for point in points:
            eps = witnesses[point]
            total = tuple(sum(e * v[i] for e, v in zip(eps, vectors)) % 5 for i in range(2))
            assert total == point


def test_sumset_needs_a_field_for_plain_vectors():
    with pytest.raises(DimensionError):
        zero_one_sumset([(1,)])


def test_basis_family_rejects_dependent_blocks(f5):
    with pytest.raises(DimensionError):
        BasisFamily(f5, 2, (((1, 2), (2, 4)),))


def test_addcomb_on_a_single_coordinate(f5):
    assert not cover_check_addcomb(BasisFamily(f5, 1, (((1,),),) * 3))
    assert cover_check_addcomb(BasisFamily(f5, 1, (((1,),),) * 4))


@pytest.mark.parametrize("p, m", [(5, 1), (5, 2), (7, 2)])
def test_addcomb_covers_the_space_at_the_threshold(p, m, rng_factory):
    t = math.ceil(c_e(p) * m**2)
    for seed in range(10):
        family = random_basis_family(Field(p), m, t, rng_factory(seed))
        assert cover_check_addcomb(family)


def test_find_line_on_copies_of_one(f5):
    family = BasisFamily(f5, 1, (((1,),),) * 9)
    v, a = find_line([], family)
    assert v == (1,)
    assert a == (0,)


def test_find_line_needs_enough_blocks(f5):
    with pytest.raises(NotFound):
        find_line([], BasisFamily(f5, 1, (((1,),),)))
    with pytest.raises(PreconditionFailed):
        find_line([(1,)], BasisFamily(f5, 1, (((1,),),) * 9))


def test_find_line_avoids_the_span_of_s(f7, rng_factory):
    family = random_basis_family(f7, 2, math.ceil(c_e(7) * 2), rng_factory(2))
    v, a = find_line([(1, 0)], family)
    assert v[1] != 0
    points, _ = zero_one_sumset(family)
    assert all(tuple((a[i] + alpha * v[i]) % 7 for i in range(2)) in points for alpha in range(7))


def test_ecc_sat_on_all_ones_row(f5):
    M = FMatrix([[1] * 9], f5)
    x = ecc_sat_solve(M, (3,))
    assert x == (1, 1, 1, 0, 0, 0, 0, 0, 0)


def test_ecc_sat_needs_distance(f5):
    with pytest.raises(PreconditionFailed):
        ecc_sat_solve(FMatrix([[1] * 4], f5), (3,))


def test_ecc_sat_with_two_rows(f5, rng_factory):
    rng = rng_factory(0)
    M = random_matrix(f5, 2, 600, rng)
    assert code_distance(M) >= math.ceil(c_e(5) * 8)
    for a in [(0, 0), (4, 1), (2, 3)]:
        x = ecc_sat_solve(M, a)
        assert set(x) <= {0, 1}
        assert tuple(int(c) for c in (M.entries @ np.array(x)) % 5) == a


@pytest.mark.parametrize("n", [9, 10, 12])
def test_ecc_sat_agrees_with_brute_force(f5, rng_factory, n):
    rng = rng_factory(n)
    M = FMatrix([rng.integers(1, 5, size=n)], f5)
    for a in range(5):
        x = ecc_sat_solve(M, (a,))
        assert LinearSystem(M, (a,)).satisfied_by(x)
        assert zero_one_sat(LinearSystem(M, (a,))) is not None


@pytest.mark.slow
@pytest.mark.parametrize("n", range(9, 17))
def test_ecc_sat_satisfiability_agrees_with_zero_one_sat(f5, rng_factory, n):
    row = [int(c) for c in rng_factory(100 + n).integers(1, 5, size=n)]
    M = FMatrix([row], f5)
    reachable = {sum(c * v for c, v in zip(row, x)) % 5 for x in itertools.product((0, 1), repeat=n)}
    for a in range(5):
        system = LinearSystem(M, (a,))
        solution = ecc_sat_solve(M, (a,))
        assert system.satisfied_by(solution)
        assert a in reachable
        assert zero_one_sat(system) is not None


def test_extract_independent_blocks(f5):
    M = FMatrix([[1, 2, 0, 1, 0], [0, 0, 1, 1, 0]], f5)
    assert extract_independent_blocks(M, 2) == [(0, 2), (1, 3)]


def test_implied_equation_classification(f5):
    P = AffineSpan.of([AffinePoly.equation((1, 1), 1, f5)], 2, f5)
    assert implied_equation_check(P, AffinePoly.equation((1, 1), 1, f5)) == (Implication.IMPLIED_IN_SPAN, None)
    assert implied_equation_check(P, AffinePoly.equation((1, 4), 0, f5)) == (Implication.NOT_IMPLIED, (0, 1))

    empty = AffineSpan.of([AffinePoly.variable(0, 1, f5, 3)], 1, f5)
    assert implied_equation_check(empty, AffinePoly.variable(0, 1, f5))[0] == Implication.IMPLIED_NOT_IN_SPAN
    assert implied_equation_check(empty, AffinePoly.variable(0, 1, f5, 3))[0] == Implication.IMPLIED_IN_SPAN


def test_implied_equation_matches_brute_force(f5, rng_factory):
    rng = rng_factory(9)
    n = 4
    for _ in range(20):
        P = AffineSpan.of([AffinePoly(tuple(int(c) for c in rng.integers(0, 2, size=n)), int(rng.integers(0, 5)), f5)], n, f5)
        h = AffinePoly(tuple(int(c) for c in rng.integers(0, 5, size=n)), int(rng.integers(0, 5)), f5)
        models = [x for x in itertools.product((0, 1), repeat=n) if all(q.evaluate(x) == 0 for q in P.basis)]
        implied = all(h.evaluate(x) == 0 for x in models)
        status, witness = implied_equation_check(P, h)
        assert (status != Implication.NOT_IMPLIED) == implied
        if witness is not None:
            assert witness in models
            assert h.evaluate(witness) != 0


def test_kill_narrow_binds_the_light_variable(f5):
    n = 8
    P = AffineSpan.of([AffinePoly.equation((1,) * n, 1, f5)], n, f5)
    R = AffineSpan.of([AffinePoly.variable(0, n, f5, 1)], n, f5)
    rho = kill_narrow(P, R, (1, 0, 0, 0, 0, 0, 0, 0), 2)
    assert rho.as_dict() == {0: 1}


def test_kill_narrow_with_zero_r_binds_nothing(f5):
    n = 6
    P = AffineSpan.of([AffinePoly.equation((1,) * n, 2, f5)], n, f5)
    rho = kill_narrow(P, AffineSpan.zero(n, f5), (0,) * n, 2)
    assert len(rho) == 0


def test_kill_narrow_preconditions(f5):
    P = AffineSpan.of([AffinePoly.equation((1, 1), 1, f5)], 2, f5)
    R = AffineSpan.of([AffinePoly.variable(0, 2, f5, 1)], 2, f5)
    with pytest.raises(PreconditionFailed):
        kill_narrow(P, R, (1, 0), 2)

    n = 8
    P = AffineSpan.of([AffinePoly.equation((1,) * n, 1, f5)], n, f5)
    R = AffineSpan.of([AffinePoly.variable(0, n, f5, 1)], n, f5)
    with pytest.raises(PreconditionFailed):
        kill_narrow(P, R, (0,) * n, 2)


def test_truncated_dimension_bound(f5):
    P = AffineSpan.of([AffinePoly.equation((1, 1, 1), 0, f5)], 3, f5)
    R = AffineSpan.of([AffinePoly.variable(0, 3, f5)], 3, f5)
    report = trunc_dim_bound_check(P, R, 1)
    assert report.hypothesis
    assert report.truncated_dim == 1
    assert report
    assert trunc_dim_bound_check(P, AffineSpan.zero(3, f5), 1).truncated_dim == 0


def test_image_size_bound(f5):
    cube = list(itertools.product((0, 1), repeat=2))
    holds, witness = image_size_bound_check(FMatrix.identity(2, f5), cube, 0)
    assert holds
    assert witness.image_size == 4

    holds, witness = image_size_bound_check(FMatrix([[1, 0], [0, 0]], f5), [(0, 0), (1, 1)], 0.5)
    assert holds
    assert witness.image_size == 2
    assert witness.prefix == (0,)

    with pytest.raises(PreconditionFailed):
        image_size_bound_check(FMatrix.identity(2, f5), [(0, 0)], 0.5)
    with pytest.raises(PreconditionFailed):
        image_size_bound_check(FMatrix.identity(2, f5), [(0, 2), (1, 1)], 0.5)


def test_truncated_dimension_bound_needs_the_stronger_weight_condition(f5):
    # w(P) = 1 > 0 * 2, yet [P]_{w <= 2} = P has dimension 1 > dim(R) = 0
    P = AffineSpan.of([AffinePoly.variable(0, 4, f5)], 4, f5)
    report = trunc_dim_bound_check(P, AffineSpan.zero(4, f5), 2)
    assert report.literal_hypothesis
    assert not report.hypothesis
    assert report.truncated_dim == 1
    assert report.literal_gap
    assert report

    heavy = AffineSpan.of([AffinePoly.equation((1, 1, 1, 1, 1), 2, f5)], 5, f5)
    report = trunc_dim_bound_check(heavy, AffineSpan.zero(5, f5), 2)
    assert report.hypothesis
    assert report.truncated_dim == 0
    assert not report.literal_gap


def _light_dim_by_brute_force(P, R, tau0, p):
    """dim of the span of all elements of P + R with weight <= tau0, from itertools sums."""
    basis = [q.vector for q in P.basis] + [q.vector for q in R.basis]
    n = P.n
    light = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(n + 1))
        if any(v) and sum(1 for c in v[:n] if c) <= tau0:
            light.append(v)
    return rank(FMatrix(light, P.field)) if light else 0


def test_truncated_dimension_bound_against_brute_force(f5, rng_factory):
    rng = rng_factory(17)
    n, checked = 6, 0
    for _ in range(40):
        P = AffineSpan.of([AffinePoly(tuple(int(c) for c in rng.integers(0, 5, size=n)), int(rng.integers(0, 5)), f5)], n, f5)
        R = AffineSpan.of([AffinePoly.variable(int(rng.integers(0, n)), n, f5)], n, f5)
        report = trunc_dim_bound_check(P, R, 1)
        assert report.truncated_dim == _light_dim_by_brute_force(P, R, 1, 5)
        if report.hypothesis:
            checked += 1
            assert report.truncated_dim <= R.dim
    assert checked > 0


@pytest.mark.parametrize("eps", [-0.5, 1.5])
def test_image_size_bound_rejects_eps_outside_unit_interval(f5, eps):
    with pytest.raises(PreconditionFailed):
        image_size_bound_check(FMatrix.identity(2, f5), [], eps)


def test_image_size_bound_rejects_empty_x(f5):
    with pytest.raises(PreconditionFailed):
        image_size_bound_check(FMatrix.identity(2, f5), [], 1)
