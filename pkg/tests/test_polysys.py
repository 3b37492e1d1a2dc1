"""Assembled polynomial systems: tables, recurrence, evaluation, kernel, identities."""

import random
from fractions import Fraction

import pytest

from momentpoly import (
    FamilySpec,
    associated_polys,
    build_system,
    christoffel,
    diagnostics,
    eval_monic,
    eval_poly,
    kernel,
    make_moments,
    moment_inner_product,
    monic_tables,
    recurrence_from_moments,
)
from momentpoly.polysys import (
    eval_row,
    inverse_moment_matrix,
    kernel_inverse_form,
    recurrence_delta_form,
)
from momentpoly.scalars import FLOAT, RATIONAL, exact_sqrt

from conftest import (
    CATALOG,
    gram_schmidt_recurrence,
    orthonormal_gram_schmidt,
    random_recurrence,
)


@pytest.fixture(scope="module")
def systems(catalog_moments):
    return {fam: build_system(catalog_moments[fam], 8) for fam in CATALOG}


class TestBuild:
    def test_order_zero_unit_polynomial(self):
        sys_ = build_system(make_moments(FamilySpec("gaussian", 1)), 0)
        assert sys_.Pi.rows == [[1]]

    def test_gaussian_first_three(self, systems):
        pi = systems["gaussian"].Pi
        r2 = exact_sqrt(Fraction(2))
        assert pi.rows[0] == [1]
        assert pi.rows[1] == [0, 1]
        assert pi.rows[2] == [-1 / r2, 0, 1 / r2]

    def test_uniform_degree_two(self, systems):
        # sqrt(5)/2 * (3 x^2 - 1)
        pi = systems["uniform"].Pi
        r5 = exact_sqrt(Fraction(5))
        assert pi.rows[2] == [-r5 / 2, 0, 3 * r5 / 2]

    @pytest.mark.parametrize("family", CATALOG)
    def test_tables_match_gram_schmidt(self, family, systems, catalog_moments):
        oracle = orthonormal_gram_schmidt(catalog_moments[family].moments, 8)
        assert systems[family].Pi.rows == oracle

    @pytest.mark.parametrize("family", CATALOG)
    def test_orthonormal_under_moment_functional(self, family, systems, catalog_moments):
        sys_ = systems[family]
        m = catalog_moments[family]
        for i in range(9):
            for j in range(i + 1):
                val = moment_inner_product(m, sys_.Pi.rows[i], sys_.Pi.rows[j])
                assert val == (1 if i == j else 0)

    @pytest.mark.parametrize("family", CATALOG)
    def test_lambda_factorization_identities(self, family, systems):
        # Lambda * Lambda^T = M and Pi^T * Pi = M^{-1}
        sys_ = systems[family]
        n = sys_.order
        lam = sys_.Lambda
        for i in range(n + 1):
            for j in range(i + 1):
                s = Fraction(0)
                for k in range(j + 1):
                    s = s + lam.rows[i][k] * lam.rows[j][k]
                assert s == sys_.moments.m(i + j)
        mu = inverse_moment_matrix(sys_)
        dense = sys_.hankel.dense()
        for i in range(n + 1):
            unit = [Fraction(1) if t == i else Fraction(0) for t in range(n + 1)]
            got = [
                sum(dense[r][c] * mu[c][t] for c in range(n + 1))
                for r in range(n + 1)
                for t in [i]
            ]
            assert got == unit


class TestRecurrence:
    def test_gaussian_squares_count_up(self, systems):
        rec = systems["gaussian"].rec
        assert rec.a2 == tuple(Fraction(k) for k in range(9))
        assert all(v == 0 for v in rec.b)

    def test_uniform_legendre_squares(self, systems):
        rec = systems["uniform"].rec
        for n in range(1, 9):
            assert rec.a2[n] == Fraction(n * n, 4 * n * n - 1)

    def test_first_b_equals_first_moment(self):
        m = make_moments(
            FamilySpec("explicit", 3, {"moments": ["1", "1/2", "2"]}), RATIONAL
        )
        assert build_system(m, 1).rec.b[0] == Fraction(1, 2)

    @pytest.mark.parametrize("family", CATALOG)
    def test_matches_gram_schmidt_recurrence(self, family, systems, catalog_moments):
        a2, b = gram_schmidt_recurrence(catalog_moments[family].moments, 8)
        rec = systems[family].rec
        assert list(rec.a2) == a2
        assert list(rec.b) == b

    @pytest.mark.parametrize("family", CATALOG)
    def test_determinant_form_cross_check(self, family, systems):
        sys_ = systems[family]
        a2, b = recurrence_delta_form(sys_)
        assert a2 == sys_.rec.a2
        assert b == sys_.rec.b

    def test_nonsymmetric_delta_form_cross_check(self):
        rng = random.Random(21)
        from momentpoly import moments_from_recurrence

        rec = random_recurrence(rng, 8)
        m = moments_from_recurrence(rec, 15)
        sys_ = build_system(m, 7)
        a2, b = recurrence_delta_form(sys_)
        assert a2 == sys_.rec.a2
        assert b == sys_.rec.b

    def test_symmetric_measures_have_zero_b(self, systems):
        for fam in CATALOG:
            assert all(v == 0 for v in systems[fam].rec.b)

    def test_extraction_recovers_final_odd_coefficient(self):
        rng = random.Random(5)
        from momentpoly import moments_from_recurrence

        rec = random_recurrence(rng, 10)
        m = moments_from_recurrence(rec, 12)  # even count: top moment is odd order
        back = recurrence_from_moments(m)
        assert back.a2 == rec.a2[:6]
        assert back.b == rec.b[:6]  # includes b_5, beyond the order-5 system


class TestEvaluation:
    def test_degree_zero(self, systems):
        assert eval_poly(systems["uniform"], 0, Fraction(7)) == 1

    def test_gaussian_values(self, systems):
        sys_ = systems["gaussian"]
        assert eval_poly(sys_, 2, Fraction(0)) == -1 / exact_sqrt(Fraction(2))
        assert eval_monic(sys_, 3, Fraction(2)) == 2  # x^3 - 3x at 2

    @pytest.mark.parametrize("family", CATALOG)
    def test_recurrence_equals_coefficient_evaluation(self, family):
        sys_ = build_system(make_moments(FamilySpec(family, 25), FLOAT), 12)
        rng = random.Random(17)
        for _ in range(100):
            x = rng.uniform(-1.5, 1.5)
            for k in (3, 8, 12):
                by_rec = eval_poly(sys_, k, x)
                by_row = eval_row(sys_.Pi.rows[k], x, FLOAT)
                assert by_rec == pytest.approx(by_row, rel=1e-8, abs=1e-9)

    def test_exact_recurrence_equals_rows(self, systems):
        sys_ = systems["semicircle"]
        for x in (Fraction(0), Fraction(1, 3), Fraction(-2)):
            for k in range(9):
                assert eval_poly(sys_, k, x) == eval_row(sys_.Pi.rows[k], x, RATIONAL)

    def test_three_term_residual_vanishes_symbolically(self, systems):
        # coefficients of x*p_n - a_{n+1} p_{n+1} - b_n p_n - a_n p_{n-1}
        for fam in CATALOG:
            sys_ = systems[fam]
            pi, rec = sys_.Pi.rows, sys_.rec
            for n in range(sys_.order):
                for j in range(n + 2):
                    shifted = pi[n][j - 1] if 1 <= j <= n + 1 and j - 1 <= n else Fraction(0)
                    val = shifted - rec.a(n + 1) * pi[n + 1][j]
                    if j <= n:
                        val = val - rec.b[n] * pi[n][j]
                    if n >= 1 and j <= n - 1:
                        val = val - rec.a(n) * pi[n - 1][j]
                    assert val == 0

    def test_out_of_range_rejected(self, systems):
        with pytest.raises(ValueError):
            eval_poly(systems["gaussian"], 9, Fraction(0))


class TestMonicTables:
    @pytest.mark.parametrize("family", CATALOG)
    def test_scaling_consistency(self, family, systems):
        # eta row n = Pi row n scaled by prod_{j<=n} a_j; tau column i = Lambda
        # column i divided by the same product up to i
        sys_ = systems[family]
        eta, tau = monic_tables(sys_)
        products = [Fraction(1)]
        for j in range(1, sys_.order + 1):
            products.append(products[-1] * sys_.rec.a(j))
        for n in range(sys_.order + 1):
            for i in range(n + 1):
                assert eta.rows[n][i] == sys_.Pi.rows[n][i] * products[n]
                assert tau.rows[n][i] == sys_.Lambda.rows[n][i] / products[i]


class TestAssociated:
    def test_initial_values(self, systems):
        rows = associated_polys(systems["uniform"])
        assert rows[0] == []  # q_0 = 0
        # q_1 is the constant 1/a_1 for every measure
        for fam in CATALOG:
            sys_ = systems[fam]
            q = associated_polys(sys_)
            assert q[1] == [1 / sys_.rec.a(1)]

    def test_gaussian_degree_one(self, systems):
        rows = associated_polys(systems["gaussian"])
        assert rows[2] == [Fraction(0), 1 / exact_sqrt(Fraction(2))]

    @pytest.mark.parametrize("family", CATALOG)
    def test_rows_satisfy_recurrence(self, family, systems):
        # q_{n+1} = ((x - b_n) q_n - a_n q_{n-1}) / a_{n+1} from q_0 = 0, q_1 = 1/a_1
        sys_ = systems[family]
        rows = associated_polys(sys_)
        rec = sys_.rec
        for x in (Fraction(0), Fraction(1, 2), Fraction(-3)):
            prev, cur = Fraction(0), 1 / rec.a(1)
            for n in range(1, sys_.order):
                nxt = ((x - rec.b[n]) * cur - rec.a(n) * prev) / rec.a(n + 1)
                prev, cur = cur, nxt
                assert cur == eval_row(rows[n + 1], x, RATIONAL)


class TestKernel:
    def test_order_zero_kernel_is_one(self):
        sys_ = build_system(make_moments(FamilySpec("uniform", 1)), 0)
        assert kernel(sys_, Fraction(2), Fraction(5)) == 1

    def test_gaussian_central_value_matches_inverse_entry(self, catalog_moments):
        sys_ = build_system(catalog_moments["gaussian"], 2)
        v = kernel(sys_, Fraction(0), Fraction(0))
        assert v == Fraction(3, 2)
        assert inverse_moment_matrix(sys_)[0][0] == Fraction(3, 2)

    def test_symmetry_and_inverse_form(self, systems):
        sys_ = systems["chebyshev1"]
        pts = [(Fraction(1, 3), Fraction(-1, 2)), (Fraction(2), Fraction(0))]
        for x, y in pts:
            assert kernel(sys_, x, y) == kernel(sys_, y, x)
            assert kernel(sys_, x, y) == kernel_inverse_form(sys_, x, y)

    def test_christoffel_is_reciprocal_diagonal(self, systems):
        sys_ = systems["uniform"]
        x = Fraction(1, 4)
        assert christoffel(sys_, x) * kernel(sys_, x, x) == 1


class TestDiagnostics:
    def test_order_zero_trivial(self):
        sys_ = build_system(make_moments(FamilySpec("gaussian", 1)), 0)
        d = diagnostics(sys_)
        assert d.moment_trace == 1
        assert d.p_zero_sum == 1
        assert d.all_passed()

    def test_gaussian_exact_identities(self, catalog_moments):
        sys_ = build_system(catalog_moments["gaussian"], 2)
        d = diagnostics(sys_)
        assert d.moment_trace == 5  # 1 + 1 + 3
        assert d.p_zero_sum == Fraction(3, 2)
        assert d.all_passed()

    def test_nonsymmetric_exact_identities(self):
        rng = random.Random(33)
        from momentpoly import moments_from_recurrence

        rec = random_recurrence(rng, 8)
        sys_ = build_system(moments_from_recurrence(rec, 17), 8)
        d = diagnostics(sys_)
        assert d.all_passed()
        assert d.q_zero_sum == d.q_moment_quadratic
        assert d.qp_zero_sum == d.qp_moment_sum

    @pytest.mark.parametrize("family", CATALOG)
    def test_float_spectral_identities(self, family):
        sys_ = build_system(make_moments(FamilySpec(family, 21), FLOAT), 10)
        d = diagnostics(sys_)
        assert d.eigenvalues is not None
        assert d.all_passed(), d.checks
        assert sum(d.eigenvalues) == pytest.approx(float(d.moment_trace), rel=1e-10)
