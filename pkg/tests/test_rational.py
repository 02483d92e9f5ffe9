import random
from fractions import Fraction as F

import pytest

from wavekit import (
    DilationSpec,
    Mat,
    ParameterError,
    SingularMatrixError,
    Vec,
    as_rat,
    cyclic_matrix,
    nearest_integer_vector,
    rat_str,
    scalar_power_probe,
)
from tests.conftest import A_STAR_9I, B_STAR_4I


def rand_alpha(rng):
    q = rng.randint(2, 40)
    p = rng.randint(1, q - 1)
    return F(p, q)


class TestRat:
    def test_parse_and_format(self):
        assert as_rat("3/4") == F(3, 4)
        assert as_rat("-7") == -7
        assert rat_str(F(6, 8)) == "3/4"
        assert rat_str(F(5)) == "5"

    def test_floats_rejected(self):
        with pytest.raises(ParameterError):
            as_rat(0.5)

    def test_not_a_rational(self):
        with pytest.raises(ParameterError):
            as_rat("abc")


class TestCyclic:
    def test_two_cycle_swap(self):
        assert cyclic_matrix(2).rows == ((F(0), F(1)), (F(1), F(0)))

    def test_rotates_coordinates(self):
        v = Vec.of([1, 2, 3])
        assert (cyclic_matrix(3) @ v).entries == (F(3), F(1), F(2))
        assert v.cyclic_shift().entries == (F(3), F(1), F(2))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_order_n(self, n):
        c = cyclic_matrix(n)
        assert c**n == Mat.identity(n)
        assert c.det() == (-1) ** (n - 1)

    def test_dimension_guard(self):
        with pytest.raises(ParameterError):
            cyclic_matrix(1)
        with pytest.raises(ParameterError):
            cyclic_matrix(7)


class TestDetInverse:
    def test_skew_inverse_geometric_series(self):
        # (I - C/2)^-1 in the plane is the geometric-series matrix
        m = Mat.identity(2) - F(1, 2) * cyclic_matrix(2)
        assert m.inverse() == Mat.of([["4/3", "2/3"], ["2/3", "4/3"]])

    def test_identity_inverse(self):
        assert Mat.identity(4).inverse() == Mat.identity(4)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            Mat.of([[1, 2], [2, 4]]).inverse()

    def test_skew_det_small_cases(self):
        m = Mat.identity(3) - F(1, 3) * cyclic_matrix(3)
        assert m.det() == F(26, 27)

    def test_worked_example_det(self):
        assert A_STAR_9I.det() == -27

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_skew_det_identity_randomized(self, n):
        # det(I - alpha*C) = 1 - alpha^n over 100 random rational alphas
        rng = random.Random(1000 + n)
        c = cyclic_matrix(n)
        for _ in range(100):
            a = rand_alpha(rng)
            m = Mat.identity(n) - a * c
            assert m.det() == 1 - a**n
            assert m.inverse() @ m == Mat.identity(n)


class TestScalarPowerProbe:
    def test_reference_matrices(self):
        assert scalar_power_probe(A_STAR_9I) == (2, F(9))
        assert scalar_power_probe(A_STAR_9I.T) == (2, F(9))
        assert scalar_power_probe(B_STAR_4I) == (2, F(4))

    def test_scalar_matrix(self):
        assert scalar_power_probe(Mat.scalar(3, 2)) == (1, F(2))

    def test_negative_scalar_reported_at_doubled_power(self):
        assert scalar_power_probe(Mat.scalar(2, -2)) == (2, F(4))

    def test_absent(self):
        assert scalar_power_probe(Mat.of([[1, 1], [0, 1]])) is None

    def test_reconstructs_scalar_matrix(self):
        rng = random.Random(7)
        for m in (A_STAR_9I, B_STAR_4I, Mat.scalar(2, F(3, 2)), Mat.scalar(4, -3)):
            probe = scalar_power_probe(m)
            assert probe is not None
            p, d = probe
            assert m**p == Mat.scalar(m.n, d)


class TestNearestIntegerVector:
    def test_half_ties_go_toward_zero(self):
        x = Vec.of([F(3, 2), F(3, 2), -1])
        assert nearest_integer_vector(x).entries == (1, 1, -1)
        assert nearest_integer_vector(Vec.of([F(-3, 2), F(1, 2)])).entries == (-1, 0)

    def test_exact_integers(self):
        x = Vec.of([6, -4, -4])
        assert nearest_integer_vector(x) == x
        assert nearest_integer_vector(Vec.zero(3)) == Vec.zero(3)

    def test_minimizes_each_coordinate(self):
        rng = random.Random(11)
        for _ in range(200):
            x = Vec.of([F(rng.randint(-50, 50), rng.randint(1, 17)) for _ in range(3)])
            k = nearest_integer_vector(x)
            assert k.is_integral()
            for xi, ki in zip(x, k):
                assert abs(xi - ki) <= F(1, 2)


class TestDilationSpec:
    def test_scalar_kinds(self):
        s = DilationSpec.for_scalar(2, 3)
        assert s.kind == "positive-scalar" and s.power == 1 and s.scalar == 2
        n = DilationSpec.for_negative_scalar(2, 3)
        assert n.kind == "negative-scalar" and n.power == 2 and n.scalar == 4
        assert n.matrix == Mat.scalar(3, -2)

    def test_matrix_kind_from_probe(self):
        spec = DilationSpec.for_matrix(A_STAR_9I.T)
        assert spec.kind == "matrix" and (spec.power, spec.scalar) == (2, F(9))
        assert spec.is_expansive()

    def test_invalid_specs_rejected(self):
        with pytest.raises(ParameterError):
            DilationSpec(Mat.identity(2), 1, F(1), "positive-scalar")
        with pytest.raises(ParameterError):
            DilationSpec(Mat.scalar(2, 2), 2, F(2), "positive-scalar")

    def test_star_power_reduction(self):
        spec = DilationSpec.for_matrix(A_STAR_9I.T)
        a_star = spec.transpose
        assert spec.star_power(2) == Mat.scalar(3, 9)
        assert spec.star_power(-2) == Mat.scalar(3, F(1, 9))
        assert spec.star_power(3) == 9 * a_star
        assert spec.star_power(1) == a_star
        assert spec.star_power(-1) == a_star.inverse()
