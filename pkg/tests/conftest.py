from fractions import Fraction

import pytest

from wavekit import (
    Mat,
    build_matrix,
    build_negative_scalar,
    build_positive_scalar,
)

# dilation transposes used throughout: the first satisfies the singular-value
# hypothesis, the second violates it yet still admits a construction at q=2
A_STAR_9I = Mat.of([[3, 0, 0], [0, 3, 0], [1, 0, -3]])
B_STAR_4I = Mat.of([[2, 0, 1], [0, -2, 0], [0, 0, -2]])


@pytest.fixture(scope="session")
def mat1_build():
    return build_matrix(A_STAR_9I, transpose_given=True)


@pytest.fixture(scope="session")
def matB_build():
    return build_matrix(B_STAR_4I, transpose_given=True)


@pytest.fixture(scope="session")
def main_221():
    return build_positive_scalar(2, 2, 1)


@pytest.fixture(scope="session")
def main_321():
    return build_positive_scalar(3, 2, 1)


@pytest.fixture(scope="session")
def neg_22():
    return build_negative_scalar(2, 2)


@pytest.fixture(scope="session")
def neg_32():
    return build_negative_scalar(3, 2)


@pytest.fixture(scope="session")
def half_d32():
    return build_matrix(Mat.scalar(2, Fraction(3, 2)))
