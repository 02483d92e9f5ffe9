"""Exact rational scalars, vectors, and square matrices.

Everything downstream (polytopes, constructions, tiling verdicts) is computed
over Q.  Scalars are ``fractions.Fraction`` -- arbitrary precision, always in
lowest terms, positive denominator -- aliased as :data:`Rat`.  ``Vec`` and
``Mat`` are immutable wrappers providing the exact linear algebra the geometry
needs: fraction-free (Bareiss) determinants, Gauss-Jordan inverses, integer
powers, and rank.

Floating point never enters this module; the few float-only diagnostics live
in :mod:`wavekit.spectral`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

from .errors import DimensionError, ParameterError, SingularMatrixError

Rat = Fraction

RatLike = Union[Rat, int, str]


def as_rat(value: RatLike) -> Rat:
    """Coerce ints, ``"p/q"`` strings, or Fractions to an exact rational.

    Floats are rejected: silently converting them would launder rounding
    error into computations that must stay exact.
    """
    if isinstance(value, float):
        raise ParameterError(
            f"refusing float {value!r}; pass an int, Fraction, or 'p/q' string"
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParameterError(f"not a rational number: {value!r}") from exc


def rat_str(x: Rat) -> str:
    """Serialize a rational as ``"p/q"`` in lowest terms (``"p"`` when q=1)."""
    return str(x)


@dataclass(frozen=True)
class Vec:
    """Immutable vector with exact rational entries."""

    entries: Tuple[Rat, ...]

    @classmethod
    def of(cls, items: Iterable[RatLike]) -> "Vec":
        return cls(tuple(as_rat(x) for x in items))

    @staticmethod
    def zero(n: int) -> "Vec":
        return Vec((Fraction(0),) * n)

    @staticmethod
    def ones(n: int) -> "Vec":
        return Vec((Fraction(1),) * n)

    @staticmethod
    def unit(n: int, i: int) -> "Vec":
        return Vec(tuple(Fraction(1 if j == i else 0) for j in range(n)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Rat]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Rat:
        return self.entries[i]

    def __add__(self, other: "Vec") -> "Vec":
        return Vec(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Vec") -> "Vec":
        return Vec(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Vec":
        return Vec(tuple(-a for a in self.entries))

    def __rmul__(self, scalar: RatLike) -> "Vec":
        s = as_rat(scalar)
        return Vec(tuple(s * a for a in self.entries))

    def dot(self, other: "Vec") -> Rat:
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def norm_inf(self) -> Rat:
        return max(abs(a) for a in self.entries)

    def sum(self) -> Rat:
        return sum(self.entries, Fraction(0))

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.entries)

    def cyclic_shift(self) -> "Vec":
        """Apply the cyclic coordinate shift: (v1,...,vn) -> (vn, v1, ..., v(n-1))."""
        e = self.entries
        return Vec((e[-1],) + e[:-1])

    def to_floats(self) -> Tuple[float, ...]:
        return tuple(float(a) for a in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.entries) + ")"


@dataclass(frozen=True)
class Mat:
    """Immutable square matrix with exact rational entries."""

    rows: Tuple[Tuple[Rat, ...], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable[RatLike]]) -> "Mat":
        r = tuple(tuple(as_rat(x) for x in row) for row in rows)
        n = len(r)
        if n == 0 or any(len(row) != n for row in r):
            raise ParameterError("matrix must be square and nonempty")
        return cls(r)

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n))
                for i in range(n)
            )
        )

    @staticmethod
    def scalar(n: int, c: RatLike) -> "Mat":
        s = as_rat(c)
        return Mat(
            tuple(
                tuple(s if i == j else Fraction(0) for j in range(n))
                for i in range(n)
            )
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Vec]) -> "Mat":
        n = len(cols)
        if any(c.dim != n for c in cols):
            raise ParameterError("column count must match dimension")
        return cls(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> Vec:
        return Vec(self.rows[i])

    def col(self, j: int) -> Vec:
        return Vec(tuple(r[j] for r in self.rows))

    @property
    def T(self) -> "Mat":
        n = self.n
        return Mat(tuple(tuple(self.rows[i][j] for i in range(n)) for j in range(n)))

    def __add__(self, other: "Mat") -> "Mat":
        return Mat(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __rmul__(self, scalar: RatLike) -> "Mat":
        s = as_rat(scalar)
        return Mat(tuple(tuple(s * a for a in row) for row in self.rows))

    def __matmul__(self, other: Union["Mat", Vec]) -> Union["Mat", Vec]:
        if isinstance(other, Vec):
            if other.dim != self.n:
                raise ParameterError("dimension mismatch in Mat @ Vec")
            return Vec(
                tuple(
                    sum((a * b for a, b in zip(row, other.entries)), Fraction(0))
                    for row in self.rows
                )
            )
        n = self.n
        if other.n != n:
            raise ParameterError("dimension mismatch in Mat @ Mat")
        cols = other.T.rows
        return Mat(
            tuple(
                tuple(
                    sum((a * b for a, b in zip(row, col)), Fraction(0))
                    for col in cols
                )
                for row in self.rows
            )
        )

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> Rat:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        int_rows, mult = _rows_to_int(self.rows)
        return Fraction(int_det(int_rows), mult)

    def inverse(self) -> "Mat":
        """Exact inverse by Gauss-Jordan elimination; raises if singular."""
        n = self.n
        aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
               for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular; no exact inverse")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return Mat(tuple(tuple(row[n:]) for row in aug))

    def is_scalar_multiple(self) -> Optional[Rat]:
        """Return c when the matrix equals c*I exactly, else None."""
        c = self.rows[0][0]
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if (x != c) if i == j else (x != 0):
                    return None
        return c

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)

    def to_floats(self) -> Tuple[Tuple[float, ...], ...]:
        return tuple(tuple(float(x) for x in row) for row in self.rows)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in self.rows) + "]"


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix via Bareiss elimination.

    All intermediate divisions are exact, so the computation stays in the
    integers regardless of entry growth.
    """
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _rows_to_int(rows: Sequence[Sequence[Rat]]) -> Tuple[list, int]:
    """Scale each row to integers; return (int rows, product of scale factors)."""
    out = []
    mult = 1
    for row in rows:
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
        mult *= scale
    return out, mult


def rank(rows: Sequence[Sequence[Rat]]) -> int:
    """Exact rank of a (possibly rectangular) rational matrix."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][col]
        for i in range(r + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def det_of_rows(rows: Sequence[Sequence[Rat]]) -> Rat:
    """Exact determinant of rational rows via integer Bareiss elimination."""
    int_rows, mult = _rows_to_int([[Fraction(x) for x in row] for row in rows])
    return Fraction(int_det(int_rows), mult)


def affine_rank(points: Sequence[Vec]) -> int:
    """Dimension of the affine hull of a point set (0 for a single point)."""
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([tuple(p - base) for p in points[1:]])


def solve_int_system(
    normals: Sequence[Tuple[int, ...]], rhs: Sequence[Rat]
) -> Optional[Vec]:
    """Solve N x = rhs for integer N via Cramer's rule with Bareiss determinants.

    Returns None when N is singular.  The right-hand side is cleared to a
    common integer scale first so every determinant stays in the integers.
    """
    n = len(normals)
    d = int_det(normals)
    if d == 0:
        return None
    scale = math.lcm(*(x.denominator for x in rhs)) if rhs else 1
    rhs_int = [int(x * scale) for x in rhs]
    coords = []
    for j in range(n):
        col_replaced = [
            tuple(rhs_int[i] if k == j else normals[i][k] for k in range(n))
            for i in range(n)
        ]
        coords.append(Fraction(int_det(col_replaced), d * scale))
    return Vec(tuple(coords))


def check_dimension(n: int) -> int:
    """Enforce the supported ambient dimension range [2, 6]."""
    if not isinstance(n, int) or not (2 <= n <= 6):
        raise DimensionError(f"dimension must be an integer in [2, 6], got {n!r}")
    return n


def cyclic_matrix(n: int) -> Mat:
    """Cyclic coordinate-shift matrix: column j is the basis vector e_(j+1 mod n)."""
    check_dimension(n)
    return Mat(
        tuple(
            tuple(Fraction(1 if i == (j + 1) % n else 0) for j in range(n))
            for i in range(n)
        )
    )


def scalar_power_probe(
    A: Mat, p_max: int = 12
) -> Optional[Tuple[int, Rat]]:
    """Smallest p <= p_max with A^p = c*I for a positive scalar c.

    Negative scalar multiples are skipped: if A^p = -c*I then A^(2p) = c^2*I
    is found instead.  Returns (p, c) or None.
    """
    if p_max < 1:
        raise ParameterError("p_max must be >= 1")
    power = Mat.identity(A.n)
    for p in range(1, p_max + 1):
        power = power @ A
        c = power.is_scalar_multiple()
        if c is not None and c > 0:
            return p, c
    return None


def nearest_integer_vector(x: Vec) -> Vec:
    """Round each coordinate to the nearest integer; exact .5 ties go toward zero."""
    out = []
    for a in x:
        fl = math.floor(a)
        frac = a - fl
        if frac > Fraction(1, 2):
            out.append(fl + 1)
        elif frac < Fraction(1, 2):
            out.append(fl)
        else:
            # tie: pick the candidate with smaller magnitude
            out.append(fl + 1 if a < 0 else fl)
    return Vec.of(out)


@dataclass(frozen=True)
class DilationSpec:
    """A dilation matrix together with its certified scalar power.

    ``matrix ** power == scalar * I`` holds exactly with ``scalar > 1``; the
    frequency-domain tiling acts by the transpose.  ``kind`` is one of
    ``"positive-scalar"`` (matrix = d*I, power 1), ``"negative-scalar"``
    (matrix = -d*I, power 2, scalar d^2), or ``"matrix"``.
    """

    matrix: Mat
    power: int
    scalar: Rat
    kind: str

    KINDS = ("positive-scalar", "negative-scalar", "matrix")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown dilation kind {self.kind!r}")
        if self.power < 1:
            raise ParameterError("power must be a positive integer")
        if self.scalar <= 1:
            raise ParameterError("scalar must exceed 1")
        if (self.matrix ** self.power) != Mat.scalar(self.matrix.n, self.scalar):
            raise ParameterError("matrix**power != scalar*I; invalid dilation spec")

    @property
    def dim(self) -> int:
        return self.matrix.n

    @property
    def transpose(self) -> Mat:
        return self.matrix.T

    @classmethod
    def for_scalar(cls, d: RatLike, n: int) -> "DilationSpec":
        d = as_rat(d)
        if d <= 1:
            raise ParameterError("scalar dilation requires d > 1")
        return cls(Mat.scalar(n, d), 1, d, "positive-scalar")

    @classmethod
    def for_negative_scalar(cls, d: RatLike, n: int) -> "DilationSpec":
        d = as_rat(d)
        if d <= 1:
            raise ParameterError("negative-scalar dilation requires d > 1")
        return cls(Mat.scalar(n, -d), 2, d * d, "negative-scalar")

    @classmethod
    def for_matrix(cls, A: Mat, p_max: int = 12) -> "DilationSpec":
        from .errors import UnsupportedMatrixError

        probe = scalar_power_probe(A, p_max)
        if probe is None:
            raise UnsupportedMatrixError(
                f"no positive scalar power A^p = c*I found for p <= {p_max}"
            )
        p, c = probe
        if c <= 1:
            raise ParameterError(
                f"A^{p} = {c}*I is not expansive (need scalar > 1)"
            )
        diag = A.is_scalar_multiple()
        if diag is not None and diag > 0:
            return cls(A, p, c, "positive-scalar")
        if diag is not None and diag < 0:
            return cls(A, p, c, "negative-scalar")
        return cls(A, p, c, "matrix")

    def is_expansive(self) -> bool:
        # every eigenvalue satisfies |lambda|^power == scalar, so this is exact
        return self.scalar > 1

    def star_power(self, j: int) -> Mat:
        """Exact (A*)^j for any integer j, reduced through A*^power = scalar*I."""
        a, s = divmod(j, self.power)
        base = self.transpose ** s
        return (self.scalar ** a) * base
