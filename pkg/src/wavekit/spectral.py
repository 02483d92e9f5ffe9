"""Float-only spectral diagnostics with exact guards.

Singular values are the square roots of the eigenvalues of A A^T, a rational
symmetric matrix, so its characteristic polynomial is exact and its real
roots can be isolated in rational intervals.  The reported floats therefore
carry a certified radius, and threshold comparisons (min singular value vs.
sqrt(n)) are decided exactly on the squared values -- never from floats.

Expansiveness for general matrices is a float eigensolve with a guard band;
for matrices with a certified scalar power it is decided exactly upstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .rational import Mat, Rat, scalar_power_probe


@dataclass(frozen=True)
class SingularValues:
    """Descending singular value estimates with a certified enclosure radius."""

    values: Tuple[float, ...]
    radius: float
    intervals: Tuple[Tuple[Rat, Rat], ...]  # rational enclosures of the squares


def gram_matrix(a: Mat) -> Mat:
    return a @ a.T


def _gram_poly(a: Mat):
    """sympy Poly of det(x I - A A^T), exact over Q."""
    import sympy

    g = gram_matrix(a)
    sg = sympy.Matrix(
        [[sympy.Rational(x.numerator, x.denominator) for x in row] for row in g.rows]
    )
    x = sympy.Symbol("x")
    return sympy.Poly(sg.charpoly(x), x)


def singular_values(a: Mat, target_radius: Fraction = Fraction(1, 10**6)) -> SingularValues:
    """Singular values of A with rational enclosures of their squares.

    The eigenvalues of A A^T are isolated by exact real-root isolation and
    refined until each square-root enclosure is narrower than the target;
    the returned radius bounds the distance from each float to the true
    singular value.
    """
    import sympy

    poly = _gram_poly(a)
    # refine eigenvalue intervals until sqrt intervals are narrow enough
    eps = target_radius * target_radius
    for _ in range(6):
        enclosures: List[Tuple[Rat, Rat]] = []
        for (lo, hi), mult in poly.intervals(eps=sympy.Rational(eps.numerator, eps.denominator)):
            lo_r = Fraction(int(lo.p), int(lo.q))
            hi_r = Fraction(int(hi.p), int(hi.q))
            lo_r = max(lo_r, Fraction(0))  # eigenvalues of A A^T are >= 0
            hi_r = max(hi_r, Fraction(0))
            enclosures.extend([(lo_r, hi_r)] * mult)
        widths = [math.sqrt(float(hi)) - math.sqrt(float(lo)) for lo, hi in enclosures]
        if all(w <= float(target_radius) for w in widths):
            break
        eps /= 10**6
    enclosures.sort(key=lambda iv: iv[0], reverse=True)
    values = tuple(
        (math.sqrt(float(lo)) + math.sqrt(float(hi))) / 2 for lo, hi in enclosures
    )
    radius = max(
        (math.sqrt(float(hi)) - math.sqrt(float(lo))) / 2 + 1e-12
        for lo, hi in enclosures
    )
    return SingularValues(values, radius, tuple(enclosures))


def min_singular_exceeds(a: Mat, threshold_sq: Rat) -> bool:
    """Exactly decide min(singular values)^2 > threshold_sq.

    Counts characteristic-polynomial roots of A A^T in (-inf, threshold_sq]
    by exact Sturm sequences; no floats are involved, so the answer is never
    indeterminate for a rational squared threshold.
    """
    import sympy

    poly = _gram_poly(a)
    thr = sympy.Rational(threshold_sq.numerator, threshold_sq.denominator)
    return poly.count_roots(-sympy.oo, thr) == 0


def expansive_check(a: Mat, guard: float = 1e-9) -> Optional[bool]:
    """All eigenvalue moduli > 1: exact when a scalar power exists, else guarded floats.

    Returns None when the float estimates fall inside the guard band around 1.
    """
    probe = scalar_power_probe(a)
    if probe is not None:
        _, c = probe
        return c > 1  # |lambda|^p = c exactly for every eigenvalue
    import numpy as np

    eig = np.linalg.eigvals(np.array(a.to_floats(), dtype=float))
    moduli = np.abs(eig)
    if moduli.min() > 1 + guard:
        return True
    if moduli.min() < 1 - guard:
        return False
    return None
