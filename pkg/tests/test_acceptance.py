"""Acceptance suite: one test per release criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  Every tolerance is pinned here; nothing is deferred.
"""

import random
import time
from fractions import Fraction as F

import pytest

from wavekit import (
    ConvexCell,
    DilationSpec,
    Mat,
    Region,
    Vec,
    apply_unimodular,
    build_matrix,
    build_negative_scalar,
    build_positive_scalar,
    cyclic_matrix,
    min_singular_exceeds,
    notched_parallelotope_region,
    singular_values,
    subtract_convex,
    verify_dilation_exact,
    verify_translation_exact,
    verify_wavelet_set,
)
from wavekit.polytopes import cells_interior_disjoint
from wavekit.rational import scalar_power_probe
from tests.conftest import A_STAR_9I, B_STAR_4I

MC_SAMPLES = 100_000


def _report(name, started):
    print(f"[PASS] {name} ({time.time() - started:.1f}s)")


def _ae_equal_disjoint_unions(cells_a, cells_b):
    """Exact a.e. set equality of two disjoint unions of cells."""
    for group in (cells_a, cells_b):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                ok, _ = cells_interior_disjoint(group[i], group[j])
                assert ok, "union is not disjoint"
    vol_a = sum((c.volume() for c in cells_a), F(0))
    vol_b = sum((c.volume() for c in cells_b), F(0))
    assert vol_a == vol_b, f"volumes differ: {vol_a} vs {vol_b}"
    for one, other in ((cells_a, cells_b), (cells_b, cells_a)):
        for c in one:
            covered = F(0)
            for d in other:
                inter = c.intersect(d)
                if inter is not None:
                    covered += inter.volume()
            assert covered == c.volume(), "containment fails a.e."


def test_criterion_1_notched_parallelotope_translation_suite():
    started = time.time()
    for n in (2, 3, 4):
        for alpha in (F(1, 2), F(1, 3), F(1, 9), F(1, 16)):
            region = notched_parallelotope_region(n, alpha)
            assert region.volume() == 1, (n, alpha)
            rep = verify_translation_exact(region)
            assert rep.passed, (n, alpha, rep.offenders)
    elapsed = time.time() - started
    assert elapsed < 10, f"suite took {elapsed:.1f}s, budget 10s"
    _report("criterion 1: skewed notched-box translation tilings", started)


def test_criterion_2_negative_scalar_wavelet_sets():
    started = time.time()
    for n in (2, 3):
        for d in (F(2), F(3), F(3, 2)):
            region, trace, dilation = build_negative_scalar(n, d)
            verdict = verify_wavelet_set(region, dilation, mode="exact")
            assert verdict.is_wavelet_set, (n, d)
            mc = verify_wavelet_set(
                region, dilation, mode="mc", samples=MC_SAMPLES, seed=42
            )
            assert mc.is_wavelet_set, (n, d)
            assert not mc.translation.offenders and not mc.dilation.offenders
            assert mc.translation.samples_checked == MC_SAMPLES

            # dilate of the whole by -1/d fills the notch exactly:
            # W union (-1/d)W equals the frame minus its (1/d^2)-scaled copy
            minus = Mat.scalar(n, -1 / d)
            lhs = list(region.cells) + [c.affine_image(minus) for c in region.cells]
            frame_cell = trace.outer.as_cell()
            inner_cell = trace.outer.scale(1 / (d * d)).as_cell()
            rhs = subtract_convex(frame_cell, inner_cell)
            _ae_equal_disjoint_unions(lhs, rhs)

    region, trace, _ = build_negative_scalar(3, 2)
    assert trace.t == F(-4, 3) * Vec.ones(3)
    assert trace.notch.base == F(-1, 3) * Vec.ones(3)
    assert trace.notch.far_corner() == F(2, 3) * Vec.ones(3)
    _report("criterion 2: negative-scalar wavelet sets + fill identity", started)


def test_criterion_3_positive_scalar_grid():
    started = time.time()
    for n in (2, 3, 4):
        for d in (2, 3):
            for k in range(1, d):
                region, trace, dilation = build_positive_scalar(n, d, k)
                assert trace.t == (F(d) * (k - d) / (d * d - 1)) * Vec.ones(n)
                cert = trace.attempts[-1]
                assert cert.hole_in_outer and cert.hole_clear_of_notch
                assert cert.satellite_clear
                verdict = verify_wavelet_set(region, dilation, mode="exact")
                assert verdict.is_wavelet_set, (n, d, k)
    elapsed = time.time() - started
    assert elapsed < 120, f"grid took {elapsed:.1f}s, budget 120s"
    _report("criterion 3: positive-scalar grid (n<=4, d<=3, all k)", started)


def test_criterion_4_first_matrix_regression():
    started = time.time()
    a = A_STAR_9I.T
    assert scalar_power_probe(a) == (2, F(9))
    region, trace, dilation = build_matrix(A_STAR_9I, transpose_given=True)
    assert trace.k == Vec.of([1, 1, -1])
    assert trace.t == Vec.of([F(-3, 4), F(-3, 4), F(-5, 8)])
    sv = singular_values(a)
    for got, want in zip(sv.values, (3.54, 3.0, 2.54)):
        assert abs(got - want) < 0.01
    verdict = verify_wavelet_set(region, dilation, mode="exact")
    assert verdict.is_wavelet_set
    _report("criterion 4: 9I-power matrix regression", started)


def test_criterion_5_second_matrix_regression():
    started = time.time()
    b = B_STAR_4I.T
    region, trace, dilation = build_matrix(B_STAR_4I, transpose_given=True)
    first = [at for at in trace.attempts if at.q == 1]
    assert first and not first[0].accepted and not first[0].hole_in_outer
    assert trace.q == 2
    assert trace.k == Vec.of([6, -4, -4])
    assert trace.t == F(-8, 15) * Vec.ones(3)
    # sufficient-but-not-necessary: hypothesis violated, construction fine
    assert min_singular_exceeds(b, F(3)) is False
    sv = singular_values(b)
    assert abs(sv.values[-1] - 1.56) < 0.01 and sv.values[-1] < 3**0.5
    verdict = verify_wavelet_set(region, dilation, mode="exact")
    assert verdict.is_wavelet_set
    _report("criterion 5: 4I-power matrix regression (hypothesis violated)", started)


def test_criterion_6_scalar_between_one_and_two():
    started = time.time()
    for n in (2, 3):
        region, trace, dilation = build_matrix(Mat.scalar(n, F(3, 2)))
        assert trace.q is not None and trace.q <= 12, trace.q
        verdict = verify_wavelet_set(region, dilation, mode="exact")
        assert verdict.is_wavelet_set, n
    _report("criterion 6: scalar dilation 3/2 via refinement search", started)


def test_criterion_7_unimodular_variant():
    started = time.time()
    region, _, dilation = build_positive_scalar(3, 2, 1)
    base_verdict = verify_wavelet_set(region, dilation, mode="exact")
    s = Mat.of([[1, 0, 0], [-1, 1, 0], [0, -1, 1]])
    variant = apply_unimodular(region, s)
    var_verdict = verify_wavelet_set(variant, dilation, mode="exact")
    assert base_verdict.is_wavelet_set and var_verdict.is_wavelet_set
    assert var_verdict.is_wavelet_set == base_verdict.is_wavelet_set
    _report("criterion 7: subdiagonal unimodular variant", started)


def test_criterion_8_negative_controls():
    started = time.time()
    # un-carved notched parallelotope cannot tile under a positive scalar
    d = F(2)
    t = d * (1 - d) / (d * d - 1)
    bare = notched_parallelotope_region(3, 1 / (d * d)).translate(t * Vec.ones(3))
    rep = verify_dilation_exact(bare, DilationSpec.for_scalar(d, 3))
    assert rep.verdict == "fail"
    assert rep.offenders and rep.offenders[0].witness is not None
    # half-volume region cannot tile under translation
    half = Region([ConvexCell.from_box(Vec.zero(2), Vec.of([1, F(1, 2)]))])
    rep = verify_translation_exact(half)
    assert rep.verdict == "fail"
    assert any(o.label == "volume" for o in rep.offenders)
    _report("criterion 8: negative controls fail with witnesses", started)


def test_criterion_9_randomized_property_suites():
    started = time.time()
    rng = random.Random(90125)

    # 400 cases: determinant of the skew basis
    for _ in range(400):
        n = rng.randint(2, 4)
        q = rng.randint(2, 60)
        alpha = F(rng.randint(1, q - 1), q)
        m = Mat.identity(n) - alpha * cyclic_matrix(n)
        assert m.det() == 1 - alpha**n

    def rand_rat(lo=-2, hi=2, den=4):
        return F(rng.randint(lo * den, hi * den), den)

    def rand_box(n):
        lo = [rand_rat() for _ in range(n)]
        hi = [l + abs(rand_rat(0, 2)) + F(1, 4) for l in lo]
        return ConvexCell.from_box(Vec.of(lo), Vec.of(hi))

    def rand_par(n):
        while True:
            g = Mat.of([[rand_rat(-1, 1, 3) for _ in range(n)] for _ in range(n)])
            if g.det() != 0:
                from wavekit import Parallelotope

                return Parallelotope(
                    Vec.of([rand_rat() for _ in range(n)]), g
                ).as_cell()

    # 300 cases: carve-out volume additivity
    for trial in range(300):
        n = rng.randint(2, 4)
        cell = rand_box(n) if trial % 2 else rand_par(n)
        hole = rand_par(n) if trial % 3 == 0 else rand_box(n)
        pieces = subtract_convex(cell, hole)
        inter = cell.intersect(hole)
        carved = inter.volume() if inter is not None else F(0)
        total = sum((p.volume() for p in pieces), F(0))
        assert total == cell.volume() - carved

    # 300 cases: affine volume scaling
    for trial in range(300):
        n = rng.randint(2, 4)
        cell = rand_box(n) if trial % 2 else rand_par(n)
        while True:
            m = Mat.of([[rand_rat(-1, 1, 3) for _ in range(n)] for _ in range(n)])
            if m.det() != 0:
                break
        shift = Vec.of([rand_rat() for _ in range(n)])
        assert cell.affine_image(m, shift).volume() == abs(m.det()) * cell.volume()

    # exact and sampled verdicts agree on the whole regression family
    regressions = [
        build_negative_scalar(2, 2),
        build_negative_scalar(3, F(3, 2)),
        build_positive_scalar(2, 2, 1),
        build_positive_scalar(3, 3, 2),
        build_matrix(A_STAR_9I, transpose_given=True),
        build_matrix(B_STAR_4I, transpose_given=True),
    ]
    for region, _, dilation in regressions:
        exact = verify_wavelet_set(region, dilation, mode="exact")
        sampled = verify_wavelet_set(region, dilation, mode="mc", samples=20_000)
        assert exact.is_wavelet_set == sampled.is_wavelet_set
        assert (
            exact.translation.verdict == sampled.translation.verdict
            and exact.dilation.verdict == sampled.dilation.verdict
        )
    elapsed = time.time() - started
    assert elapsed < 300, f"property suites took {elapsed:.1f}s, budget 300s"
    _report("criterion 9: randomized property suites (1000 cases)", started)
