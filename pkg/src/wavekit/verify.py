"""Tiling verification: translation by the integer lattice, dilation by A*.

Two independent routes decide each tiling condition:

* exact -- rational geometry end to end.  Translation tiling is decided by
  "volume equals the lattice covolume + packing" (equivalent for periodic
  packings); dilation tiling by pairwise disjointness of the dilates over a
  certified exponent window plus exact coverage of a fundamental shell
  K \\ A*^-1(K) built from the construction's outer parallelotope.
* monte-carlo -- random rational points with denominator 2^32, whose
  membership is still decided exactly: floating point only pre-filters, and
  any sample within the guard band of a boundary is resolved with rational
  arithmetic (samples exactly on a boundary are rerolled).

Reports are plain data and merge naturally: offender lists concatenate and
verdicts conjoin.
"""

from __future__ import annotations

import functools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .construct import ConstructionTrace
from .errors import InfiniteRangeError, ModeError, ParameterError
from .lp import OPTIMAL, lp_maximize
from .polytopes import (
    ConvexCell,
    Lattice,
    Region,
    boxes_overlap_interior,
    cells_interior_disjoint,
    subtract_convex,
)
from .rational import DilationSpec, Mat, Rat, Vec, rat_str

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"

DENOM_BITS = 32
DENOM = 1 << DENOM_BITS
FLOAT_GUARD = 1e-7
MAX_REROLLS = 64
MAX_OFFENDERS = 16


@dataclass
class Offender:
    """One recorded tiling violation: which copy, and an exact witness point."""

    label: object  # offset list, exponent int, or a tag like "volume"/"coverage"
    witness: Optional[Vec]
    note: str = ""

    def to_dict(self) -> dict:
        w = None if self.witness is None else [rat_str(x) for x in self.witness]
        label = self.label
        if isinstance(label, Vec):
            label = [rat_str(x) for x in label]
        return {"label": label, "witness": w, "note": self.note}


@dataclass
class TilingReport:
    mode: str  # "exact" | "monte-carlo"
    verdict: str  # pass | fail | indeterminate
    volume: Optional[Rat] = None
    offenders: List[Offender] = field(default_factory=list)
    samples_checked: int = 0
    seed: Optional[int] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "volume": None if self.volume is None else rat_str(self.volume),
            "offenders": [o.to_dict() for o in self.offenders],
            "samples_checked": self.samples_checked,
            "seed": self.seed,
            "details": self.details,
        }


@dataclass
class WaveletVerdict:
    translation: TilingReport
    dilation: TilingReport

    @property
    def is_wavelet_set(self) -> bool:
        return self.translation.passed and self.dilation.passed

    @property
    def exit_code(self) -> int:
        """0 verified wavelet set, 2 verified not, 3 indeterminate."""
        if self.translation.verdict == FAIL or self.dilation.verdict == FAIL:
            return 2
        if (
            self.translation.verdict == INDETERMINATE
            or self.dilation.verdict == INDETERMINATE
        ):
            return 3
        return 0

    def to_dict(self) -> dict:
        return {
            "is_wavelet_set": self.is_wavelet_set,
            "exit_code": self.exit_code,
            "translation": self.translation.to_dict(),
            "dilation": self.dilation.to_dict(),
        }


def _timed(fn):
    """Record wall-clock runtime in the report's details."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.monotonic()
        report = fn(*args, **kwargs)
        report.details.setdefault(
            "elapsed_seconds", round(time.monotonic() - t0, 6)
        )
        return report

    return wrapper


# -- translation tiling -------------------------------------------------------


def translation_offsets(region: Region) -> List[Vec]:
    """Nonzero integer vectors whose shift can overlap the region's bounding box."""
    lo, hi = region.bounding_box()
    n = region.dim
    ranges = [
        range(math.ceil(lo[i] - hi[i]), math.floor(hi[i] - lo[i]) + 1)
        for i in range(n)
    ]
    out = []
    for zt in _product(ranges):
        if any(zt):
            out.append(Vec.of(zt))
    return out


def _product(ranges):
    import itertools

    return itertools.product(*ranges)


def _pair_offsets(
    c1: ConvexCell, c2: ConvexCell, lattice: Optional[Lattice]
) -> List[Tuple[Vec, Vec]]:
    """Lattice vectors v with c1 and c2+v overlapping on interior, as (coeffs, v)."""
    lo1, hi1 = c1.bounding_box()
    lo2, hi2 = c2.bounding_box()
    n = c1.dim
    lo = Vec(tuple(lo1[i] - hi2[i] for i in range(n)))
    hi = Vec(tuple(hi1[i] - lo2[i] for i in range(n)))
    if lattice is None:
        ranges = []
        for i in range(n):
            a = math.floor(lo[i]) + 1 if lo[i].denominator == 1 else math.ceil(lo[i])
            b = math.ceil(hi[i]) - 1 if hi[i].denominator == 1 else math.floor(hi[i])
            ranges.append(range(a, b + 1))
        return [(Vec.of(z), Vec.of(z)) for z in _product(ranges)]
    return lattice.vectors_in_box(lo, hi, strict=True)


@_timed
def verify_translation_exact(
    region: Region, lattice: Optional[Lattice] = None
) -> TilingReport:
    """Exact translation-tiling verdict: volume identity plus packing.

    For a periodic packing, exact volume equal to the lattice covolume is
    equivalent to covering, so the verdict needs no explicit cover check.
    The packing check includes cell pairs inside the region itself (offset
    zero), making the verdict self-contained for externally supplied regions.
    """
    target = lattice.covolume() if lattice else Fraction(1)
    vol = region.volume()
    offenders: List[Offender] = []
    if vol != target:
        offenders.append(
            Offender("volume", None, f"region volume {vol} != covolume {target}")
        )
    cells = region.cells
    checked = 0
    for i in range(len(cells)):
        for j in range(i, len(cells)):
            for coeffs, v in _pair_offsets(cells[i], cells[j], lattice):
                if i == j:
                    # v and -v are the same unordered pair; keep one
                    nonzero = next((c for c in coeffs if c != 0), None)
                    if nonzero is None or nonzero < 0:
                        continue
                checked += 1
                inter = cells[i].intersect(cells[j].translate(v))
                if inter is not None:
                    offenders.append(
                        Offender(
                            coeffs,
                            inter.interior_point(),
                            f"cells {i} and {j} overlap at offset {v}",
                        )
                    )
                    if len(offenders) >= MAX_OFFENDERS:
                        break
            if len(offenders) >= MAX_OFFENDERS:
                break
        if len(offenders) >= MAX_OFFENDERS:
            break
    verdict = PASS if not offenders else FAIL
    return TilingReport(
        mode="exact",
        verdict=verdict,
        volume=vol,
        offenders=offenders,
        details={"pairs_checked": checked, "target_volume": rat_str(target)},
    )


# -- Monte Carlo engine -------------------------------------------------------


class _CellData:
    """Float pre-filter data for one cell, with exact fallbacks."""

    def __init__(self, cell: ConvexCell):
        self.cell = cell
        normals = np.array([h.normal for h in cell.halfspaces], dtype=float)
        offsets = np.array([float(h.offset) for h in cell.halfspaces], dtype=float)
        scale = np.abs(normals).max(axis=1)
        scale[scale == 0] = 1.0
        self.normals = normals / scale[:, None]
        self.offsets = offsets / scale
        self.bbox = cell.bounding_box()

    def margins(self, pts: np.ndarray) -> np.ndarray:
        """Min normalized slack per point; >0 inside, <0 outside."""
        return (self.offsets[None, :] - pts @ self.normals.T).min(axis=1)


def _exact_membership(cell: ConvexCell, x: Vec) -> Tuple[bool, bool]:
    """(strictly inside, on boundary) decided with rational arithmetic."""
    on_boundary = False
    for h in cell.halfspaces:
        s = h.slack(x)
        if s < 0:
            return False, False
        if s == 0:
            on_boundary = True
    return (not on_boundary), on_boundary


def _rand_numerators(rng: random.Random, count: int, n: int) -> np.ndarray:
    flat = [rng.getrandbits(DENOM_BITS) for _ in range(count * n)]
    return np.array(flat, dtype=np.int64).reshape(count, n)


@_timed
def verify_translation_mc(
    region: Region,
    samples: int = 100_000,
    seed: int = 42,
    lattice: Optional[Lattice] = None,
) -> TilingReport:
    """Sampled translation-tiling check with exact membership semantics.

    Points are uniform rationals with denominator 2^32 in the lattice's
    fundamental cell; each must be covered by exactly one translate.  The
    bulk test runs vectorized in floats with a guard band; guarded samples
    are re-decided exactly and boundary hits are rerolled.
    """
    n = region.dim
    basis = lattice.basis if lattice else Mat.identity(n)
    basis_f = np.array(basis.to_floats(), dtype=float)
    cells = [_CellData(c) for c in region.cells]

    # candidate translates per cell: lattice vectors reaching the cell's box
    # from the fundamental cell's box
    fd = Lattice(basis)
    fd_corners = [
        basis @ Vec.of([(mask >> i) & 1 for i in range(n)]) for mask in range(1 << n)
    ]
    fd_lo = Vec(tuple(min(c[i] for c in fd_corners) for i in range(n)))
    fd_hi = Vec(tuple(max(c[i] for c in fd_corners) for i in range(n)))
    tasks: List[Tuple[int, Vec, np.ndarray]] = []
    for ci, cd in enumerate(cells):
        lo_c, hi_c = cd.bbox
        # coverage of x by cell+v is tested as x-v in cell, so v ranges over
        # the fundamental box minus the cell box
        box_lo = Vec(tuple(fd_lo[i] - hi_c[i] for i in range(n)))
        box_hi = Vec(tuple(fd_hi[i] - lo_c[i] for i in range(n)))
        for _, v in fd.vectors_in_box(box_lo, box_hi, strict=False):
            tasks.append((ci, v, np.array(v.to_floats(), dtype=float)))

    rng = random.Random(seed)
    nums = _rand_numerators(rng, samples, n)

    def exact_point(row: np.ndarray) -> Vec:
        u = Vec(tuple(Fraction(int(k), DENOM) for k in row))
        return basis @ u

    def exact_count(x: Vec) -> Tuple[int, bool, List[Vec]]:
        cnt, hits, boundary = 0, [], False
        for ci, v, _ in tasks:
            cell = cells[ci].cell
            lo_c, hi_c = cells[ci].bbox
            y = x - v
            if any(y[i] < lo_c[i] or y[i] > hi_c[i] for i in range(n)):
                continue
            inside, on_b = _exact_membership(cell, y)
            if on_b:
                boundary = True
            if inside:
                cnt += 1
                hits.append(v)
        return cnt, boundary, hits

    offenders: List[Offender] = []
    reroll_rng = random.Random(seed ^ 0x5DEECE66D)
    rerolls = 0

    pts = (nums / float(DENOM)) @ basis_f.T
    counts = np.zeros(samples, dtype=np.int32)
    suspect = np.zeros(samples, dtype=bool)
    for ci, v, vf in tasks:
        m = cells[ci].margins(pts - vf[None, :])
        counts += (m > FLOAT_GUARD).astype(np.int32)
        suspect |= np.abs(m) <= FLOAT_GUARD

    # membership of x in (cell + v) was tested as x - v in cell
    for idx in np.nonzero(suspect)[0]:
        for _ in range(MAX_REROLLS):
            x = exact_point(nums[idx])
            cnt, boundary, _ = exact_count(x)
            if not boundary:
                counts[idx] = cnt
                break
            nums[idx] = [reroll_rng.getrandbits(DENOM_BITS) for _ in range(n)]
            rerolls += 1
        else:
            return TilingReport(
                mode="monte-carlo",
                verdict=INDETERMINATE,
                offenders=[Offender("reroll-cap", exact_point(nums[idx]))],
                samples_checked=samples,
                seed=seed,
                details={"note": "reroll cap exceeded"},
            )

    bad = np.nonzero(counts != 1)[0]
    for idx in bad[:MAX_OFFENDERS]:
        x = exact_point(nums[idx])
        cnt, _, hits = exact_count(x)
        if cnt == 1:
            continue  # float guard was pessimistic; exact count is fine
        label = [[rat_str(c) for c in h] for h in hits] if hits else "uncovered"
        offenders.append(Offender(label, x, f"covered {cnt} times"))
    verdict = PASS if not offenders else FAIL
    return TilingReport(
        mode="monte-carlo",
        verdict=verdict,
        volume=region.volume(),
        offenders=offenders,
        samples_checked=samples,
        seed=seed,
        details={"rerolls": rerolls, "translates_considered": len(tasks)},
    )


# -- dilation tiling ----------------------------------------------------------


def _region_norm_bounds(region: Region) -> Tuple[Rat, Rat]:
    """Exact (min, max) of the sup-norm over the region.

    The max is attained at a vertex; the min is one rational LP per cell.
    """
    r_max = max(v.norm_inf() for c in region.cells for v in c.vertices)
    n = region.dim
    r_min = None
    for cell in region.cells:
        A = []
        b = []
        for h in cell.halfspaces:
            A.append([Fraction(a) for a in h.normal] + [Fraction(0)])
            b.append(h.offset)
        for i in range(n):
            for sgn in (1, -1):
                row = [Fraction(0)] * (n + 1)
                row[i] = Fraction(sgn)
                row[n] = Fraction(-1)
                A.append(row)
                b.append(Fraction(0))
        c = [Fraction(0)] * n + [Fraction(-1)]
        res = lp_maximize(c, A, b)
        if res.status != OPTIMAL:
            raise ParameterError(f"norm LP failed with status {res.status}")
        val = -res.value
        r_min = val if r_min is None else min(r_min, val)
    return r_min, r_max


def _powers_norms(dilation: DilationSpec) -> List[Tuple[Rat, Rat]]:
    """(lower, upper) sup-norm distortion of A*^s for s = 0..p-1, exact."""
    out = []
    for s in range(dilation.power):
        m = dilation.transpose ** s
        up = max(sum(abs(x) for x in row) for row in m.rows)
        m_inv = m.inverse()
        inv_up = max(sum(abs(x) for x in row) for row in m_inv.rows)
        out.append((1 / inv_up, up))
    return out


def _j_candidates(
    dilation: DilationSpec,
    src: Tuple[Rat, Rat],
    tgt: Tuple[Rat, Rat],
    include_zero: bool,
) -> List[int]:
    """Exponents j for which A*^j(source) can meet the target, by norm bounds.

    Writes j = a*p + s so A*^j = d^a A*^s and solves the exact rational
    inequalities d^a * low_s * src_min <= tgt_max and
    d^a * up_s * src_max >= tgt_min for integer a.
    """
    src_min, src_max = src
    tgt_min, tgt_max = tgt
    if src_min <= 0 or tgt_min <= 0:
        raise InfiniteRangeError("norm window needs sources and targets off 0")
    d = dilation.scalar
    p = dilation.power
    js = set()
    for s, (low, up) in enumerate(_powers_norms(dilation)):
        # largest a with d^a <= tgt_max / (low * src_min)
        cap_hi = tgt_max / (low * src_min)
        cap_lo = tgt_min / (up * src_max)
        a = 0
        val = Fraction(1)
        while val <= cap_hi:  # walk up
            a += 1
            val *= d
        a_hi = a - 1
        a = 0
        val = Fraction(1)
        while val >= cap_lo:  # walk down
            a -= 1
            val /= d
        a_lo = a + 1
        for a in range(a_lo, a_hi + 1):
            j = a * p + s
            if include_zero or j != 0:
                js.add(j)
    return sorted(js)


def dilation_j_range(region: Region, dilation: DilationSpec) -> Tuple[int, int]:
    """Window of exponents outside which A*^j(region) cannot meet the region.

    Raises InfiniteRangeError when the region's closure reaches the origin,
    since then no finite window exists.
    """
    r_min, r_max = _region_norm_bounds(region)
    if r_min <= 0:
        raise InfiniteRangeError(
            "region closure contains 0; dilates overlap at every scale"
        )
    js = _j_candidates(dilation, (r_min, r_max), (r_min, r_max), include_zero=False)
    if not js:
        return (0, 0)
    return (min(js), max(js))


def _image_region_cells(region: Region, m: Mat) -> List[ConvexCell]:
    return [c.affine_image(m) for c in region.cells]


@_timed
def verify_dilation_exact(
    region: Region,
    dilation: DilationSpec,
    mc_samples: int = 100_000,
    mc_seed: int = 42,
) -> TilingReport:
    """Exact dilation-tiling verdict.

    Disjointness: A*^j(region) is interior-disjoint from the region for every
    j != 0 in the certified window (j and -j are equivalent checks, so only
    magnitudes are tested).  Coverage: with K the construction's outer
    parallelotope (0 certified interior, A*^-1 K certified inside K), the
    shell K \\ A*^-1 K must be covered exactly:
    sum_j vol(A*^j R intersect shell) = vol(shell).

    Without usable frame metadata the coverage side falls back to Monte
    Carlo (with a warning in the report details); assumes the region's own
    cells are interior-disjoint, which `verify_translation_exact` checks.
    """
    vol = region.volume()
    offenders: List[Offender] = []
    details: Dict[str, object] = {}

    try:
        r_min, r_max = _region_norm_bounds(region)
        if r_min <= 0:
            raise InfiniteRangeError("region closure contains 0")
        js = _j_candidates(
            dilation, (r_min, r_max), (r_min, r_max), include_zero=False
        )
    except InfiniteRangeError:
        # no finite window: hunt for a small-exponent overlap witness
        for j in range(1, 2 * dilation.power + 1):
            m = dilation.star_power(j)
            imaged = _image_region_cells(region, m)
            for a in imaged:
                for b in region.cells:
                    ok, witness = cells_interior_disjoint(a, b)
                    if not ok:
                        offenders.append(
                            Offender(
                                j,
                                witness,
                                "region closure reaches 0 and dilate overlaps",
                            )
                        )
                        return TilingReport(
                            mode="exact",
                            verdict=FAIL,
                            volume=vol,
                            offenders=offenders,
                            details={"note": "no finite exponent window"},
                        )
        raise

    magnitudes = sorted({abs(j) for j in js})
    details["j_window"] = [min(js), max(js)] if js else [0, 0]
    for j in magnitudes:
        m = dilation.star_power(j)
        found_for_j = False
        for a in _image_region_cells(region, m):
            for b in region.cells:
                ok, witness = cells_interior_disjoint(a, b)
                if not ok:
                    offenders.append(Offender(j, witness, "dilate overlaps region"))
                    found_for_j = True
                    break
            if found_for_j:
                break
        if len(offenders) >= MAX_OFFENDERS:
            break
    if offenders:
        return TilingReport(
            mode="exact", verdict=FAIL, volume=vol, offenders=offenders, details=details
        )

    # coverage over the fundamental shell K \ A*^-1 K
    frame = region.frame
    scaffold_ok = False
    if frame is not None:
        k_cell = frame.as_cell()
        zero = Vec.zero(region.dim)
        zero_interior = all(h.slack(zero) > 0 for h in k_cell.halfspaces)
        inner = frame.image(dilation.transpose.inverse())
        nested = all(k_cell.contains(c) for c in inner.corners())
        scaffold_ok = zero_interior and nested
    if not scaffold_ok:
        details["warning"] = (
            "no usable outer-parallelotope frame; dilation coverage checked "
            "by Monte Carlo"
        )
        mc = verify_dilation_mc(region, dilation, samples=mc_samples, seed=mc_seed)
        mc.details.update(details)
        return mc

    shell_cells = subtract_convex(k_cell, inner.as_cell())
    shell_vol = k_cell.volume() - inner.as_cell().volume()
    assert sum((c.volume() for c in shell_cells), Fraction(0)) == shell_vol
    shell_min, shell_max = _region_norm_bounds(Region(shell_cells))
    cov_js = _j_candidates(
        dilation, (r_min, r_max), (shell_min, shell_max), include_zero=True
    )
    covered = Fraction(0)
    for j in cov_js:
        m = dilation.star_power(j)
        for a in _image_region_cells(region, m):
            abox = a.bounding_box()
            for s in shell_cells:
                if not boxes_overlap_interior(abox, s.bounding_box()):
                    continue
                inter = a.intersect(s)
                if inter is not None:
                    covered += inter.volume()
    details["coverage_window"] = [min(cov_js), max(cov_js)]
    details["shell_volume"] = rat_str(shell_vol)
    details["covered_volume"] = rat_str(covered)
    if covered != shell_vol:
        witness = _hunt_uncovered_point(
            region, dilation, shell_cells, cov_js, seed=mc_seed
        )
        offenders.append(
            Offender(
                "coverage",
                witness,
                f"dilates cover {covered} of the {shell_vol} shell",
            )
        )
    verdict = PASS if not offenders else FAIL
    return TilingReport(
        mode="exact", verdict=verdict, volume=vol, offenders=offenders, details=details
    )


def _hunt_uncovered_point(
    region: Region,
    dilation: DilationSpec,
    shell_cells: Sequence[ConvexCell],
    cov_js: Sequence[int],
    seed: int,
    attempts: int = 200,
) -> Optional[Vec]:
    """Find an exact point of the shell missed by every dilate, if possible."""
    mats = [dilation.star_power(-j) for j in cov_js]  # x in A*^j R <=> A*^-j x in R
    candidates: List[Vec] = [c.interior_point() for c in shell_cells]
    rng = random.Random(seed)
    lo = Vec(
        tuple(
            min(cell.bounding_box()[0][i] for cell in shell_cells)
            for i in range(region.dim)
        )
    )
    hi = Vec(
        tuple(
            max(cell.bounding_box()[1][i] for cell in shell_cells)
            for i in range(region.dim)
        )
    )
    for _ in range(attempts):
        u = Vec(
            tuple(Fraction(rng.getrandbits(DENOM_BITS), DENOM) for _ in range(region.dim))
        )
        x = lo + Vec(tuple((hi[i] - lo[i]) * u[i] for i in range(region.dim)))
        if any(c.contains(x) for c in shell_cells):
            candidates.append(x)
    for x in candidates:
        if not any(region.contains_point(m @ x) for m in mats):
            return x
    return None


@_timed
def verify_dilation_mc(
    region: Region,
    dilation: DilationSpec,
    samples: int = 100_000,
    seed: int = 42,
) -> TilingReport:
    """Sampled dilation-tiling check: every annulus point has exactly one dilate in R.

    Samples are exact rationals in the region's bounding box minus a small
    origin box; for each the number of exponents j with A*^j x in R must be
    exactly 1.  Float pre-filtering with exact fallback, as in the
    translation sampler.
    """
    n = region.dim
    cells = [_CellData(c) for c in region.cells]
    lo, hi = region.bounding_box()
    try:
        r_min, _ = _region_norm_bounds(region)
    except ParameterError:
        r_min = Fraction(0)
    width = max(hi[i] - lo[i] for i in range(n))
    origin_eps = r_min / 2 if r_min > 0 else width / 1000
    box_max = max(
        max(abs(lo[i]), abs(hi[i])) for i in range(n)
    )
    tgt_min = r_min if r_min > 0 else origin_eps / 2
    js = _j_candidates(
        dilation, (origin_eps, box_max), (tgt_min, box_max), include_zero=True
    )
    mats = [(j, dilation.star_power(j)) for j in js]
    mats_f = [(j, np.array(m.to_floats(), dtype=float)) for j, m in mats]

    rng = random.Random(seed)
    reroll_rng = random.Random(seed ^ 0x5DEECE66D)
    lo_f = np.array(lo.to_floats())
    width_f = np.array([(hi[i] - lo[i]) for i in range(n)], dtype=float)
    eps_f = float(origin_eps)

    def draw(count: int, source: random.Random) -> np.ndarray:
        return _rand_numerators(source, count, n)

    def exact_point(row: np.ndarray) -> Vec:
        return Vec(
            tuple(
                lo[i] + (hi[i] - lo[i]) * Fraction(int(row[i]), DENOM)
                for i in range(n)
            )
        )

    def exact_count(x: Vec) -> Tuple[int, bool, List[int]]:
        cnt, hits, boundary = 0, [], False
        for j, m in mats:
            y = m @ x
            for cd in cells:
                lo_c, hi_c = cd.bbox
                if any(y[i] < lo_c[i] or y[i] > hi_c[i] for i in range(n)):
                    continue
                inside, on_b = _exact_membership(cd.cell, y)
                if on_b:
                    boundary = True
                if inside:
                    cnt += 1
                    hits.append(j)
        return cnt, boundary, hits

    # rejection-sample the annulus: points too close to 0 are redrawn
    nums = draw(samples, rng)
    for _ in range(MAX_REROLLS):
        pts = lo_f[None, :] + (nums / float(DENOM)) * width_f[None, :]
        near0 = np.abs(pts).max(axis=1) <= eps_f * (1 + 1e-9)
        if not near0.any():
            break
        idx = np.nonzero(near0)[0]
        repl = draw(len(idx), rng)
        nums[idx] = repl
    pts = lo_f[None, :] + (nums / float(DENOM)) * width_f[None, :]

    counts = np.zeros(samples, dtype=np.int32)
    suspect = np.zeros(samples, dtype=bool)
    for j, mf in mats_f:
        imgs = pts @ mf.T
        for cd in cells:
            m = cd.margins(imgs)
            counts += (m > FLOAT_GUARD).astype(np.int32)
            suspect |= np.abs(m) <= FLOAT_GUARD
    # leftovers from the rejection loop are rerolled on the exact path
    suspect |= np.abs(pts).max(axis=1) <= eps_f * (1 + 1e-9)

    rerolls = 0
    for idx in np.nonzero(suspect)[0]:
        for _ in range(MAX_REROLLS):
            x = exact_point(nums[idx])
            if x.norm_inf() <= origin_eps:
                nums[idx] = draw(1, reroll_rng)[0]
                rerolls += 1
                continue
            cnt, boundary, _ = exact_count(x)
            if not boundary:
                counts[idx] = cnt
                break
            nums[idx] = draw(1, reroll_rng)[0]
            rerolls += 1
        else:
            return TilingReport(
                mode="monte-carlo",
                verdict=INDETERMINATE,
                samples_checked=samples,
                seed=seed,
                details={"note": "reroll cap exceeded"},
            )

    offenders: List[Offender] = []
    bad = np.nonzero(counts != 1)[0]
    for idx in bad[:MAX_OFFENDERS]:
        x = exact_point(nums[idx])
        cnt, _, hits = exact_count(x)
        if cnt == 1:
            continue
        offenders.append(
            Offender(hits if hits else "uncovered", x, f"hit by {cnt} dilates")
        )
    verdict = PASS if not offenders else FAIL
    return TilingReport(
        mode="monte-carlo",
        verdict=verdict,
        volume=region.volume(),
        offenders=offenders,
        samples_checked=samples,
        seed=seed,
        details={"rerolls": rerolls, "j_window": [min(js), max(js)]},
    )


# -- combined verdicts --------------------------------------------------------


def satellite_notch_identity(trace: ConstructionTrace, dilation: DilationSpec) -> bool:
    """Exact vertex-set identity: the satellite dilates onto the notch.

    Applies A*^(1 - p q) to the satellite parallelotope and compares corner
    sets with the notch parallelotope.
    """
    sat = trace.satellite()
    if sat is None:
        raise ParameterError("construction has no satellite piece")
    m = dilation.star_power(-trace.p * trace.q + 1)
    imaged = sorted((m @ c).entries for c in sat.corners())
    target = sorted(c.entries for c in trace.notch.corners())
    return imaged == target


def verify_wavelet_set(
    region: Region,
    dilation: DilationSpec,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 42,
) -> WaveletVerdict:
    """Combined wavelet-set verdict: translation and dilation tilings.

    ``mode``: "exact", "mc", or "both" (exact verdicts, with Monte Carlo
    agreement recorded in the report details; disagreement downgrades the
    verdict to indeterminate).
    """
    if mode not in ("exact", "mc", "both"):
        raise ModeError(f"unknown verification mode {mode!r}")
    if mode == "mc":
        return WaveletVerdict(
            translation=verify_translation_mc(region, samples, seed),
            dilation=verify_dilation_mc(region, dilation, samples, seed),
        )
    trans = verify_translation_exact(region)
    try:
        dil = verify_dilation_exact(region, dilation, mc_samples=samples, mc_seed=seed)
    except InfiniteRangeError as exc:
        dil = TilingReport(
            mode="exact",
            verdict=INDETERMINATE,
            details={"note": str(exc)},
        )
    if mode == "both":
        trans_mc = verify_translation_mc(region, samples, seed)
        dil_mc = verify_dilation_mc(region, dilation, samples, seed)
        trans.details["monte_carlo"] = trans_mc.to_dict()
        dil.details["monte_carlo"] = dil_mc.to_dict()
        if trans_mc.verdict != trans.verdict:
            trans.verdict = INDETERMINATE
            trans.details["note"] = "exact and Monte Carlo verdicts disagree"
        if dil_mc.verdict != dil.verdict:
            dil.verdict = INDETERMINATE
            dil.details["note"] = "exact and Monte Carlo verdicts disagree"
    return WaveletVerdict(translation=trans, dilation=dil)


# -- float-tolerance mode -----------------------------------------------------


@dataclass(frozen=True)
class FloatDilation:
    """Dilation data that cannot be represented exactly (irrational scalars).

    Only Monte Carlo verification is available; membership within ``tol`` of
    a boundary marks the run indeterminate instead of guessing.
    """

    matrix: Tuple[Tuple[float, ...], ...]
    kind: str = "matrix"

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def star_power_f(self, j: int) -> np.ndarray:
        m = np.array(self.matrix, dtype=float).T
        return np.linalg.matrix_power(m, j)


@_timed
def verify_dilation_mc_float(
    region: Region,
    dilation: FloatDilation,
    samples: int = 20_000,
    seed: int = 42,
    tol: float = 1e-9,
) -> TilingReport:
    """Monte Carlo dilation check for float-only dilations.

    Counts are taken at tolerance ``tol``; any sample that comes within the
    tolerance band of a cell boundary makes the verdict indeterminate.
    """
    n = region.dim
    cells = [_CellData(c) for c in region.cells]
    lo, hi = region.bounding_box()
    lo_f = np.array(lo.to_floats())
    width_f = np.array([(hi[i] - lo[i]) for i in range(n)], dtype=float)
    width = float(width_f.max())
    eps = width / 1000

    mat = np.array(dilation.matrix, dtype=float)
    eig = np.abs(np.linalg.eigvals(mat))
    if eig.min() <= 1 + 1e-12:
        raise ParameterError("float dilation must be expansive")
    box_max = float(
        max(max(abs(float(lo[i])), abs(float(hi[i]))) for i in range(n))
    )
    growth = eig.min()
    j_hi = int(math.ceil(math.log(box_max / eps, growth))) + 2
    js = list(range(-j_hi, j_hi + 1))

    rng = random.Random(seed)
    nums = _rand_numerators(rng, samples, n)
    pts = lo_f[None, :] + (nums / float(DENOM)) * width_f[None, :]
    keep = np.abs(pts).max(axis=1) > eps
    pts = pts[keep]

    counts = np.zeros(len(pts), dtype=np.int32)
    marginal = np.zeros(len(pts), dtype=bool)
    for j in js:
        imgs = pts @ dilation.star_power_f(j).T
        for cd in cells:
            m = cd.margins(imgs)
            counts += (m > tol).astype(np.int32)
            marginal |= np.abs(m) <= tol

    offenders: List[Offender] = []
    bad = np.nonzero((counts != 1) & ~marginal)[0]
    for idx in bad[:MAX_OFFENDERS]:
        offenders.append(
            Offender(
                "count",
                Vec.of([Fraction(str(v)) for v in pts[idx]]),
                f"hit by {counts[idx]} dilates",
            )
        )
    if len(bad) > 0:
        verdict = FAIL
    elif marginal.any():
        verdict = INDETERMINATE
    else:
        verdict = PASS
    return TilingReport(
        mode="monte-carlo",
        verdict=verdict,
        offenders=offenders,
        samples_checked=int(len(pts)),
        seed=seed,
        details={
            "tolerance": tol,
            "marginal_samples": int(marginal.sum()),
            "note": "float-tolerance mode",
        },
    )
