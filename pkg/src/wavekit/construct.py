"""Constructions of candidate wavelet sets.

Three families are built here, all sharing the same skeleton: a notched
parallelotope that tiles under integer translation, optionally modified by
carving out a parallelotope around the origin and re-attaching it as an
integer-translated satellite so that the dilation tiling closes up.

* ``build_negative_scalar`` -- a translated notched parallelotope alone,
  which tiles under dilation by -d.
* ``build_positive_scalar`` -- notch carve-out plus satellite for scalar
  dilation d >= 2 with an integer offset 1 <= k < d along the diagonal.
* ``build_matrix`` -- the same surgery for a matrix dilation with an exact
  scalar power A^p = d I, searching the cube-refinement exponent q until the
  carved parallelotope certifiably fits inside the notched one.

All arithmetic is exact; the certificates recorded in the construction trace
are decided by rational geometry, never floating point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ConstructionError, ParameterError, UnsupportedMatrixError
from .polytopes import (
    ConvexCell,
    Lattice,
    Parallelotope,
    Region,
    regions_interior_disjoint,
    subtract_convex,
)
from .rational import (
    DilationSpec,
    Mat,
    Rat,
    RatLike,
    Vec,
    as_rat,
    check_dimension,
    cyclic_matrix,
    nearest_integer_vector,
    rat_str,
    scalar_power_probe,
)

DEFAULT_Q_MAX = 12
DEFAULT_P_MAX = 12


def _q_max_default() -> int:
    env = os.environ.get("WAVEKIT_QMAX")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParameterError(f"WAVEKIT_QMAX must be an integer, got {env!r}")
    return DEFAULT_Q_MAX


def _check_alpha(alpha: Rat) -> Rat:
    if not (0 < alpha < 1):
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


@dataclass(frozen=True)
class QAttempt:
    """Certificates for one candidate refinement exponent q."""

    q: int
    k: Vec
    t: Vec
    hole_in_outer: bool
    hole_clear_of_notch: bool
    satellite_clear: bool

    @property
    def accepted(self) -> bool:
        return self.hole_in_outer and self.hole_clear_of_notch and self.satellite_clear

    @property
    def reason(self) -> str:
        if self.accepted:
            return "accepted"
        bits = []
        if not self.hole_in_outer:
            bits.append("carved parallelotope escapes the outer parallelotope")
        if not self.hole_clear_of_notch:
            bits.append("carved parallelotope overlaps the notch")
        if not self.satellite_clear:
            bits.append("satellite overlaps the notched parallelotope")
        return "; ".join(bits)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k": [rat_str(x) for x in self.k],
            "t": [rat_str(x) for x in self.t],
            "hole_in_outer": self.hole_in_outer,
            "hole_clear_of_notch": self.hole_clear_of_notch,
            "satellite_clear": self.satellite_clear,
            "accepted": self.accepted,
            "reason": self.reason,
        }


@dataclass
class ConstructionTrace:
    """Reproducible audit trail of a construction."""

    kind: str  # neg-scalar | scalar | matrix
    dim: int
    d: Rat
    p: int
    q: Optional[int]
    alpha: Rat
    k: Optional[Vec]
    t: Vec
    outer: Parallelotope
    notch: Parallelotope
    hole: Optional[Parallelotope]
    satellite_index: Optional[int]
    cell_count: int
    attempts: List[QAttempt] = field(default_factory=list)

    def satellite(self) -> Optional[Parallelotope]:
        if self.hole is None or self.k is None:
            return None
        return self.hole.translate(self.k)

    def to_dict(self) -> dict:
        def vec(v):
            return None if v is None else [rat_str(x) for x in v]

        def par(p):
            if p is None:
                return None
            return {
                "base": vec(p.base),
                "generators": [[rat_str(x) for x in row] for row in p.generators.rows],
            }

        return {
            "kind": self.kind,
            "dim": self.dim,
            "d": rat_str(self.d),
            "p": self.p,
            "q": self.q,
            "alpha": rat_str(self.alpha),
            "k": vec(self.k),
            "t": vec(self.t),
            "outer": par(self.outer),
            "notch": par(self.notch),
            "hole": par(self.hole),
            "satellite_index": self.satellite_index,
            "cell_count": self.cell_count,
            "attempts": [a.to_dict() for a in self.attempts],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConstructionTrace":
        def vec(v):
            return None if v is None else Vec.of(v)

        def par(p):
            if p is None:
                return None
            return Parallelotope(Vec.of(p["base"]), Mat.of(p["generators"]))

        attempts = [
            QAttempt(
                q=a["q"],
                k=Vec.of(a["k"]),
                t=Vec.of(a["t"]),
                hole_in_outer=a["hole_in_outer"],
                hole_clear_of_notch=a["hole_clear_of_notch"],
                satellite_clear=a["satellite_clear"],
            )
            for a in data.get("attempts", [])
        ]
        return cls(
            kind=data["kind"],
            dim=data["dim"],
            d=as_rat(data["d"]),
            p=data["p"],
            q=data.get("q"),
            alpha=as_rat(data["alpha"]),
            k=vec(data.get("k")),
            t=Vec.of(data["t"]),
            outer=par(data["outer"]),
            notch=par(data["notch"]),
            hole=par(data.get("hole")),
            satellite_index=data.get("satellite_index"),
            cell_count=data["cell_count"],
            attempts=attempts,
        )


@dataclass(frozen=True)
class ConstructionParams:
    """Validated inputs for the construction dispatcher."""

    kind: str  # neg-scalar | scalar | matrix
    dim: Optional[int] = None
    d: Optional[Rat] = None
    k_scalar: int = 1
    matrix: Optional[Mat] = None
    transpose_given: bool = False
    q: Optional[int] = None  # None means "auto"
    q_max: Optional[int] = None
    unimodular: Optional[Mat] = None

    def __post_init__(self):
        if self.kind not in ("neg-scalar", "scalar", "matrix"):
            raise ParameterError(f"unknown construction kind {self.kind!r}")
        if self.kind == "matrix":
            if self.matrix is None:
                raise ParameterError("matrix construction requires a matrix")
        else:
            if self.dim is None or self.d is None:
                raise ParameterError(f"{self.kind} construction requires dim and d")


# -- translation-tiling building blocks --------------------------------------


def stein_lattice(n: int, alpha: RatLike) -> Lattice:
    """Lattice spanned by the columns of I - alpha*C."""
    check_dimension(n)
    alpha = _check_alpha(as_rat(alpha))
    return Lattice(Mat.identity(n) - alpha * cyclic_matrix(n))


def notched_cube_region(n: int, alpha: RatLike) -> Region:
    """Unit cube minus the corner cube of side alpha at the far vertex.

    Decomposes into exactly n disjoint boxes of total volume 1 - alpha^n;
    tiles space under the lattice spanned by I - alpha*C.
    """
    check_dimension(n)
    alpha = _check_alpha(as_rat(alpha))
    cube = ConvexCell.from_box(Vec.zero(n), Vec.ones(n))
    corner = ConvexCell.from_box((1 - alpha) * Vec.ones(n), Vec.ones(n))
    cells = subtract_convex(cube, corner)
    frame = Parallelotope(Vec.zero(n), Mat.identity(n))
    meta = {
        "construction": {
            "kind": "notched-cube",
            "dim": n,
            "alpha": rat_str(alpha),
        }
    }
    return Region(cells, frame, meta)


def w_vector(n: int, alpha: RatLike) -> Vec:
    """The skew vector (1, alpha, ..., alpha^(n-1)) / (1 - alpha^n)."""
    check_dimension(n)
    alpha = _check_alpha(as_rat(alpha))
    scale = 1 / (1 - alpha**n)
    return Vec(tuple(scale * alpha**i for i in range(n)))


def notched_parallelotope_region(n: int, alpha: RatLike) -> Region:
    """Skewed notched cube that tiles space under integer translation.

    The image of the notched cube under (I - alpha*C)^-1: n cells of total
    volume exactly 1, framed by the parallelotope spanned by the w-vector
    and its cyclic shifts.
    """
    check_dimension(n)
    alpha = _check_alpha(as_rat(alpha))
    skew = (Mat.identity(n) - alpha * cyclic_matrix(n)).inverse()
    base = notched_cube_region(n, alpha)
    cells = [c.affine_image(skew) for c in base.cells]
    frame = Parallelotope(Vec.zero(n), skew)
    meta = {
        "construction": {
            "kind": "notched-parallelotope",
            "dim": n,
            "alpha": rat_str(alpha),
        }
    }
    return Region(cells, frame, meta)


def _notch_parallelotope(outer: Parallelotope, alpha: Rat) -> Parallelotope:
    """The removed corner piece of a notched parallelotope built on ``outer``.

    For frames built from w-vectors the diagonal sum is 1/(1-alpha), so the
    notch sits at base + 1 along the diagonal with generators scaled by alpha.
    """
    n = outer.dim
    return Parallelotope(outer.base + Vec.ones(n), alpha * outer.generators)


# -- wavelet-set constructions ------------------------------------------------


def build_negative_scalar(
    n: int, d: RatLike
) -> Tuple[Region, ConstructionTrace, DilationSpec]:
    """Wavelet set for dilation by -d: a translated notched parallelotope.

    Uses alpha = 1/d and diagonal translation t = -d^2/(d^2-1); the dilate of
    the outer parallelotope by -1/d then exactly fills the notch.
    """
    check_dimension(n)
    d = as_rat(d)
    if d <= 1:
        raise ParameterError(f"negative-scalar construction requires d > 1, got {d}")
    alpha = 1 / d
    t = -d * d / (d * d - 1)
    tvec = t * Vec.ones(n)
    region = notched_parallelotope_region(n, alpha).translate(tvec)
    outer = region.frame
    notch = _notch_parallelotope(outer, alpha)
    dilation = DilationSpec.for_negative_scalar(d, n)
    trace = ConstructionTrace(
        kind="neg-scalar",
        dim=n,
        d=d,
        p=dilation.power,
        q=None,
        alpha=alpha,
        k=None,
        t=tvec,
        outer=outer,
        notch=notch,
        hole=None,
        satellite_index=None,
        cell_count=len(region.cells),
    )
    meta = {"construction": trace.to_dict(), "dilation": dilation_to_dict(dilation)}
    return Region(region.cells, outer, meta), trace, dilation


def build_positive_scalar(
    n: int, d: RatLike, k: int = 1
) -> Tuple[Region, ConstructionTrace, DilationSpec]:
    """Wavelet set for scalar dilation d >= 2 with satellite offset k.

    alpha = 1/d^2 and t = d(k-d)/(d^2-1): the outer parallelotope scaled by
    1/d (which contains the origin) is carved out of the notched
    parallelotope and re-attached translated by k along the diagonal.
    """
    check_dimension(n)
    d = as_rat(d)
    if d < 2:
        raise ParameterError(f"positive-scalar construction requires d >= 2, got {d}")
    if not isinstance(k, int) or not (1 <= k < d):
        raise ParameterError(f"offset k must be an integer with 1 <= k < d, got {k}")
    alpha = 1 / (d * d)
    t = d * (k - d) / (d * d - 1)
    tvec = t * Vec.ones(n)
    kvec = k * Vec.ones(n)
    notched = notched_parallelotope_region(n, alpha).translate(tvec)
    outer = notched.frame
    notch = _notch_parallelotope(outer, alpha)
    hole = outer.scale(1 / d)
    dilation = DilationSpec.for_scalar(d, n)
    region, trace = _carve_and_attach(
        kind="scalar",
        notched=notched,
        outer=outer,
        notch=notch,
        hole=hole,
        kvec=kvec,
        tvec=tvec,
        d=d,
        p=1,
        q=2,
        alpha=alpha,
        dilation=dilation,
        strict=True,
    )
    return region, trace, dilation


def build_matrix(
    A: Mat,
    q: Optional[int] = None,
    q_max: Optional[int] = None,
    p_max: int = DEFAULT_P_MAX,
    transpose_given: bool = False,
) -> Tuple[Region, ConstructionTrace, DilationSpec]:
    """Wavelet set for dilation by a matrix with an exact scalar power.

    Searches q = 1, 2, ... (or tests the given q alone): for each candidate,
    k is the integer vector nearest to A*^-1((d^q/2) 1), t solves
    (d^q - 1) t = A* k - d^q 1, and the candidate is accepted when the
    carved parallelotope A*^-1(tau_t P) certifiably sits inside the notched
    parallelotope with its satellite clear of it.
    """
    if transpose_given:
        A = A.T
    n = A.n
    check_dimension(n)
    probe = scalar_power_probe(A, p_max)
    if probe is None:
        raise UnsupportedMatrixError(
            f"no scalar power A^p = d*I with p <= {p_max}; construction unsupported"
        )
    p, d = probe
    if d <= 1:
        raise ParameterError(f"A^{p} = {d}*I is not expansive; need d > 1")
    dilation = DilationSpec.for_matrix(A, p_max)
    a_star = dilation.transpose
    a_star_inv = a_star.inverse()
    ones = Vec.ones(n)

    if q is not None and q < 1:
        raise ParameterError("q must be a positive integer")
    candidates = [q] if q is not None else list(range(1, (q_max or _q_max_default()) + 1))

    attempts: List[QAttempt] = []
    for q_try in candidates:
        dq = d**q_try
        alpha = 1 / dq
        kvec = nearest_integer_vector(a_star_inv @ ((dq / 2) * ones))
        tvec = (1 / (dq - 1)) * ((a_star @ kvec) - dq * ones)
        notched = notched_parallelotope_region(n, alpha).translate(tvec)
        outer = notched.frame
        notch = _notch_parallelotope(outer, alpha)
        hole = outer.image(a_star_inv)
        try:
            region, trace = _carve_and_attach(
                kind="matrix",
                notched=notched,
                outer=outer,
                notch=notch,
                hole=hole,
                kvec=kvec,
                tvec=tvec,
                d=d,
                p=p,
                q=q_try,
                alpha=alpha,
                dilation=dilation,
                strict=False,
            )
        except _CertificateFailure as fail:
            attempts.append(fail.attempt)
            continue
        trace.attempts = attempts + list(trace.attempts)
        region.metadata["construction"] = trace.to_dict()
        return region, trace, dilation

    raise ConstructionError(
        "no refinement exponent q in "
        + (f"{{{q}}}" if q is not None else f"1..{candidates[-1]}")
        + " yields the containment certificates: "
        + "; ".join(f"q={a.q}: {a.reason}" for a in attempts),
        attempts=[a.to_dict() for a in attempts],
    )


class _CertificateFailure(Exception):
    def __init__(self, attempt: QAttempt):
        self.attempt = attempt


def _carve_and_attach(
    kind: str,
    notched: Region,
    outer: Parallelotope,
    notch: Parallelotope,
    hole: Parallelotope,
    kvec: Vec,
    tvec: Vec,
    d: Rat,
    p: int,
    q: int,
    alpha: Rat,
    dilation: DilationSpec,
    strict: bool,
) -> Tuple[Region, ConstructionTrace]:
    """Carve the hole out of the notched parallelotope and attach the satellite.

    ``strict`` marks constructions whose certificates are guaranteed by the
    parameter preconditions: a failure there is an internal error rather
    than a rejected search candidate.
    """
    hole_cell = hole.as_cell()
    notch_cell = notch.as_cell()
    in_outer = all(outer.contains(c) for c in hole.corners())
    clear_of_notch = hole_cell.intersect(notch_cell) is None
    satellite = hole.translate(kvec)
    sat_cell = satellite.as_cell()
    sat_clear, _ = regions_interior_disjoint(Region([sat_cell]), notched)
    attempt = QAttempt(
        q=q,
        k=kvec,
        t=tvec,
        hole_in_outer=in_outer,
        hole_clear_of_notch=clear_of_notch,
        satellite_clear=sat_clear,
    )
    if not attempt.accepted:
        if strict:
            raise ConstructionError(
                "containment certificate failed for parameters the theory "
                f"guarantees ({attempt.reason}); this is an implementation bug"
            )
        raise _CertificateFailure(attempt)
    carved = notched.subtract_convex(hole_cell)
    cells = list(carved.cells) + [sat_cell]
    trace = ConstructionTrace(
        kind=kind,
        dim=notched.dim,
        d=d,
        p=p,
        q=q,
        alpha=alpha,
        k=kvec,
        t=tvec,
        outer=outer,
        notch=notch,
        hole=hole,
        satellite_index=len(carved.cells),
        cell_count=len(cells),
        attempts=[attempt],
    )
    meta = {"construction": trace.to_dict(), "dilation": dilation_to_dict(dilation)}
    return Region(cells, outer, meta), trace


def apply_unimodular(region: Region, s: Mat) -> Region:
    """Transform a scalar-dilation wavelet set by an integer matrix of det +-1.

    Integer unimodular maps send the integer lattice onto itself and commute
    with scalar dilations, so the wavelet-set property is preserved.  Matrix
    dilations are rejected: the corresponding statement is not available.
    """
    if not s.is_integral():
        raise ParameterError("unimodular transform must have integer entries")
    if abs(s.det()) != 1:
        raise ParameterError(f"matrix has determinant {s.det()}, need +-1")
    dil = region.metadata.get("dilation")
    if dil is not None and dil.get("kind") == "matrix":
        raise UnsupportedMatrixError(
            "unimodular variants are only defined for scalar dilations"
        )
    out = region.affine_image(s)
    construction = dict(out.metadata.get("construction", {}))
    construction["unimodular"] = [[rat_str(x) for x in row] for row in s.rows]
    out.metadata["construction"] = construction
    return out


def run_construction(
    params: ConstructionParams,
) -> Tuple[Region, Optional[ConstructionTrace], DilationSpec]:
    """Dispatch a validated parameter set to the matching builder."""
    if params.kind == "neg-scalar":
        region, trace, dilation = build_negative_scalar(params.dim, params.d)
    elif params.kind == "scalar":
        region, trace, dilation = build_positive_scalar(
            params.dim, params.d, params.k_scalar
        )
    else:
        region, trace, dilation = build_matrix(
            params.matrix,
            q=params.q,
            q_max=params.q_max,
            transpose_given=params.transpose_given,
        )
    if params.unimodular is not None:
        region = apply_unimodular(region, params.unimodular)
    return region, trace, dilation


# -- dilation (de)serialization ----------------------------------------------


def dilation_to_dict(spec: DilationSpec) -> dict:
    return {
        "kind": spec.kind,
        "matrix": [[rat_str(x) for x in row] for row in spec.matrix.rows],
        "power": spec.power,
        "scalar": rat_str(spec.scalar),
    }


def dilation_from_dict(data: dict) -> DilationSpec:
    return DilationSpec(
        matrix=Mat.of(data["matrix"]),
        power=int(data["power"]),
        scalar=as_rat(data["scalar"]),
        kind=data["kind"],
    )
