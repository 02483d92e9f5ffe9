"""FastAPI service wrapping the construction/verification/export kernel.

Every endpoint is a stateless request/response computation over the exact
geometry types; the CLI is a thin client of this app (in-process by default,
or over the network against `wavekit serve`).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..construct import (
    ConstructionError,
    ConstructionParams,
    build_matrix,
    run_construction,
)
from ..errors import (
    InfiniteRangeError,
    ModeError,
    ParameterError,
    WavekitError,
)
from ..export import export_region
from ..rational import Mat, rat_str, scalar_power_probe
from ..regionio import (
    parse_dilation,
    parse_matrix,
    region_dilation,
    region_from_dict,
    region_to_dict,
)
from ..spectral import expansive_check, min_singular_exceeds, singular_values
from ..verify import (
    FloatDilation,
    verify_dilation_mc_float,
    verify_translation_mc,
    verify_wavelet_set,
    WaveletVerdict,
)
from .models import (
    ConstructRequest,
    ConstructResponse,
    ConstructSummary,
    ExportRequest,
    ExportResponse,
    HealthResponse,
    InfoRequest,
    InfoResponse,
    QAttemptModel,
    RegionModel,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(
    title="wavekit",
    version=__version__,
    description=(
        "Construction and exact verification of simple wavelet sets: finite "
        "unions of convex polytopes tiling space under integer translation "
        "and matrix dilation."
    ),
)


def _bad_request(exc: Exception, extra: dict | None = None) -> HTTPException:
    detail = {"message": str(exc), "error": type(exc).__name__}
    if extra:
        detail.update(extra)
    return HTTPException(status_code=400, detail=detail)


def _as_matrix(value) -> Mat:
    if isinstance(value, str):
        return parse_matrix(value)
    return Mat.of(value)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/construct", response_model=ConstructResponse)
def construct(req: ConstructRequest) -> ConstructResponse:
    try:
        from ..rational import as_rat

        params = ConstructionParams(
            kind=req.type,
            dim=req.dim,
            d=None if req.d is None else as_rat(req.d),
            k_scalar=req.k,
            matrix=None if req.matrix is None else _as_matrix(req.matrix),
            transpose_given=req.transpose_given,
            q=None if req.q in (None, "auto") else int(req.q),
            q_max=req.q_max,
            unimodular=None
            if req.unimodular is None
            else _as_matrix(req.unimodular),
        )
        region, trace, dilation = run_construction(params)
    except ConstructionError as exc:
        raise _bad_request(exc, {"attempts": exc.attempts})
    except WavekitError as exc:
        raise _bad_request(exc)
    summary = ConstructSummary(
        kind=trace.kind,
        dim=region.dim,
        cells=len(region.cells),
        volume=rat_str(region.volume()),
        t=[rat_str(x) for x in trace.t],
        k=None if trace.k is None else [rat_str(x) for x in trace.k],
        q=trace.q,
        d=rat_str(trace.d),
    )
    return ConstructResponse(
        region=RegionModel(**region_to_dict(region)), summary=summary
    )


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    try:
        region = region_from_dict(
            req.region.model_dump(), validate=req.validate_region
        )
        dilation = (
            parse_dilation(req.dilation.model_dump(exclude_none=True))
            if req.dilation is not None
            else region_dilation(region)
        )
        if dilation is None:
            raise ParameterError(
                "no dilation specified: none in region metadata or request"
            )
        if isinstance(dilation, FloatDilation):
            if req.mode != "mc":
                raise ModeError(
                    "dilation data is not exactly rational; only mode=mc applies"
                )
            translation = verify_translation_mc(region, req.samples, req.seed)
            dil_report = verify_dilation_mc_float(
                region,
                dilation,
                samples=min(req.samples, 20_000),
                seed=req.seed,
                tol=req.tol,
            )
            verdict = WaveletVerdict(translation=translation, dilation=dil_report)
        else:
            verdict = verify_wavelet_set(
                region, dilation, mode=req.mode, samples=req.samples, seed=req.seed
            )
    except (ParameterError, ModeError, InfiniteRangeError) as exc:
        raise _bad_request(exc)
    result = verdict.to_dict()
    return VerifyResponse(
        is_wavelet_set=result["is_wavelet_set"],
        exit_code=result["exit_code"],
        translation=result["translation"],
        dilation=result["dilation"],
    )


@app.post("/info", response_model=InfoResponse)
def info(req: InfoRequest) -> InfoResponse:
    try:
        m = _as_matrix(req.matrix)
        a = m.T if req.transpose_given else m
        n = a.n
        from fractions import Fraction

        notes: list[str] = []
        probe = scalar_power_probe(a, req.p_max)
        sv = singular_values(a)
        exceeds = min_singular_exceeds(a, Fraction(n))
        expansive = expansive_check(a)
        hypothesis = None
        if probe is not None:
            hypothesis = probe[1] > 1 and exceeds
            notes.append(
                f"A^{probe[0]} = {rat_str(probe[1])}*I"
                + ("" if probe[1] > 1 else " (not expansive)")
            )
        else:
            notes.append(f"no scalar power A^p = d*I with p <= {req.p_max}")
        notes.append(
            "min singular value "
            + ("exceeds" if exceeds else "does NOT exceed")
            + " sqrt(n); the sufficient hypothesis is "
            + ("satisfied" if hypothesis else "not satisfied")
            + ("" if hypothesis else "; the direct q-search may still succeed")
        )
        q_trace: list[QAttemptModel] = []
        accepted_q = None
        if probe is not None and probe[1] > 1:
            try:
                _, trace, _ = build_matrix(a, q_max=req.q_max)
                accepted_q = trace.q
                q_trace = [QAttemptModel(**at.to_dict()) for at in trace.attempts]
            except ConstructionError as exc:
                q_trace = [QAttemptModel(**at) for at in exc.attempts]
                notes.append(str(exc))
    except WavekitError as exc:
        raise _bad_request(exc)
    return InfoResponse(
        dim=n,
        power=None if probe is None else probe[0],
        scalar=None if probe is None else rat_str(probe[1]),
        expansive=expansive,
        singular_values=list(sv.values),
        singular_radius=sv.radius,
        sqrt_dim=n**0.5,
        min_singular_exceeds_sqrt_dim=exceeds,
        hypothesis_satisfied=hypothesis,
        q_trace=q_trace,
        accepted_q=accepted_q,
        notes=notes,
    )


@app.post("/export", response_model=ExportResponse)
def export(req: ExportRequest) -> ExportResponse:
    try:
        region = region_from_dict(req.region.model_dump())
        content = export_region(
            region,
            req.format,
            slice_spec=req.slice,
            samples=req.samples,
            seed=req.seed,
        )
    except WavekitError as exc:
        raise _bad_request(exc)
    return ExportResponse(filename=f"region.{req.format}", content=content)
