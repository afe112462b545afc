"""FastAPI service wrapping the exact-arithmetic core.

Domain outcomes (a failed certificate, an empty search) are 200 responses
with structured bodies; malformed inputs map to 400/422 and violated exact
identities to 500 with status "internal-inconsistency".
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException

from . import __version__
from .balance import (
    PresetError,
    VortexConfig,
    nondegeneracy,
    random_search,
    residual_norm,
)
from .exact import ExactArithmeticError, Poly, rat_to_str
from .potential import (
    DomainError,
    HalfPlanePoint,
    ReducedInstance,
    alpha0,
    potential_a,
    reduced_residual,
    reduced_residual_elliptic,
)
from .roots import RootFindingError, common_root_free, conj_symmetric, find_roots, is_square_free
from .schemas import (
    CertifyRequest,
    CertifyResponse,
    CheckOutcome,
    ConfigModel,
    GenerateRequest,
    GenerateResponse,
    NondegModel,
    PairRequest,
    PairResponse,
    PotentialRequest,
    PotentialResponse,
    ReducedEntry,
    ReducedRequest,
    ReducedResponse,
    RootSetModel,
    SearchClass,
    SearchRequest,
    SearchResponse,
)
from .sequence import (
    AMSequence,
    InternalInconsistencyError,
    NoPolynomialSolutionError,
    normalized_pair,
    verify_pq,
)

MAX_SEQUENCE_INDEX = 20

app = FastAPI(title="vortexrings", version=__version__)


def _input_error(msg: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"status": "input-error", "message": msg})


def _internal_error(msg: str) -> HTTPException:
    return HTTPException(status_code=500,
                         detail={"status": "internal-inconsistency", "message": msg})


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/version")
def version() -> dict:
    return {"name": "vortexrings", "version": __version__}


@app.post("/generate", response_model=GenerateResponse)
def generate(req: GenerateRequest) -> GenerateResponse:
    if req.n > MAX_SEQUENCE_INDEX:
        raise _input_error(f"n exceeds the configured cap {MAX_SEQUENCE_INDEX}")
    try:
        if req.route == "both":
            seq = AMSequence.generate(req.n, "wronskian")
            other = AMSequence.generate(req.n, "recurrence")
            agree = seq.polys == other.polys
            if not agree:
                raise _internal_error("Wronskian and recurrence routes disagree")
        else:
            seq = AMSequence.generate(req.n, req.route)
            agree = True
    except (InternalInconsistencyError, NoPolynomialSolutionError) as exc:
        raise _internal_error(str(exc))
    return GenerateResponse(
        n=req.n, route=req.route, routes_agree=agree,
        P=seq.poly(req.n).to_strings(),
        polys=[p.to_strings() for p in seq.polys],
        shifts=[rat_to_str(s) for s in seq.shifts],
    )


@app.post("/pair", response_model=PairResponse)
def pair(req: PairRequest) -> PairResponse:
    if req.n + 1 > MAX_SEQUENCE_INDEX:
        raise _input_error(f"n exceeds the configured cap {MAX_SEQUENCE_INDEX - 1}")
    try:
        seq = AMSequence.generate(req.n + 1, "wronskian")
        np_pair = normalized_pair(req.n, seq)
    except InternalInconsistencyError as exc:
        raise _internal_error(str(exc))
    return PairResponse(n=np_pair.n, m=np_pair.m,
                        P=np_pair.p.to_strings(), Q=np_pair.q.to_strings(),
                        shift=rat_to_str(np_pair.shift))


@app.post("/certify", response_model=CertifyResponse)
def certify(req: CertifyRequest) -> CertifyResponse:
    try:
        p = Poly.from_strings(req.pair.P)
        q = Poly.from_strings(req.pair.Q)
    except (ValueError, ZeroDivisionError) as exc:
        raise _input_error(f"unparsable coefficients: {exc}")
    if p.degree != req.pair.m or q.degree != req.pair.n:
        raise _input_error("stated degrees do not match the coefficient lists")
    m, n = req.pair.m, req.pair.n

    checks: dict[str, CheckOutcome] = {}
    res_poly = verify_pq(p, q, m, n)
    checks["pq_identity"] = CheckOutcome(
        passed=res_poly.is_zero,
        detail="bilinear residual is the zero polynomial" if res_poly.is_zero
        else f"bilinear residual has degree {res_poly.degree}")
    sf_p = is_square_free(p)
    sf_q = is_square_free(q)
    checks["square_free_P"] = CheckOutcome(passed=sf_p)
    checks["square_free_Q"] = CheckOutcome(passed=sf_q)
    crf = common_root_free(p, q)
    checks["common_root_free"] = CheckOutcome(passed=crf)

    roots_p_model = roots_q_model = None
    nondeg_model = None
    if sf_p and sf_q:
        try:
            roots_p = find_roots(p, req.root_tol)
            roots_q = find_roots(q, req.root_tol)
        except RootFindingError as exc:
            raise _internal_error(str(exc))
        roots_p_model = RootSetModel(
            roots=[(z.real, z.imag) for z in roots_p.roots],
            residual_bound=roots_p.residual_bound, square_free=True)
        roots_q_model = RootSetModel(
            roots=[(z.real, z.imag) for z in roots_q.roots],
            residual_bound=roots_q.residual_bound, square_free=True)
        sym = conj_symmetric(roots_p) and conj_symmetric(roots_q)
        checks["conjugate_symmetric"] = CheckOutcome(passed=sym)
        cfg = VortexConfig(roots_p.roots, roots_q.roots, req.preset)
        rn = residual_norm(cfg)
        checks["balance_residual"] = CheckOutcome(
            passed=rn < req.residual_tol,
            detail=f"max-norm {rn:.17g} under preset {req.preset}")
        report = nondegeneracy(cfg, req.kernel_tol)
        nondeg_model = NondegModel(**report.to_json())
        checks["nondegenerate"] = CheckOutcome(
            passed=report.kernel_dim == 1,
            detail=f"kernel dimension {report.kernel_dim}")
    else:
        checks["conjugate_symmetric"] = CheckOutcome(
            passed=False, detail="skipped: repeated roots")
        checks["balance_residual"] = CheckOutcome(
            passed=False, detail="skipped: repeated roots")
        checks["nondegenerate"] = CheckOutcome(
            passed=False, detail="skipped: repeated roots")

    return CertifyResponse(
        preset=req.preset,
        tolerances={"root_tol": req.root_tol, "residual_tol": req.residual_tol,
                    "kernel_tol": req.kernel_tol},
        checks=checks,
        passed=all(c.passed for c in checks.values()),
        roots_P=roots_p_model, roots_Q=roots_q_model,
        nondegeneracy=nondeg_model)


@app.post("/search", response_model=SearchResponse)
def search(req: SearchRequest) -> SearchResponse:
    if not req.m > req.n:
        raise _input_error("search requires m > n >= 0")
    found = random_search(req.m, req.n, req.tries, req.seed, req.preset, req.tol)
    classes = []
    for cfg in found:
        report = nondegeneracy(cfg)
        classes.append(SearchClass(
            config=ConfigModel(m=cfg.m, n=cfg.n, preset=cfg.preset,
                               a=[(z.real, z.imag) for z in cfg.a_points],
                               b=[(z.real, z.imag) for z in cfg.b_points]),
            residual_norm=residual_norm(cfg),
            nondegeneracy=NondegModel(**report.to_json())))
    return SearchResponse(m=req.m, n=req.n, tries=req.tries, seed=req.seed,
                          preset=req.preset, tolerances={"tol": req.tol},
                          classes=classes)


@app.post("/potential/grid", response_model=PotentialResponse)
def potential_grid(req: PotentialRequest) -> PotentialResponse:
    try:
        center = HalfPlanePoint(*req.a)
    except DomainError as exc:
        raise _input_error(str(exc))
    if req.x1.start <= 0 or req.x1.stop <= 0:
        raise _input_error("grid must stay in the half plane x1 > 0")

    def linspace(spec):
        if spec.count == 1:
            return [spec.start]
        h = (spec.stop - spec.start) / (spec.count - 1)
        return [spec.start + i * h for i in range(spec.count)]

    rows = []
    for x1 in linspace(req.x1):
        for x2 in linspace(req.x2):
            if x1 == center.x1 and x2 == center.x2:
                continue
            rows.append((x1, x2, potential_a(center, HalfPlanePoint(x1, x2))))

    # Spot-check of the scaling invariance, embedded in the response metadata.
    probe = HalfPlanePoint(center.x1 * 1.1, center.x2 + 0.4 * center.x1)
    lam = 1.7
    scaled = abs(potential_a(HalfPlanePoint(center.x1 * lam, center.x2 * lam),
                             HalfPlanePoint(probe.x1 * lam, probe.x2 * lam))
                 - potential_a(center, probe))
    return PotentialResponse(a=req.a, rows=rows, scaling_check_error=scaled)


@app.post("/reduced", response_model=ReducedResponse)
def reduced(req: ReducedRequest) -> ReducedResponse:
    if req.m == req.n:
        raise _input_error("radial offset undefined for m = n")
    if req.m - req.n != 1:
        raise _input_error("no generated balancing configuration for m - n != 1")
    if req.m + 1 > MAX_SEQUENCE_INDEX:
        raise _input_error(f"m exceeds the configured cap {MAX_SEQUENCE_INDEX - 1}")
    if not req.eps_list:
        raise _input_error("eps_list must be nonempty")
    seq = AMSequence.generate(req.m, "wronskian")
    np_pair = normalized_pair(req.n, seq)
    roots_p = find_roots(np_pair.p)
    roots_q = find_roots(np_pair.q)
    cfg = VortexConfig(roots_p.roots, roots_q.roots, "pq-roots")
    entries = []
    for eps in sorted(req.eps_list, reverse=True):
        try:
            inst = ReducedInstance(cfg, eps, req.c1)
            r1, r2 = reduced_residual(inst)
            e1, e2 = reduced_residual_elliptic(inst)
        except DomainError as exc:
            raise _input_error(str(exc))
        entries.append(ReducedEntry(eps=eps, row_norm1=r1, row_norm2=r2,
                                    row_norm1_elliptic=e1, row_norm2_elliptic=e2))
    return ReducedResponse(m=req.m, n=req.n,
                           alpha0=rat_to_str(Fraction(alpha0(req.m, req.n))),
                           c1=req.c1, entries=entries)
