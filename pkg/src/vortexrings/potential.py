"""Axially symmetric ring potential via complete elliptic integrals, its
near-field asymptotics, and the finite-dimensional reduced-problem residuals
for configurations embedded at the common radial offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .balance import VortexConfig, preset, rescale_ratio

_AGM_EPS = 4e-16  # one-ulp floor: the AGM fixed point oscillates below this
_AGM_MAX_ITER = 60


class DomainError(ValueError):
    pass


def ellip_k(s: float) -> float:
    """Complete elliptic integral of the first kind,
    K(s) = int_0^{pi/2} (1 - s sin^2 t)^{-1/2} dt, by AGM."""
    if not 0.0 <= s < 1.0:
        raise DomainError("K requires 0 <= s < 1")
    a, b = 1.0, math.sqrt(1.0 - s)
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= _AGM_EPS * a:
            break
        a, b = (a + b) / 2.0, math.sqrt(a * b)
    return math.pi / (2.0 * a)


def ellip_e(s: float) -> float:
    """Complete elliptic integral of the second kind,
    E(s) = int_0^{pi/2} (1 - s sin^2 t)^{1/2} dt, by AGM."""
    if not 0.0 <= s <= 1.0:
        raise DomainError("E requires 0 <= s <= 1")
    if s == 1.0:
        return 1.0
    a, b = 1.0, math.sqrt(1.0 - s)
    c_sq_sum = 0.5 * s  # 2^{-1} c_0^2 with c_0^2 = s
    power = 1.0
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= _AGM_EPS * a:
            break
        c = (a - b) / 2.0
        a, b = (a + b) / 2.0, math.sqrt(a * b)
        power *= 2.0
        c_sq_sum += power / 2.0 * c * c
    k = math.pi / (2.0 * a)
    return k * (1.0 - c_sq_sum)


@dataclass(frozen=True)
class HalfPlanePoint:
    """Point of the half plane: distance to the axis (> 0) and axial coordinate."""

    x1: float
    x2: float

    def __post_init__(self):
        if not self.x1 > 0:
            raise DomainError("half-plane point requires x1 > 0")


def potential_a(a: HalfPlanePoint, x: HalfPlanePoint) -> float:
    """Stream-function potential of a ring centered at a, evaluated at x:

        sqrt(a1/x1) (1/kappa) [(2 - kappa^2) K(kappa^2) - 2 E(kappa^2)],
        kappa^2 = 4 a1 x1 / (x1^2 + a1^2 + (x2 - a2)^2 + 2 a1 x1).

    Logarithmically divergent as x -> a; that point itself is rejected.
    """
    if a.x1 == x.x1 and a.x2 == x.x2:
        raise DomainError("potential is singular at the ring center")
    k2 = 4.0 * a.x1 * x.x1 / (x.x1 ** 2 + a.x1 ** 2 + (x.x2 - a.x2) ** 2
                              + 2.0 * a.x1 * x.x1)
    kappa = math.sqrt(k2)
    return math.sqrt(a.x1 / x.x1) / kappa * ((2.0 - k2) * ellip_k(k2) - 2.0 * ellip_e(k2))


def potential_d1(a: HalfPlanePoint, x: HalfPlanePoint, step: float) -> float:
    """d/dx1 of the potential by central differences."""
    return (potential_a(a, HalfPlanePoint(x.x1 + step, x.x2))
            - potential_a(a, HalfPlanePoint(x.x1 - step, x.x2))) / (2.0 * step)


def potential_d2(a: HalfPlanePoint, x: HalfPlanePoint, step: float) -> float:
    """d/dx2 of the potential by central differences."""
    return (potential_a(a, HalfPlanePoint(x.x1, x.x2 + step))
            - potential_a(a, HalfPlanePoint(x.x1, x.x2 - step))) / (2.0 * step)


@dataclass(frozen=True)
class NearFieldRow:
    r: float
    value: float
    asymptote: float
    error: float
    error_ratio: float


def near_field_report(a: HalfPlanePoint, r_list: list[float]) -> list[NearFieldRow]:
    """Compare the potential against its near-field law ln(a1/r) + 3 ln 2 - 2.

    The error column must shrink like (r/a1)|ln(r/a1)|; the ratio column
    divides by that scale and must stay bounded as r decreases.
    """
    rows = []
    for r in r_list:
        if not 0 < r < a.x1:
            raise DomainError("near-field radii must satisfy 0 < r < a1")
        val = potential_a(a, HalfPlanePoint(a.x1 + r, a.x2))
        asym = math.log(a.x1 / r) + 3.0 * math.log(2.0) - 2.0
        err = val - asym
        scale = (r / a.x1) * abs(math.log(r / a.x1))
        rows.append(NearFieldRow(r, val, asym, err, err / scale))
    return rows


def radial_derivative(a: HalfPlanePoint, r: float, step: float | None = None) -> float:
    """d/dr of the potential at distance r from the center along x1."""
    h = step if step is not None else r * 1e-4
    return (potential_a(a, HalfPlanePoint(a.x1 + r + h, a.x2))
            - potential_a(a, HalfPlanePoint(a.x1 + r - h, a.x2))) / (2.0 * h)


def alpha0(m: int, n: int) -> Fraction:
    """Common radial offset 2(m+n)/(m-n) of the embedded ring cluster."""
    if m == n:
        raise DomainError("radial offset undefined for m = n")
    return Fraction(2 * (m + n), m - n)


@dataclass(frozen=True)
class ReducedInstance:
    """A balanced configuration embedded into the half plane at scale eps."""

    cfg: VortexConfig
    eps: float
    c1: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise DomainError("eps must lie in (0, 1)")


def _embed(inst: ReducedInstance) -> tuple[list[HalfPlanePoint], list[int], float]:
    """Embedded points p~_j = alpha0 + lambda z_j / |ln eps|.

    The configuration is first rescaled (via the exact homogeneity of the
    balancing system) to the convention whose right-hand sides are
    (-n/(m+n), -m/(m+n)); this is the scaling under which the leading
    logarithmic terms of the reduced rows cancel.
    """
    cfg = inst.cfg
    m, n = cfg.m, cfg.n
    embed_rhs = preset("alpha0-form", m, n)
    lam = -float(rescale_ratio(preset(cfg.preset, m, n), embed_rhs))
    a0 = float(alpha0(m, n))
    big_l = abs(math.log(inst.eps))
    pts = []
    for z in cfg.points:
        w = lam * z
        p1 = a0 + w.real / big_l
        if p1 <= 0:
            raise DomainError("embedded configuration leaves the half plane")
        pts.append(HalfPlanePoint(p1, w.imag / big_l))
    return pts, cfg.taus, big_l


def reduced_residual(inst: ReducedInstance) -> tuple[float, float]:
    """Leading-log reduced-problem residuals (rowNorm1, rowNorm2).

    rowNorm1 is the max over rings of the first reduced row, normalized by
    |ln eps|; rowNorm2 is the max over rings of the second row.
    """
    pts, taus, big_l = _embed(inst)
    ln_eps = -big_l
    r1 = []
    r2 = []
    for j, pj in enumerate(pts):
        s1 = 0.0
        s2 = 0.0
        for l, pl in enumerate(pts):
            if l == j:
                continue
            d1 = pj.x1 - pl.x1
            d2 = pj.x2 - pl.x2
            dd = d1 * d1 + d2 * d2
            s1 += taus[j] * taus[l] * d1 / dd
            s2 += taus[j] * taus[l] * d2 / dd
        r1.append(abs(taus[j] * big_l + 2.0 * ln_eps / pj.x1 + 2.0 * s1))
        r2.append(abs(2.0 * s2))
    return max(r1) / big_l, max(r2)


def reduced_residual_elliptic(inst: ReducedInstance) -> tuple[float, float]:
    """Reduced residuals with the exact elliptic-integral potential and its
    central-difference derivatives in place of the leading-log kernel,
    including the profile-constant term -2 c1 / p~_{j,1}."""
    pts, taus, big_l = _embed(inst)
    ln_eps = -big_l
    sep = min(math.hypot(pts[i].x1 - pts[j].x1, pts[i].x2 - pts[j].x2)
              for i in range(len(pts)) for j in range(i + 1, len(pts)))
    step = 1e-6 * sep
    r1 = []
    r2 = []
    for j, pj in enumerate(pts):
        s_a = 0.0
        s_d1 = 0.0
        s_d2 = 0.0
        for l, pl in enumerate(pts):
            if l == j:
                continue
            tt = taus[j] * taus[l]
            s_a += tt * potential_a(pl, pj)
            s_d1 += tt * potential_d1(pl, pj, step)
            s_d2 += tt * potential_d2(pl, pj, step)
        row1 = (taus[j] * big_l + 2.0 * ln_eps / pj.x1
                - 2.0 * math.log(pj.x1) / pj.x1 - 2.0 * inst.c1 / pj.x1
                - 2.0 * s_a / pj.x1 - 2.0 * s_d1)
        r1.append(abs(row1))
        r2.append(abs(2.0 * s_d2))
    return max(r1) / big_l, max(r2)
