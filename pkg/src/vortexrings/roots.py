"""Complex root extraction for the generating polynomials.

Square-freeness is established exactly first (gcd over the rationals), which
removes the ill-conditioned multiple-root case; the roots themselves are then
found in double precision by Aberth-Ehrlich simultaneous iteration.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .exact import Poly, common_root_free, is_square_free

__all__ = ["RootSet", "find_roots", "conj_symmetric", "is_square_free",
           "common_root_free", "RootFindingError"]

DEFAULT_TOL = 1e-12
MAX_ITER = 500


class RootFindingError(Exception):
    pass


@dataclass(frozen=True)
class RootSet:
    """Roots of a square-free polynomial with a scaled residual bound."""

    roots: tuple[complex, ...]
    residual_bound: float
    square_free: bool = True

    def to_json(self) -> dict:
        return {
            "roots": [[z.real, z.imag] for z in self.roots],
            "residual_bound": self.residual_bound,
            "square_free": self.square_free,
        }

    def to_csv_rows(self, label: str = "") -> list[tuple[float, float, str]]:
        return [(z.real, z.imag, label) for z in self.roots]


def _horner(coeffs: list[complex], z: complex) -> tuple[complex, complex]:
    """Value and derivative by Horner; coeffs ascending."""
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _scaled_residual(coeffs: list[complex], lead: float, deg: int, z: complex) -> float:
    p, _ = _horner(coeffs, z)
    return abs(p) / (lead * max(1.0, abs(z)) ** deg)


def find_roots(p: Poly, tol: float = DEFAULT_TOL) -> RootSet:
    """All roots of a square-free polynomial by simultaneous iteration.

    Starts from a circle of radius given by the Cauchy bound; converged roots
    with tiny imaginary part are snapped to the real axis and the remaining
    ones are paired into exact conjugates (the coefficient data is real).
    """
    if p.is_zero or p.degree < 1:
        raise RootFindingError("degree must be >= 1")
    if not is_square_free(p):
        raise RootFindingError("polynomial is not square-free")
    deg = p.degree
    coeffs = [complex(c) for c in p.coeffs]
    lead = abs(coeffs[-1])
    cauchy = 1.0 + max(abs(c) for c in coeffs[:-1]) / lead

    # Asymmetric start angles avoid stalling on conjugate-symmetric inputs.
    z = [cauchy * cmath.exp(2j * cmath.pi * (k + 0.25) / deg + 0.35j)
         for k in range(deg)]

    target = tol * 1e-2
    for _ in range(MAX_ITER):
        worst = 0.0
        for k in range(deg):
            pv, dv = _horner(coeffs, z[k])
            worst = max(worst, abs(pv) / (lead * max(1.0, abs(z[k])) ** deg))
            if pv == 0:
                continue
            w = pv / dv if dv != 0 else pv
            s = sum(1.0 / (z[k] - z[j]) for j in range(deg) if j != k)
            denom = 1.0 - w * s
            z[k] -= w / denom if denom != 0 else w
        if worst <= target:
            break

    z = _pair_conjugates(z, tol)
    bound = max(_scaled_residual(coeffs, lead, deg, zk) for zk in z)
    if bound > tol:
        raise RootFindingError(
            f"no convergence below tol={tol:g}; best residual bound {bound:g}")
    return RootSet(tuple(z), bound, True)


def _pair_conjugates(roots: list[complex], tol: float) -> list[complex]:
    """Snap near-real roots to the axis and average conjugate pairs."""
    real = []
    upper = []
    lower = []
    for z in roots:
        if abs(z.imag) < tol * (1.0 + abs(z)):
            real.append(complex(z.real, 0.0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    out = real[:]
    lower_left = lower[:]
    for u in upper:
        if lower_left:
            j = min(range(len(lower_left)), key=lambda i: abs(u - lower_left[i].conjugate()))
            v = lower_left.pop(j)
            avg = (u + v.conjugate()) / 2
            out.extend([avg, avg.conjugate()])
        else:
            out.append(u)
    out.extend(lower_left)
    return out


def conj_symmetric(rs: RootSet, tol: float = 1e-9) -> bool:
    """True iff the root multiset is conjugation-invariant within tol."""
    remaining = list(rs.roots)
    for z in rs.roots:
        zc = z.conjugate()
        j = min(range(len(remaining)), key=lambda i: abs(remaining[i] - zc), default=None)
        if j is None or abs(remaining[j] - zc) > tol * (1.0 + abs(z)):
            return False
        remaining.pop(j)
    return True
