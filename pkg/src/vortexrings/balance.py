"""The balancing system for ring positions: residual evaluation, analytic
Jacobian, nondegeneracy certification, damped Newton solving and seeded
random search.

Point ordering is always a-points (positive orientation) first, then
b-points.  For every equation index k the left-hand side is

    F_k = sum_{l != k} tau_l / (p_k - p_l),

which reproduces the a-rows and b-rows of the balancing system verbatim.
The right-hand side is preset data: the same root configuration balances
(-n/2, -m/2) directly and (-n, -m) after halving, related by the exact
homogeneity F(lambda X) = F(X) / lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

MIN_SEPARATION = 1e-9
# any genuine solution has scale set by the rhs; far larger diameters mean
# the iteration is escaping towards the zero-residual point at infinity
MAX_DIAMETER = 1e6


class CoincidentPointsError(Exception):
    pass


class PresetError(Exception):
    pass


@dataclass(frozen=True)
class RhsPreset:
    """Right-hand side of every a-equation and every b-equation."""

    name: str
    rhs_a: Fraction
    rhs_b: Fraction


def preset(name: str, m: int, n: int) -> RhsPreset:
    """Built-in right-hand-side conventions for given ring counts."""
    if name == "paper-balance":
        return RhsPreset(name, Fraction(-n), Fraction(-m))
    if name == "pq-roots":
        return RhsPreset(name, Fraction(-n, 2), Fraction(-m, 2))
    if name == "alpha0-form":
        return RhsPreset(name, Fraction(n, m + n), Fraction(m, m + n))
    raise PresetError(f"unknown preset {name!r}")


PRESET_NAMES = ("paper-balance", "pq-roots", "alpha0-form")


@dataclass(frozen=True)
class VortexConfig:
    """Positions of m positively and n negatively oriented rings."""

    a_points: tuple[complex, ...]
    b_points: tuple[complex, ...]
    preset: str = "pq-roots"

    @property
    def m(self) -> int:
        return len(self.a_points)

    @property
    def n(self) -> int:
        return len(self.b_points)

    @property
    def points(self) -> list[complex]:
        return list(self.a_points) + list(self.b_points)

    @property
    def taus(self) -> list[int]:
        return [1] * self.m + [-1] * self.n

    def min_separation(self) -> float:
        pts = self.points
        if len(pts) < 2:
            return float("inf")
        return min(abs(pts[i] - pts[j])
                   for i in range(len(pts)) for j in range(i + 1, len(pts)))

    def with_points(self, points: list[complex]) -> "VortexConfig":
        return VortexConfig(tuple(points[:self.m]), tuple(points[self.m:]), self.preset)

    def translated(self, c: complex) -> "VortexConfig":
        return self.with_points([p + c for p in self.points])

    def centered(self) -> "VortexConfig":
        pts = self.points
        return self.translated(-sum(pts) / len(pts))

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "preset": self.preset,
            "a": [[z.real, z.imag] for z in self.a_points],
            "b": [[z.real, z.imag] for z in self.b_points],
        }

    @staticmethod
    def from_json(doc: dict) -> "VortexConfig":
        a = tuple(complex(re, im) for re, im in doc["a"])
        b = tuple(complex(re, im) for re, im in doc["b"])
        return VortexConfig(a, b, doc.get("preset", "pq-roots"))


def _check_separated(cfg: VortexConfig) -> None:
    if cfg.min_separation() < MIN_SEPARATION:
        raise CoincidentPointsError("configuration has coincident points")


def lhs(cfg: VortexConfig) -> list[complex]:
    """Left-hand sides F_1..F_{m+n} of the balancing system."""
    _check_separated(cfg)
    pts = cfg.points
    taus = cfg.taus
    out = []
    for k in range(len(pts)):
        out.append(sum(taus[l] / (pts[k] - pts[l])
                       for l in range(len(pts)) if l != k))
    return out


def residual(cfg: VortexConfig) -> list[complex]:
    """F_k minus the preset right-hand side, a-equations first."""
    rhs = preset(cfg.preset, cfg.m, cfg.n)
    vals = lhs(cfg)
    out = []
    for k, v in enumerate(vals):
        target = rhs.rhs_a if k < cfg.m else rhs.rhs_b
        out.append(v - complex(target))
    return out


def residual_norm(cfg: VortexConfig) -> float:
    return max(abs(r) for r in residual(cfg))


def rescale_ratio(from_preset: RhsPreset, to_preset: RhsPreset) -> Fraction:
    """Exact lambda with F(lambda X) = rhs_to whenever F(X) = rhs_from."""
    ratios = []
    for f, t in ((from_preset.rhs_a, to_preset.rhs_a),
                 (from_preset.rhs_b, to_preset.rhs_b)):
        if t == 0 and f == 0:
            continue
        if t == 0 or f == 0:
            raise PresetError("presets with non-proportional right-hand sides")
        ratios.append(f / t)
    if not ratios:
        raise PresetError("both presets are identically zero")
    if len(ratios) == 2 and ratios[0] != ratios[1]:
        raise PresetError("presets with non-proportional right-hand sides")
    return ratios[0]


def rescale(cfg: VortexConfig, to: str) -> VortexConfig:
    """Convert a balanced configuration between right-hand-side conventions
    using the homogeneity of the system."""
    lam = float(rescale_ratio(preset(cfg.preset, cfg.m, cfg.n),
                              preset(to, cfg.m, cfg.n)))
    return VortexConfig(tuple(z * lam for z in cfg.a_points),
                        tuple(z * lam for z in cfg.b_points), to)


def jacobian(cfg: VortexConfig) -> np.ndarray:
    """Analytic complex Jacobian dF; entry (k, l) is dF_k / d(point_l)."""
    _check_separated(cfg)
    pts = cfg.points
    taus = cfg.taus
    size = len(pts)
    jac = np.zeros((size, size), dtype=complex)
    for k in range(size):
        diag = 0j
        for l in range(size):
            if l == k:
                continue
            entry = taus[l] / (pts[k] - pts[l]) ** 2
            jac[k, l] = entry
            diag -= entry
        jac[k, k] = diag
    return jac


@dataclass(frozen=True)
class NondegReport:
    """Singular-value audit of the linearized balance map."""

    singular_values: tuple[float, ...]
    kernel_dim: int
    translation_aligned: bool
    transpose_kernel_aligned: bool

    def to_json(self) -> dict:
        return {
            "singular_values": list(self.singular_values),
            "kernel_dim": self.kernel_dim,
            "translation_aligned": self.translation_aligned,
            "transpose_kernel_aligned": self.transpose_kernel_aligned,
        }


def nondegeneracy(cfg: VortexConfig, tol: float = 1e-8) -> NondegReport:
    """Kernel dimension of dF via SVD, plus checks that (1,...,1) lies in the
    kernel of dF and of its (unconjugated) transpose."""
    jac = jacobian(cfg)
    sv = np.linalg.svd(jac, compute_uv=False)
    smax = sv[0] if sv[0] > 0 else 1.0
    kdim = int(np.sum(sv < tol * smax))
    ones = np.ones(jac.shape[0], dtype=complex)
    jnorm = np.linalg.norm(jac)
    trans = bool(np.linalg.norm(jac @ ones) < tol * jnorm)
    trans_t = bool(np.linalg.norm(jac.T @ ones) < tol * jnorm)
    return NondegReport(tuple(float(s) for s in sv), kdim, trans, trans_t)


@dataclass(frozen=True)
class NewtonResult:
    config: VortexConfig | None
    converged: bool
    iterations: int
    residual_norm: float
    reason: str = ""


def _diameter(cfg: VortexConfig) -> float:
    pts = cfg.points
    if len(pts) < 2:
        return 0.0
    return max(abs(pts[i] - pts[j])
               for i in range(len(pts)) for j in range(i + 1, len(pts)))


def _real_split(vals: list[complex]) -> np.ndarray:
    return np.array([x for v in vals for x in (v.real, v.imag)])


def newton_solve(start: VortexConfig, max_iter: int = 80,
                 tol: float = 1e-10) -> NewtonResult:
    """Damped Newton on the real-imaginary split of F - rhs.

    The translation gauge is fixed by pinning the first b-point (first
    a-point when n = 0); the remaining overdetermined linear step is solved
    by least squares, which is consistent at a true solution.
    """
    _check_separated(start)
    size = start.m + start.n
    pinned = start.m if start.n >= 1 else 0
    free = [i for i in range(size) if i != pinned]
    pts = list(start.points)
    cfg = start
    res = _real_split(residual(cfg))
    rnorm = float(np.max(np.abs(res)))
    for it in range(max_iter):
        if _diameter(cfg) > MAX_DIAMETER:
            return NewtonResult(None, False, it, rnorm, "escaping configuration")
        if rnorm < tol:
            if cfg.min_separation() <= 1e-6:
                return NewtonResult(None, False, it, rnorm, "merging configuration")
            return NewtonResult(cfg, True, it, rnorm)
        jac = jacobian(cfg)
        jfree = jac[:, free]
        # Real representation of the holomorphic Jacobian.
        jr = np.zeros((2 * size, 2 * len(free)))
        jr[0::2, 0::2] = jfree.real
        jr[0::2, 1::2] = -jfree.imag
        jr[1::2, 0::2] = jfree.imag
        jr[1::2, 1::2] = jfree.real
        try:
            step, *_ = np.linalg.lstsq(jr, -res, rcond=None)
        except np.linalg.LinAlgError:
            return NewtonResult(None, False, it, rnorm, "singular Jacobian step")
        if not np.all(np.isfinite(step)):
            return NewtonResult(None, False, it, rnorm, "singular Jacobian step")
        # Backtracking damping on the euclidean residual norm.
        base = np.linalg.norm(res)
        t = 1.0
        for _ in range(30):
            trial_pts = pts[:]
            for idx, i in enumerate(free):
                trial_pts[i] = pts[i] + t * complex(step[2 * idx], step[2 * idx + 1])
            trial = cfg.with_points(trial_pts)
            if trial.min_separation() >= MIN_SEPARATION:
                trial_res = _real_split(residual(trial))
                if np.linalg.norm(trial_res) < base:
                    pts, cfg, res = trial_pts, trial, trial_res
                    rnorm = float(np.max(np.abs(res)))
                    break
            t /= 2
        else:
            return NewtonResult(None, False, it, rnorm, "line search stalled")
    if rnorm < tol and cfg.min_separation() > 1e-6:
        return NewtonResult(cfg, True, max_iter, rnorm)
    reason = "merging configuration" if cfg.min_separation() <= 1e-6 else "iteration cap"
    return NewtonResult(None, False, max_iter, rnorm, reason)


def config_distance(x: VortexConfig, y: VortexConfig) -> float:
    """Distance between configurations modulo translation: centroids are
    subtracted and like-oriented points greedily matched."""
    if x.m != y.m or x.n != y.n:
        return float("inf")
    xc, yc = x.centered(), y.centered()

    def match(ps: tuple[complex, ...], qs: tuple[complex, ...]) -> float:
        rem = list(qs)
        worst = 0.0
        for p in ps:
            j = min(range(len(rem)), key=lambda i: abs(p - rem[i]))
            worst = max(worst, abs(p - rem.pop(j)))
        return worst

    return max(match(xc.a_points, yc.a_points), match(xc.b_points, yc.b_points))


def _symmetric_start(m: int, n: int, rng: np.random.Generator,
                     radius: float = 3.0) -> VortexConfig:
    """Conjugate-symmetric random start with all points in a disk."""

    def sample(count: int) -> list[complex]:
        out: list[complex] = []
        for _ in range(count // 2):
            r = radius * np.sqrt(rng.uniform())
            th = rng.uniform(0, np.pi)
            z = r * np.exp(1j * th)
            out.extend([z, z.conjugate()])
        if count % 2:
            out.append(complex(rng.uniform(-radius, radius), 0.0))
        return out

    return VortexConfig(tuple(sample(m)), tuple(sample(n)))


def random_search(m: int, n: int, tries: int, seed: int = 0,
                  preset_name: str = "pq-roots",
                  tol: float = 1e-10) -> list[VortexConfig]:
    """Seeded search for balancing configurations, deduplicated up to
    translation.  An empty list is a valid outcome."""
    if not m > n >= 0:
        raise ValueError("requires m > n >= 0")
    found: list[VortexConfig] = []
    for attempt in range(tries):
        rng = np.random.default_rng([seed, attempt])
        start = _symmetric_start(m, n, rng)
        start = VortexConfig(start.a_points, start.b_points, preset_name)
        if start.min_separation() < 1e-3:
            continue
        result = newton_solve(start, tol=tol)
        if not result.converged or result.config is None:
            continue
        cfg = result.config
        if all(config_distance(cfg, other) > 1e-6 for other in found):
            found.append(cfg.centered())
    return found
