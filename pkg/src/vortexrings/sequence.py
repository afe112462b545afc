"""Generation of the generalized polynomial sequence whose roots balance
multi-ring vortex configurations, by two independent exact routes (Wronskian
closed form and three-term recurrence), together with the exact identity
verifiers and the generalized Darboux transformation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    ExactArithmeticError,
    ExpPoly,
    ExpRat,
    Poly,
    RatFunc,
    log_derivative,
    wronskian,
)


class InternalInconsistencyError(Exception):
    """An exact identity that must hold by theorem failed: arithmetic bug."""


class NoPolynomialSolutionError(Exception):
    """The recurrence linear system has no polynomial solution."""


def shift_sequence(n: int) -> list[Fraction]:
    """First n terms of the shift sequence: a_1 = 0, a_{j+1} = a_j + 2/j."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [Fraction(0)]
    for j in range(1, n):
        out.append(out[-1] + Fraction(2, j))
    return out


def omega(j: int) -> ExpPoly:
    """The j-th seed function (x - a_j) e^{(j-1)x}."""
    if j < 1:
        raise ValueError("j must be >= 1")
    a_j = shift_sequence(j)[-1]
    return ExpPoly([(j - 1, Poly([-a_j, 1]))])


def norm_const(n: int) -> Fraction:
    """Normalizing constant making the Wronskian-generated polynomial monic:
    1 / ((n-1)! * prod_{1<=i<j<=n-1} (j-i))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prod = math.factorial(n - 1)
    for k in range(1, n - 1):
        prod *= math.factorial(k)
    return Fraction(1, prod)


def seed_wronskian(n: int) -> ExpPoly:
    """W(omega_1, ..., omega_n)."""
    return wronskian([omega(j) for j in range(1, n + 1)])


def gen_wronskian(n: int) -> Poly:
    """n-th sequence polynomial via the Wronskian closed form.

    The Wronskian must be a single exponential term with exponent
    n(n-1)/2; anything else signals an arithmetic bug.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    w = seed_wronskian(n)
    if not w.is_single_term:
        raise InternalInconsistencyError("seed Wronskian is not a single term")
    k, p = w.single_term()
    if k != n * (n - 1) // 2:
        raise InternalInconsistencyError(
            f"seed Wronskian exponent {k} != n(n-1)/2 = {n * (n - 1) // 2}")
    poly = p * norm_const(n)
    if poly.degree != n or not poly.is_monic:
        raise InternalInconsistencyError("generated polynomial is not monic of degree n")
    return poly


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a (possibly overdetermined) exact linear system by Gaussian
    elimination.  Raises if rank-deficient in the unknowns or inconsistent."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    a = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    piv_rows = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            raise NoPolynomialSolutionError("rank-deficient linear system")
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        piv_rows.append(c)
        r += 1
    for i in range(r, m):
        if a[i][n] != 0:
            raise NoPolynomialSolutionError("inconsistent linear system")
    sol = [Fraction(0)] * n
    for i, c in enumerate(piv_rows):
        sol[c] = a[i][n]
    return sol


def gen_recurrence(p_n: Poly, p_n1: Poly, n: int) -> Poly:
    """Next sequence polynomial from two consecutive ones.

    Solves, in the n+3 unknown coefficients of y, the exact linear system

        p_n' y - p_n y' - (n+1) p_n y + (n+1) p_n1^2 = 0,

    whose polynomial solution is unique (the homogeneous solution carries an
    exponential factor and is never a polynomial).
    """
    if p_n.degree != n or p_n1.degree != n + 1:
        raise ValueError("inputs must have degrees n and n+1")
    deg_y = n + 2
    ncoef = deg_y + 1
    target = -(n + 1) * (p_n1 * p_n1)
    # L(x^i) = p_n' x^i - i p_n x^{i-1} - (n+1) p_n x^i
    max_deg = 2 * n + 2
    rows = [[Fraction(0)] * ncoef for _ in range(max_deg + 1)]
    dp = p_n.derivative()
    for i in range(ncoef):
        img = dp * Poly([0] * i + [1]) - (n + 1) * (p_n * Poly([0] * i + [1]))
        if i >= 1:
            img = img - i * (p_n * Poly([0] * (i - 1) + [1]))
        for d in range(img.degree + 1):
            rows[d][i] = img.coeff(d)
    rhs = [target.coeff(d) for d in range(max_deg + 1)]
    sol = _solve_exact(rows, rhs)
    y = Poly(sol)
    if not verify_three_term(p_n, p_n1, y, n):
        raise InternalInconsistencyError("recurrence output fails the three-term identity")
    return y


def verify_pq(p: Poly, q: Poly, m: int, n: int) -> Poly:
    """Residual of the bilinear equation P''Q - 2P'Q' + PQ'' + nP'Q - mPQ'."""
    dp, dq = p.derivative(), q.derivative()
    return (p.derivative().derivative() * q - 2 * (dp * dq)
            + p * q.derivative().derivative() + n * (dp * q) - m * (p * dq))


def verify_three_term(p_n: Poly, p_n1: Poly, p_n2: Poly, n: int) -> bool:
    """Exact check of p_n' p_n2 - p_n p_n2' - (n+1) p_n p_n2 + (n+1) p_n1^2 = 0."""
    res = (p_n.derivative() * p_n2 - p_n * p_n2.derivative()
           - (n + 1) * (p_n * p_n2) + (n + 1) * (p_n1 * p_n1))
    return res.is_zero


def verify_refi(n: int) -> bool:
    """Exact check, in the exponential-polynomial ring, of

        W_n' W_{n+2} - W_n W_{n+2}' + n W_n W_{n+2} + (n+1)^2 e^x W_{n+1}^2 = 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    w_n = seed_wronskian(n)
    w_n1 = seed_wronskian(n + 1)
    w_n2 = seed_wronskian(n + 2)
    ex = ExpPoly([(1, Poly.constant(1))])
    res = (w_n.derivative() * w_n2 - w_n * w_n2.derivative()
           + n * (w_n * w_n2) + (n + 1) ** 2 * (ex * (w_n1 * w_n1)))
    return res.is_zero


def augmented_wronskian(k: int, xi: ExpPoly) -> ExpPoly:
    """W(omega_1, ..., omega_k, xi)."""
    return wronskian([omega(j) for j in range(1, k + 1)] + [xi])


def verify_jacobi(k: int, xi: ExpPoly) -> bool:
    """Jacobi identity (W_k(xi))' W_{k+1} - W_k(xi) W_{k+1}' - W_{k+1}(xi) W_k = 0."""
    wk_xi = augmented_wronskian(k, xi)
    wk1_xi = augmented_wronskian(k + 1, xi)
    w_k = seed_wronskian(k)
    w_k1 = seed_wronskian(k + 1)
    res = wk_xi.derivative() * w_k1 - wk_xi * w_k1.derivative() - wk1_xi * w_k
    return res.is_zero


def verify_wk_one(k: int) -> bool:
    """Exact check of W_k(1) = (-1)^k ((k-1)!)^2 e^{(k-1)x} W_{k-1}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lhs = augmented_wronskian(k, ExpPoly.from_poly(Poly.constant(1)))
    if k == 1:
        rhs_base = ExpPoly.from_poly(Poly.constant(1))
    else:
        rhs_base = seed_wronskian(k - 1)
    factor = Fraction((-1) ** k * math.factorial(k - 1) ** 2)
    rhs = ExpPoly([(k - 1, Poly.constant(factor))]) * rhs_base
    return (lhs - rhs).is_zero


def ode_coefficient(p: Poly) -> RatFunc:
    """The zeroth-order coefficient 2 (ln p)'' - (ln p)' of the second-order
    equation attached to a generating polynomial p."""
    ld = log_derivative(p)
    return 2 * ld.derivative() - ld


def verify_ode_solution(p: Poly, n: int, a: Poly, k: int) -> bool:
    """True iff phi = (a/p) e^{kx} solves phi'' + (2(ln p)'' - (ln p)') phi
    - (n+1) phi' = 0, checked exactly in rational-function arithmetic."""
    if p.is_zero:
        raise ValueError("p must be nonzero")
    if k < 0:
        raise ValueError("k must be >= 0")
    f = RatFunc(a, p)
    df = f.derivative()
    ddf = df.derivative()
    u = ode_coefficient(p)
    # e^{kx} cleared: f'' + 2k f' + k^2 f + u f - (n+1)(f' + k f)
    res = ddf + 2 * k * df + k * k * f + u * f - (n + 1) * (df + k * f)
    return res.is_zero


@dataclass(frozen=True)
class OdeOperator:
    """Second-order operator u2 phi'' + u1 phi' + u0 phi with ExpRat coefficients."""

    u2: ExpRat
    u1: ExpRat
    u0: ExpRat

    def apply(self, phi: ExpRat) -> ExpRat:
        dphi = phi.derivative()
        return self.u2 * dphi.derivative() + self.u1 * dphi + self.u0 * phi

    def annihilates(self, phi: ExpRat) -> bool:
        return self.apply(phi).is_zero


def darboux_transform(op: OdeOperator, phi1: ExpRat, phi2: ExpRat
                      ) -> tuple[OdeOperator, ExpRat]:
    """Generalized Darboux transformation.

    Given two solutions phi1, phi2 of u2 phi'' + u1 phi' + u0 phi = 0
    (checked exactly), returns the transformed operator with

        u2~ = u2,  u1~ = u1 + u2',  u0~ = u0 + u1' + 2 u2 (ln phi1)'' + u2' (ln phi1)'

    and the transformed solution phi~ = phi2' - phi1' phi2 / phi1, and
    asserts exactly that the new operator annihilates phi~.
    """
    if not op.annihilates(phi1):
        raise ValueError("phi1 does not solve the input equation")
    if not op.annihilates(phi2):
        raise ValueError("phi2 does not solve the input equation")
    if phi1.is_zero:
        raise ValueError("phi1 must be nonzero")
    # (ln phi1)' = rat'/rat + exponent: an ordinary rational function.
    lphi = phi1.rat.derivative() / phi1.rat + RatFunc(Poly.constant(phi1.exponent))
    du2 = op.u2.derivative()
    new_u1 = op.u1 + du2
    new_u0 = (op.u0 + op.u1.derivative()
              + 2 * op.u2 * lphi.derivative() + du2 * lphi)
    new_op = OdeOperator(op.u2, new_u1, new_u0)
    phit = phi2.derivative() - (phi1.derivative() * phi2) / phi1
    if not new_op.annihilates(phit):
        raise InternalInconsistencyError("Darboux-transformed solution fails its equation")
    return new_op, phit


def ode_operator_for(p: Poly, n: int, exponent: int = -1) -> OdeOperator:
    """The operator e^{sx} [phi'' + (2(ln p)'' - (ln p)') phi - (n+1) phi']
    written with ExpRat coefficients carrying the common factor e^{sx}."""
    one = RatFunc(Poly.constant(1))
    return OdeOperator(
        u2=ExpRat(one, exponent),
        u1=ExpRat(-(n + 1) * one, exponent),
        u0=ExpRat(ode_coefficient(p), exponent),
    )


@dataclass(frozen=True)
class AMSequence:
    """The generated polynomial sequence P_1..P_N with its shift sequence."""

    polys: tuple[Poly, ...]
    shifts: tuple[Fraction, ...]

    @property
    def max_index(self) -> int:
        return len(self.polys)

    def poly(self, n: int) -> Poly:
        if not 1 <= n <= self.max_index:
            raise IndexError(f"index {n} outside 1..{self.max_index}")
        return self.polys[n - 1]

    @staticmethod
    def generate(n_max: int, route: str = "wronskian") -> "AMSequence":
        """Build P_1..P_{n_max}; route is "wronskian" or "recurrence"."""
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        if route == "wronskian":
            polys = [gen_wronskian(n) for n in range(1, n_max + 1)]
        elif route == "recurrence":
            polys = [gen_wronskian(1)]
            if n_max >= 2:
                polys.append(gen_wronskian(2))
            for n in range(1, n_max - 1):
                polys.append(gen_recurrence(polys[n - 1], polys[n], n))
        else:
            raise ValueError(f"unknown route {route!r}")
        return AMSequence(tuple(polys), tuple(shift_sequence(n_max)))


@dataclass(frozen=True)
class NormalizedPair:
    """Translated consecutive pair (P, Q) with the x^{n-1} term of Q zeroed."""

    p: Poly
    q: Poly
    m: int
    n: int
    shift: Fraction


def normalized_pair(n: int, seq: AMSequence) -> NormalizedPair:
    """Pair (P, Q) = (P_{n+1}(x+c), P_n(x+c)) with c chosen so the x^{n-1}
    coefficient of Q vanishes."""
    p_n = seq.poly(n)
    p_n1 = seq.poly(n + 1)
    c = -p_n.coeff(n - 1) / n if n >= 1 else Fraction(0)
    pair = NormalizedPair(p=p_n1.shift(c), q=p_n.shift(c), m=n + 1, n=n, shift=c)
    if n >= 2 and pair.q.coeff(n - 1) != 0:
        raise InternalInconsistencyError("normalization failed to zero the x^{n-1} term")
    return pair


def find_translation(src: Poly, dst: Poly) -> Fraction:
    """Exact rational c with src(x + c) == dst, for monic inputs of equal
    degree; raises if none exists."""
    if src.degree != dst.degree or src.degree < 1:
        raise ValueError("inputs must be monic of equal positive degree")
    d = src.degree
    c = (dst.coeff(d - 1) - src.coeff(d - 1)) / d
    if src.shift(c) != dst:
        raise NoPolynomialSolutionError("polynomials are not translates")
    return c
