"""Exact arithmetic tower: rationals, polynomials, rational functions and
exponential polynomials (finite sums sum_k p_k(x) e^{kx}), plus Wronskian
determinants over them.

All values are immutable after construction and all arithmetic is exact;
nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int]


def rat_to_str(r: Fraction) -> str:
    """Serialize a rational as "num/den", or plain "num" when den == 1."""
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


class ExactArithmeticError(Exception):
    """Raised when an exact-arithmetic precondition is violated."""


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over the rationals, ascending coefficients.

    Invariant: no trailing zero coefficient; the zero polynomial has an
    empty coefficient tuple.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c: RatLike) -> "Poly":
        return Poly([Fraction(c)])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def from_strings(strings: Sequence[str]) -> "Poly":
        return Poly([rat_from_str(s) for s in strings])

    def to_strings(self) -> list[str]:
        return [rat_to_str(c) for c in self.coeffs]

    # -- basic queries ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ExactArithmeticError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.leading == 1

    # -- ring arithmetic ----------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", RatLike]) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly([a * c for a in self.coeffs])
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, c: RatLike) -> "Poly":
        """Return p(x + c), computed by Horner over the polynomial ring."""
        xc = Poly([Fraction(c), Fraction(1)])
        out = Poly()
        for a in reversed(self.coeffs):
            out = out * xc + Poly.constant(a)
        return out

    def monic(self) -> "Poly":
        return self * (1 / self.leading)

    def __call__(self, z):
        """Evaluate at z (Fraction, int, float or complex) by Horner."""
        out = z * 0
        for a in reversed(self.coeffs):
            out = out * z + (a if isinstance(z, (Fraction, int)) else
                             (float(a) if not isinstance(z, complex) else complex(a)))
        return out

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        terms = [f"{rat_to_str(c)}*x^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "Poly(" + " + ".join(terms) + ")"


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Exact quotient and remainder of a by b over the rationals."""
    if b.is_zero:
        raise ExactArithmeticError("polynomial division by zero")
    rem = list(a.coeffs)
    quot = [Fraction(0)] * max(0, len(rem) - len(b.coeffs) + 1)
    bl = b.leading
    bd = b.degree
    while len(rem) - 1 >= bd and rem:
        k = len(rem) - 1 - bd
        q = rem[-1] / bl
        quot[k] = q
        for i, c in enumerate(b.coeffs):
            rem[k + i] -= q * c
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < bd:
            break
    return Poly(quot), Poly(rem)


def poly_exact_div(a: Poly, b: Poly) -> Poly:
    q, r = poly_divmod(a, b)
    if not r.is_zero:
        raise ExactArithmeticError("non-exact polynomial division")
    return q


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor over the rationals."""
    if a.is_zero and b.is_zero:
        raise ExactArithmeticError("gcd(0, 0) is undefined")
    while not b.is_zero:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return a.monic()


def is_square_free(p: Poly) -> bool:
    """True iff p has no repeated roots, decided by exact gcd with p'."""
    if p.is_zero:
        raise ExactArithmeticError("square-freeness of the zero polynomial is undefined")
    if p.degree == 0:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def common_root_free(p: Poly, q: Poly) -> bool:
    """True iff p and q share no root, decided by exact gcd."""
    if p.is_zero or q.is_zero:
        raise ExactArithmeticError("common roots with the zero polynomial are undefined")
    return poly_gcd(p, q).degree == 0


@dataclass(frozen=True)
class RatFunc:
    """Reduced rational function num/den with monic denominator."""

    num: Poly
    den: Poly

    def __init__(self, num: Poly, den: Poly = Poly([1])):
        if den.is_zero:
            raise ExactArithmeticError("rational function with zero denominator")
        if num.is_zero:
            num, den = Poly(), Poly([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = poly_exact_div(num, g)
                den = poly_exact_div(den, g)
            lead = den.leading
            num = num * (1 / lead)
            den = den * (1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: Union["RatFunc", RatLike]) -> "RatFunc":
        if not isinstance(other, RatFunc):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero:
            raise ExactArithmeticError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r} / {self.den!r})"


def log_derivative(p: Poly) -> RatFunc:
    """(ln p)' = p'/p."""
    return RatFunc(p.derivative(), p)


@dataclass(frozen=True)
class ExpPoly:
    """Finite sum sum_k p_k(x) e^{kx} with integer exponents k >= 0.

    Stored as a sorted tuple of (exponent, Poly) with no zero polynomials.
    """

    terms: tuple[tuple[int, Poly], ...]

    def __init__(self, terms: Union[dict, Iterable[tuple[int, Poly]]] = ()):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        acc: dict[int, Poly] = {}
        for k, p in items:
            if k < 0:
                raise ExactArithmeticError("negative exponent in ExpPoly")
            acc[k] = acc.get(k, Poly()) + p
        clean = tuple(sorted((k, p) for k, p in acc.items() if not p.is_zero))
        object.__setattr__(self, "terms", clean)

    @staticmethod
    def from_poly(p: Poly, exponent: int = 0) -> "ExpPoly":
        return ExpPoly([(exponent, p)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def single_term(self) -> tuple[int, Poly]:
        if not self.is_single_term:
            raise ExactArithmeticError("ExpPoly is not a single exponential term")
        return self.terms[0]

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(list(self.terms) + list(other.terms))

    def __neg__(self) -> "ExpPoly":
        return ExpPoly([(k, -p) for k, p in self.terms])

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other: Union["ExpPoly", Poly, RatLike]) -> "ExpPoly":
        if isinstance(other, Poly):
            other = ExpPoly.from_poly(other)
        if not isinstance(other, ExpPoly):
            return ExpPoly([(k, p * other) for k, p in self.terms])
        out = []
        for k1, p1 in self.terms:
            for k2, p2 in other.terms:
                out.append((k1 + k2, p1 * p2))
        return ExpPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "ExpPoly":
        # d/dx [p e^{kx}] = (p' + k p) e^{kx}
        return ExpPoly([(k, p.derivative() + p * k) for k, p in self.terms])

    def __repr__(self) -> str:
        if self.is_zero:
            return "ExpPoly(0)"
        return "ExpPoly(" + " + ".join(f"({p!r})*e^{k}x" for k, p in self.terms) + ")"


@dataclass(frozen=True)
class ExpRat:
    """Rational function times e^{kx}; k may be any integer.

    Only used for the second-order ODE manipulations, where coefficients such
    as e^{-x} appear.  Addition requires matching exponents.
    """

    rat: RatFunc
    exponent: int

    @property
    def is_zero(self) -> bool:
        return self.rat.is_zero

    def __add__(self, other: "ExpRat") -> "ExpRat":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.exponent != other.exponent:
            raise ExactArithmeticError("ExpRat addition with mismatched exponents")
        return ExpRat(self.rat + other.rat, self.exponent)

    def __neg__(self) -> "ExpRat":
        return ExpRat(-self.rat, self.exponent)

    def __sub__(self, other: "ExpRat") -> "ExpRat":
        return self + (-other)

    def __mul__(self, other: Union["ExpRat", RatFunc, RatLike]) -> "ExpRat":
        if isinstance(other, RatFunc):
            return ExpRat(self.rat * other, self.exponent)
        if not isinstance(other, ExpRat):
            return ExpRat(self.rat * other, self.exponent)
        return ExpRat(self.rat * other.rat, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other: "ExpRat") -> "ExpRat":
        return ExpRat(self.rat / other.rat, self.exponent - other.exponent)

    def derivative(self) -> "ExpRat":
        return ExpRat(self.rat.derivative() + self.rat * self.exponent, self.exponent)


# -- Wronskians -----------------------------------------------------------


def _poly_det_bareiss(mat: list[list[Poly]]) -> Poly:
    """Fraction-free (Bareiss) determinant of a polynomial matrix."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = Poly.constant(1)
    for k in range(n - 1):
        if m[k][k].is_zero:
            for r in range(k + 1, n):
                if not m[r][k].is_zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Poly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = poly_exact_div(num, prev)
            m[i][k] = Poly()
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def _exp_det(mat: list[list[ExpPoly]]) -> ExpPoly:
    """Determinant of a general ExpPoly matrix by minor expansion with
    memoization on column subsets.  Only used for multi-term inputs, which
    stay small in practice."""
    n = len(mat)
    cache: dict[tuple[int, ...], ExpPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> ExpPoly:
        if not cols:
            return ExpPoly.from_poly(Poly.constant(1))
        got = cache.get((row,) + cols)
        if got is not None:
            return got
        acc = ExpPoly()
        for idx, c in enumerate(cols):
            entry = mat[row][c]
            if entry.is_zero:
                continue
            rest = cols[:idx] + cols[idx + 1:]
            term = entry * minor(row + 1, rest)
            acc = acc + (term if idx % 2 == 0 else -term)
        cache[(row,) + cols] = acc
        return acc

    return minor(0, tuple(range(n)))


def wronskian(fs: Sequence[ExpPoly]) -> ExpPoly:
    """Wronskian determinant of a list of exponential polynomials.

    Row i holds the (i-1)-th derivatives.  When every input is a single
    exponential term the exponent factors out of each column and the core
    determinant runs fraction-free over the polynomial ring; otherwise a
    memoized minor expansion over ExpPoly is used.
    """
    if not fs:
        raise ExactArithmeticError("Wronskian of an empty list")
    n = len(fs)
    if n == 1:
        return fs[0]
    if all(f.is_single_term for f in fs):
        cols = []
        total_exp = 0
        for f in fs:
            k, p = f.single_term()
            total_exp += k
            col = [p]
            for _ in range(n - 1):
                p = p.derivative() + p * k
                col.append(p)
            cols.append(col)
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        det = _poly_det_bareiss(mat)
        return ExpPoly([(total_exp, det)])
    rows: list[list[ExpPoly]] = [list(fs)]
    for _ in range(n - 1):
        rows.append([f.derivative() for f in rows[-1]])
    return _exp_det(rows)
