"""Exact Laurent-rational arithmetic in the formal variable q.

This module is the number system for every q-analogue in the library:
integer Laurent polynomials, canonical quotients of them, and the elementary
q-objects (q-numbers, q-factorials, q-binomials) built on top.  Numeric work
uses plain complex numbers paired with a Tolerance policy; ScalarField
bundles the handful of operations the generic engines need so they can run
over either realization without caring which one they got.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from .errors import DegenerateParameters, DomainError

__all__ = [
    "LaurentPoly",
    "ExactScalar",
    "Tolerance",
    "ScalarField",
    "EXACT_Q",
    "RATIONAL",
    "complex_field",
    "approx_eq",
    "q_number",
    "q_factorial",
    "q_binomial",
    "q_int_power",
    "q_number_numeric",
    "st_number",
]


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (internal, used only for gcd reduction)
# ---------------------------------------------------------------------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _content(c: list[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(c: list[int]) -> list[int]:
    g = _content(c)
    if g > 1:
        return [x // g for x in c]
    return c


def _pseudo_rem(f: list[int], g: list[int]) -> list[int]:
    # repeated single-step pseudo-division; coefficient growth is tamed by
    # taking primitive parts between gcd iterations
    r = list(f)
    lg = g[-1]
    dg = len(g)
    while len(r) >= dg:
        lr = r[-1]
        if lr == 0:
            r.pop()
            continue
        shift = len(r) - dg
        r = [lg * x for x in r]
        for i, cg in enumerate(g):
            r[i + shift] -= lr * cg
        _trim(r)
    return r


def _gcd_dense(f: list[int], g: list[int]) -> list[int]:
    a = _primitive(_trim(list(f)))
    b = _primitive(_trim(list(g)))
    if not a:
        a, b = b, a
    while b:
        a, b = b, _primitive(_pseudo_rem(a, b))
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a or [1]


def _divexact_dense(f: list[int], g: list[int]) -> list[int]:
    # long division that is known to be exact
    r = list(f)
    out = [0] * (len(f) - len(g) + 1)
    lg = g[-1]
    while len(r) >= len(g):
        if r[-1] == 0:
            r.pop()
            continue
        shift = len(r) - len(g)
        c, rem = divmod(r[-1], lg)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[shift] = c
        for i, cg in enumerate(g):
            r[i + shift] -= c * cg
        _trim(r)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Integer Laurent polynomial in q, stored as {exponent: coefficient}.

    Zero coefficients are never stored, so structural equality is dict
    equality and the canonical printed form is unique.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c: dict[int, int] = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = v
        self._c = c

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def var(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @classmethod
    def from_dense(cls, offset: int, coeffs: list[int]) -> "LaurentPoly":
        return cls({offset + i: c for i, c in enumerate(coeffs)})

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    @property
    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def items(self) -> list[tuple[int, int]]:
        return sorted(self._c.items())

    def coefficient(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def as_dense(self) -> tuple[int, list[int]]:
        """Return (offset, coefficients) with a nonzero constant slot."""
        if not self._c:
            return 0, []
        lo = min(self._c)
        hi = max(self._c)
        out = [0] * (hi - lo + 1)
        for e, v in self._c.items():
            out[e - lo] = v
        return lo, out

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) - v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: -v for e, v in self._c.items()}
        return out

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._c or not other._c:
            return LaurentPoly()
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                w = c.get(e, 0) + v1 * v2
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def scale(self, k: int) -> "LaurentPoly":
        if k == 0:
            return LaurentPoly()
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: k * v for e, v in self._c.items()}
        return out

    def stretch(self, m: int) -> "LaurentPoly":
        """Substitute q -> q^m (a ring map for m >= 1)."""
        if m < 1:
            raise DomainError("stretch exponent must be a positive integer")
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e * m: v for e, v in self._c.items()}
        return out

    def content(self) -> int:
        return _content(list(self._c.values()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    __hash__ = None  # type: ignore[assignment]

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, x: complex) -> complex:
        if not self._c:
            return 0j
        if x == 0 and self.min_exp < 0:
            raise ZeroDivisionError("negative exponent at q = 0")
        return sum(v * x ** e for e, v in sorted(self._c.items()))

    def evaluate_fraction(self, x: Fraction) -> Fraction:
        total = Fraction(0)
        for e, v in self._c.items():
            total += v * x ** e
        return total

    # -- printing and parsing -----------------------------------------------

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts: list[str] = []
        for e, v in sorted(self._c.items()):
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                name = "q" if e == 1 else f"q^{e}"
                body = name if mag == 1 else f"{mag}*{name}"
            if not parts:
                parts.append(("-" if v < 0 else "") + body)
            else:
                parts.append((" - " if v < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    _TERM = re.compile(
        r"([+-]?)(?:(\d+)(?:\*(q(?:\^(-?\d+))?))?|(q(?:\^(-?\d+))?))"
    )

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial string")
        if s == "0":
            return cls()
        # hide exponent minus signs so we can split on term boundaries
        masked = s.replace("^-", "^~")
        coeffs: dict[int, int] = {}
        for piece in re.split(r"(?=[+-])", masked):
            if not piece:
                continue
            piece = piece.replace("^~", "^-")
            m = cls._TERM.fullmatch(piece)
            if not m:
                raise ValueError(f"unparseable term {piece!r}")
            sign = -1 if m.group(1) == "-" else 1
            if m.group(2) is not None:
                coef = sign * int(m.group(2))
                exp = 0
                if m.group(3) is not None:
                    exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                coef = sign
                exp = int(m.group(6)) if m.group(6) is not None else 1
            coeffs[exp] = coeffs.get(exp, 0) + coef
        return cls(coeffs)


_POLY_ZERO = LaurentPoly.zero()
_POLY_ONE = LaurentPoly.one()


# ---------------------------------------------------------------------------
# canonical exact scalars
# ---------------------------------------------------------------------------

class ExactScalar:
    """Canonical quotient of two integer Laurent polynomials.

    Canonical means: numerator and denominator share no polynomial factor and
    no integer content, and the denominator is an ordinary polynomial whose
    lowest term has exponent 0 and positive coefficient.  Equality is
    therefore structural.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num: "LaurentPoly | int", den: "LaurentPoly | int" = 1):
        if isinstance(num, int):
            num = LaurentPoly({0: num})
        if isinstance(den, int):
            den = LaurentPoly({0: den})
        self._num, self._den = _normalized(num, den)

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "ExactScalar":
        # trusted constructor: inputs already canonical
        out = cls.__new__(cls)
        out._num = num
        out._den = den
        return out

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "ExactScalar":
        return cls._raw(LaurentPoly({0: n}), _POLY_ONE)

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "ExactScalar":
        return cls._raw(LaurentPoly(dict(p.items())), _POLY_ONE)

    @classmethod
    def q_power(cls, e: int) -> "ExactScalar":
        return cls._raw(LaurentPoly.monomial(e), _POLY_ONE)

    # -- structure ----------------------------------------------------------

    @property
    def numerator(self) -> LaurentPoly:
        return self._num

    @property
    def denominator(self) -> LaurentPoly:
        return self._den

    @property
    def is_zero(self) -> bool:
        return self._num.is_zero

    @property
    def is_one(self) -> bool:
        return self._num == _POLY_ONE and self._den == _POLY_ONE

    @property
    def is_polynomial(self) -> bool:
        return self._den == _POLY_ONE

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ExactScalar.from_int(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    __hash__ = None  # type: ignore[assignment]

    # -- field operations ----------------------------------------------------

    @staticmethod
    def _coerce(x: "ExactScalar | int") -> "ExactScalar | None":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, int):
            return ExactScalar.from_int(x)
        return None

    def __add__(self, other: "ExactScalar | int") -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._den == _POLY_ONE and o._den == _POLY_ONE:
            return ExactScalar._raw(self._num + o._num, _POLY_ONE)
        return ExactScalar(
            self._num * o._den + o._num * self._den, self._den * o._den
        )

    __radd__ = __add__

    def __sub__(self, other: "ExactScalar | int") -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._den == _POLY_ONE and o._den == _POLY_ONE:
            return ExactScalar._raw(self._num - o._num, _POLY_ONE)
        return ExactScalar(
            self._num * o._den - o._num * self._den, self._den * o._den
        )

    def __rsub__(self, other: "ExactScalar | int") -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "ExactScalar":
        return ExactScalar._raw(-self._num, self._den)

    def __mul__(self, other: "ExactScalar | int") -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._den == _POLY_ONE and o._den == _POLY_ONE:
            return ExactScalar._raw(self._num * o._num, _POLY_ONE)
        return ExactScalar(self._num * o._num, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other: "ExactScalar | int") -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar(self._num * o._den, self._den * o._num)

    def __rtruediv__(self, other: "ExactScalar | int") -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "ExactScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("negative power of exact zero")
            return (ExactScalar.from_int(1) / self) ** (-n)
        result = ExactScalar.from_int(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- substitution and evaluation ----------------------------------------

    def stretch(self, m: int) -> "ExactScalar":
        """Substitute q -> q^m."""
        return ExactScalar(self._num.stretch(m), self._den.stretch(m))

    def evaluate(self, q: complex) -> complex:
        return self._num.evaluate(q) / self._den.evaluate(q)

    def evaluate_fraction(self, q: Fraction) -> Fraction:
        den = self._den.evaluate_fraction(q)
        if den == 0:
            raise ZeroDivisionError(f"denominator vanishes at q = {q}")
        return self._num.evaluate_fraction(q) / den

    # -- printing and parsing -----------------------------------------------

    def __str__(self) -> str:
        if self._den == _POLY_ONE:
            return str(self._num)
        return f"({self._num})/({self._den})"

    def __repr__(self) -> str:
        return f"ExactScalar({str(self)!r})"

    _QUOT = re.compile(r"\((?P<num>[^()]*)\)\s*/\s*\((?P<den>[^()]*)\)")

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        s = text.strip()
        m = cls._QUOT.fullmatch(s)
        if m:
            return cls(LaurentPoly.parse(m.group("num")),
                       LaurentPoly.parse(m.group("den")))
        return cls(LaurentPoly.parse(s))


def _normalized(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return _POLY_ZERO, _POLY_ONE
    noff, nd = num.as_dense()
    doff, dd = den.as_dense()
    g = _gcd_dense(nd, dd)
    if len(g) > 1 or g[0] != 1:
        nd = _divexact_dense(nd, g)
        dd = _divexact_dense(dd, g)
    c = math.gcd(_content(nd), _content(dd))
    if c > 1:
        nd = [x // c for x in nd]
        dd = [x // c for x in dd]
    if dd[0] < 0:
        nd = [-x for x in nd]
        dd = [-x for x in dd]
    return LaurentPoly.from_dense(noff - doff, nd), LaurentPoly.from_dense(0, dd)


# ---------------------------------------------------------------------------
# numeric policy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerance:
    """Comparison policy for numeric scalars.

    Two values are close when |x - y| <= max(abs_tol, rel_tol * max(|x|, |y|)).
    """

    rel: float = 1e-10
    abs: float = 1e-12

    def close(self, x: complex, y: complex) -> bool:
        return abs(x - y) <= max(self.abs, self.rel * max(abs(x), abs(y)))


def approx_eq(x: complex, y: complex, tol: Tolerance = Tolerance()) -> bool:
    return tol.close(x, y)


def residual(x: complex, y: complex, *terms: complex) -> float:
    """|x - y| relative to the scale of the comparison.

    The scale is max(1, |x|, |y|) together with any intermediate summands
    passed in `terms`; for identities of the form a + b = c the summand
    magnitudes are the honest yardstick when the sum cancels.
    """
    scale = max(1.0, abs(x), abs(y))
    for t in terms:
        scale = max(scale, abs(t))
    return abs(x - y) / scale


# ---------------------------------------------------------------------------
# scalar fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField:
    """The operations a generic engine needs, over one scalar realization.

    Arithmetic itself goes through the scalars' own operators; the field
    carries the realization-specific pieces: constants, integer embedding,
    the zero test, and equality.  `exact` selects the structural versus the
    tolerance-based flavor of the distinctness guards.
    """

    name: str
    zero: object
    one: object
    from_int: Callable[[int], object]
    is_zero: Callable[[object], bool]
    eq: Callable[[object, object], bool]
    exact: bool

    def div(self, x, y):
        if self.is_zero(y):
            raise ZeroDivisionError(f"division by zero-tested scalar in {self.name}")
        return x / y


EXACT_Q = ScalarField(
    name="exact-q",
    zero=ExactScalar.from_int(0),
    one=ExactScalar.from_int(1),
    from_int=ExactScalar.from_int,
    is_zero=lambda x: x.is_zero,
    eq=lambda x, y: x == y,
    exact=True,
)

RATIONAL = ScalarField(
    name="rational",
    zero=Fraction(0),
    one=Fraction(1),
    from_int=Fraction,
    is_zero=lambda x: x == 0,
    eq=lambda x, y: x == y,
    exact=True,
)


def complex_field(tol: Tolerance = Tolerance()) -> ScalarField:
    return ScalarField(
        name="complex",
        zero=0j,
        one=1 + 0j,
        from_int=lambda n: complex(n),
        is_zero=lambda x: abs(x) <= tol.abs,
        eq=tol.close,
        exact=False,
    )


# ---------------------------------------------------------------------------
# q-objects
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def q_number(z: int) -> ExactScalar:
    """The q-analogue (1 - q^z) / (1 - q) of an integer z.

    For z >= 0 this is the polynomial 1 + q + ... + q^(z-1); for z < 0 it is
    a Laurent polynomial, e.g. q_number(-2) = -q^-2 - q^-1.
    """
    if z == 0:
        return ExactScalar.from_int(0)
    num = LaurentPoly({0: 1}) - LaurentPoly.monomial(z)
    den = LaurentPoly({0: 1}) - LaurentPoly.var()
    return ExactScalar(num, den)


@lru_cache(maxsize=None)
def q_factorial(n: int) -> ExactScalar:
    """[n]_q! = [1]_q [2]_q ... [n]_q."""
    if n < 0:
        raise DomainError("q-factorial needs n >= 0")
    if n == 0:
        return ExactScalar.from_int(1)
    return q_factorial(n - 1) * q_number(n)


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> ExactScalar:
    """Gaussian binomial [n]_q! / ([k]_q! [n-k]_q!)."""
    if not 0 <= k <= n:
        raise DomainError("q-binomial needs 0 <= k <= n")
    result = q_factorial(n) / (q_factorial(k) * q_factorial(n - k))
    assert result.is_polynomial
    assert all(c > 0 for _, c in result.numerator.items())
    return result


@lru_cache(maxsize=None)
def q_int_power(m: int, n: int) -> ExactScalar:
    """[m]_q ** n, cached because the explicit Eulerian sums reuse it heavily."""
    return q_number(m) ** n


def q_number_numeric(z: complex, q: complex) -> complex:
    """(1 - q^z) / (1 - q) at a numeric q; the q -> 1 limit returns z itself."""
    if q == 1:
        return complex(z)
    if isinstance(z, complex) and z.imag == 0:
        z = z.real
    if isinstance(z, float) and z.is_integer():
        z = int(z)
    if isinstance(z, int):
        qz = q ** z
    else:
        import cmath

        qz = cmath.exp(z * cmath.log(q))
    return (1 - qz) / (1 - q)


def st_number(i: int, s: complex, t: complex, min_gap: float = 1e-12) -> complex:
    """The (s,t)-analogue (s^i - t^i) / (s - t) of an integer i."""
    if abs(s - t) <= min_gap * max(1.0, abs(s), abs(t)):
        raise DegenerateParameters(f"st_number bases too close: s={s}, t={t}")
    return (s ** i - t ** i) / (s - t)
