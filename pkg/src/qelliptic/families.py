"""Stirling, Whitney, rook, and Lah families, each by independent routes.

Every family here is a triangle of connection coefficients between two
Newton bases, so each value can be computed at least two structurally
different ways: a Pascal-type triangle recurrence, an explicit
interpolation sum, and (for the elliptic families) the raw
divided-difference oracle.  The routes share no intermediate formulas;
their agreement is the correctness argument, and the check suites replay
it at runtime.

The elliptic families take an EllipticParams pack and return complex
values.  Their explicit sums cancel heavily once the triangle gets deep,
because elliptic numbers cluster the way q-numbers do; the *_scaled
variants report the largest summand so callers can judge residuals
against the conditioning actually encountered instead of the value.

A note on normalization: the rook and Lah values here are the
coefficients in the Newton-basis identity itself.  Weighted-enumeration
conventions differ from these by the product of the first k weights,
available as weight_product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .newton import (
    EllipticSequence,
    STSequence,
    connection_explicit_scaled,
    h_explicit_scaled,
    h_recurrence,
    newton_oracle_scaled,
)
from .scalars import (
    EXACT_Q,
    ExactScalar,
    Tolerance,
    q_factorial,
    q_int_power,
    q_number,
)
from .theta import (
    EllipticParams,
    elliptic_number,
    elliptic_number_shifted,
    elliptic_weight,
)

__all__ = [
    "stirling2",
    "q_stirling2",
    "elliptic_stirling2",
    "elliptic_stirling2_scaled",
    "whitney_qr",
    "st_shifted_stirling",
    "elliptic_shifted_stirling",
    "weight_product",
    "FerrersBoard",
    "elliptic_rook",
    "elliptic_rook_scaled",
    "lah",
    "elliptic_lah",
    "elliptic_lah_scaled",
    "TriangularTable",
]


def _check_entry(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise DomainError("triangle entries need n >= 0 and k >= 0")


def _bad_route(route: str, allowed: tuple[str, ...]):
    return DomainError(f"unknown route {route!r}, expected one of {allowed}")


# ---------------------------------------------------------------------------
# classical and q-deformed Stirling numbers of the second kind
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    row = []
    for k in range(n + 1):
        v = 0
        if k >= 1:
            v += prev[k - 1]
        if k <= n - 1:
            v += k * prev[k]
        row.append(v)
    return tuple(row)


def stirling2(n: int, k: int, route: str = "recurrence") -> int:
    """Set-partition counts S(n, k)."""
    _check_entry(n, k)
    if k > n:
        return 0
    if route == "recurrence":
        return _stirling2_row(n)[k]
    if route == "explicit":
        total = sum(
            (-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)
        )
        fact = math.factorial(k)
        assert total % fact == 0
        return total // fact
    raise _bad_route(route, ("recurrence", "explicit"))


@lru_cache(maxsize=None)
def _q_stirling2_row(n: int) -> tuple[ExactScalar, ...]:
    if n == 0:
        return (ExactScalar.from_int(1),)
    prev = _q_stirling2_row(n - 1)
    row = []
    for k in range(n + 1):
        v = EXACT_Q.zero
        if k >= 1:
            v = v + prev[k - 1]
        if k <= n - 1:
            v = v + q_number(k) * prev[k]
        row.append(v)
    return tuple(row)


def q_stirling2(n: int, k: int, route: str = "recurrence") -> ExactScalar:
    """q-Stirling numbers of the second kind, exact in q.

    Three routes: the triangle recurrence

        S(n+1, k) = S(n, k-1) + [k]_q S(n, k),

    the alternating explicit sum

        q^-C(k,2) / [k]_q!  sum_j (-1)^j q^C(j,2) qbinom(k, j) [k-j]_q^n,

    and the complete homogeneous specialization h_{n-k}([0]_q .. [k]_q).
    All three produce the same canonical rational function; the tests
    compare them structurally, not numerically.
    """
    _check_entry(n, k)
    if k > n:
        return EXACT_Q.zero
    if route == "recurrence":
        return _q_stirling2_row(n)[k]
    if route == "explicit":
        from .scalars import q_binomial

        total = EXACT_Q.zero
        for j in range(k + 1):
            term = (
                ExactScalar.q_power(math.comb(j, 2))
                * q_binomial(k, j)
                * q_int_power(k - j, n)
            )
            if j % 2:
                term = -term
            total = total + term
        return ExactScalar.q_power(-math.comb(k, 2)) / q_factorial(k) * total
    if route == "h":
        return h_recurrence(n - k, [q_number(i) for i in range(k + 1)], EXACT_Q)
    raise _bad_route(route, ("recurrence", "explicit", "h"))


# ---------------------------------------------------------------------------
# elliptic Stirling numbers
# ---------------------------------------------------------------------------

def _elliptic_stirling2_rows(n: int, params: EllipticParams) -> list[list[complex]]:
    rows = [[complex(1.0)]]
    for m in range(n):
        prev = rows[-1]
        row = []
        for k in range(m + 2):
            acc = complex(0.0)
            if k >= 1:
                acc += prev[k - 1]
            if k <= m:
                acc += elliptic_number(k, params) * prev[k]
            row.append(acc)
        rows.append(row)
    return rows


def _elliptic_stirling2_terms(n: int, k: int,
                              params: EllipticParams) -> list[complex]:
    # sum over j of [k-j]^n divided by the product, over i != k-j, of
    # W(i) [k-j-i] taken at base shift (2i, i); the denominator factors
    # are exactly the node gaps [k-j] - [i] split by the addition rule
    terms = []
    for j in range(k + 1):
        den = complex(1.0)
        for i in range(k + 1):
            if i != k - j:
                den *= elliptic_weight(i, params) * elliptic_number_shifted(
                    k - j - i, (2 * i, i), params
                )
        terms.append(elliptic_number(k - j, params) ** n / den)
    return terms


def elliptic_stirling2(n: int, k: int, params: EllipticParams,
                       route: str = "recurrence") -> complex:
    """Stirling numbers of the second kind over elliptic numbers.

    Routes: "recurrence" is the triangle with multiplier [k]; "h" runs
    the generic complete homogeneous engine over the nodes [0] .. [k];
    "explicit" is the weighted interpolation sum whose denominators are
    assembled from weights and base-shifted numbers rather than raw node
    gaps; "oracle" reads the coefficient off a divided-difference table
    of the power function.  Agreement of "explicit" with the others
    exercises the addition rule at every node pair.
    """
    _check_entry(n, k)
    if k > n:
        return complex(0.0)
    if route == "recurrence":
        return _elliptic_stirling2_rows(n, params)[n][k]
    if route == "h":
        seq = EllipticSequence(params)
        return h_recurrence(n - k, seq.window(0, k), seq.field)
    if route in ("explicit", "oracle"):
        return elliptic_stirling2_scaled(n, k, params, route)[0]
    raise _bad_route(route, ("recurrence", "h", "explicit", "oracle"))


def elliptic_stirling2_scaled(n: int, k: int, params: EllipticParams,
                              route: str = "explicit") -> tuple[complex, float]:
    """Value plus the conditioning scale of the chosen route.

    The scale is the largest magnitude the route forms on the way to the
    value: summands for "explicit", divided-difference entries for
    "oracle".  Residuals between routes are meaningful relative to the
    larger of the two scales, not to the value alone.
    """
    _check_entry(n, k)
    if k > n:
        return complex(0.0), 1.0
    if route == "explicit":
        terms = _elliptic_stirling2_terms(n, k, params)
        return sum(terms, complex(0.0)), max(1.0, *(abs(t) for t in terms))
    if route == "oracle":
        seq = EllipticSequence(params)
        fvals = [seq[m] ** n for m in range(n + 1)]
        coeffs, scale = newton_oracle_scaled(fvals, seq, n)
        return coeffs[k], scale
    raise _bad_route(route, ("explicit", "oracle"))


# ---------------------------------------------------------------------------
# q-deformed r-Whitney numbers and their (s, t) and elliptic extensions
# ---------------------------------------------------------------------------

def whitney_qr(n: int, k: int, m: int, r: int, route: str = "recurrence",
               normalized: bool = False) -> ExactScalar:
    """r-Whitney numbers of the second kind, q-deformed, exact.

    The raw value is h_{n-k} over the nodes [r]_q, [m+r]_q, ..., [km+r]_q.
    With normalized=True the result carries the extra factor
    q^(kr + m C(k,2)) that makes the m = r = 1 column match the shifted
    set-partition triangle at q = 1.
    """
    _check_entry(n, k)
    if m < 0 or r < 0:
        raise DomainError("whitney parameters need m >= 0 and r >= 0")
    if k > n:
        return EXACT_Q.zero
    nodes = [q_number(m * i + r) for i in range(k + 1)]
    if route == "recurrence":
        value = h_recurrence(n - k, nodes, EXACT_Q)
    elif route == "explicit":
        value = h_explicit_scaled(n - k, nodes, EXACT_Q)[0]
    else:
        raise _bad_route(route, ("recurrence", "explicit"))
    if normalized:
        value = value * ExactScalar.q_power(k * r + m * math.comb(k, 2))
    return value


def st_shifted_stirling(n: int, k: int, m: int, r: int, s: complex, t: complex,
                        route: str = "recurrence",
                        tol: Tolerance = Tolerance()) -> complex:
    """Stirling-type triangle over the two-parameter nodes [m i + r]_{s,t}."""
    _check_entry(n, k)
    if k > n:
        return complex(0.0)
    seq = STSequence(m, r, s, t, tol=tol)
    nodes = seq.window(0, k)
    if route == "recurrence":
        return h_recurrence(n - k, nodes, seq.field)
    if route == "explicit":
        return h_explicit_scaled(n - k, nodes, seq.field)[0]
    raise _bad_route(route, ("recurrence", "explicit"))


def elliptic_shifted_stirling(n: int, k: int, m: int, r: int,
                              params: EllipticParams,
                              route: str = "recurrence") -> complex:
    """Stirling-type triangle over the elliptic nodes [m i + r]."""
    _check_entry(n, k)
    if k > n:
        return complex(0.0)
    seq = EllipticSequence(params, scale=m, offset=r)
    nodes = seq.window(0, k)
    if route == "recurrence":
        return h_recurrence(n - k, nodes, seq.field)
    if route == "explicit":
        return h_explicit_scaled(n - k, nodes, seq.field)[0]
    raise _bad_route(route, ("recurrence", "explicit"))


# ---------------------------------------------------------------------------
# rook numbers on Ferrers boards
# ---------------------------------------------------------------------------

def weight_product(k: int, params: EllipticParams) -> complex:
    """prod_{j=0}^{k-1} W(j), the factor between the Newton-basis values
    here and the weighted-enumeration convention."""
    if k < 0:
        raise DomainError("weight product needs k >= 0")
    acc = complex(1.0)
    for j in range(k):
        acc *= elliptic_weight(j, params)
    return acc


@dataclass(frozen=True)
class FerrersBoard:
    """Column heights of a Ferrers board, weakly increasing left to right."""

    heights: tuple[int, ...]

    def __post_init__(self):
        hs = tuple(int(h) for h in self.heights)
        object.__setattr__(self, "heights", hs)
        if any(h < 0 for h in hs):
            raise DomainError("column heights must be >= 0")
        if any(hs[i] > hs[i + 1] for i in range(len(hs) - 1)):
            raise DomainError("column heights must be weakly increasing")

    @classmethod
    def staircase(cls, n: int) -> "FerrersBoard":
        return cls(tuple(range(n)))

    @classmethod
    def empty(cls, n: int) -> "FerrersBoard":
        return cls((0,) * n)

    @property
    def columns(self) -> int:
        return len(self.heights)


def _rook_terms(board: FerrersBoard, j: int,
                params: EllipticParams) -> list[complex]:
    n = board.columns
    k = n - j
    terms = []
    for t in range(k + 1):
        # complex z/z rounds to 1 + (1 ulp)j, so divisions that cancel
        # structurally (t = k, and bit-identical cached products on the
        # empty board) are short-circuited to keep r_0 = 1 an exact float
        if t == k:
            coef = complex(1.0)
        else:
            coef = elliptic_weight(t, params) / elliptic_weight(k, params)
        num = complex(1.0)
        for i in range(1, n + 1):
            b = board.heights[i - 1]
            u = i - 1 - b
            num *= elliptic_number_shifted(t - i + b + 1, (2 * u, u), params)
        den = complex(1.0)
        for i in range(k + 1):
            if i != t:
                den *= elliptic_number_shifted(t - i, (2 * i, i), params)
        terms.append(coef if num == den else coef * num / den)
    return terms


def elliptic_rook(board: FerrersBoard, j: int, params: EllipticParams,
                  route: str = "explicit") -> complex:
    """Rook numbers r_j of a Ferrers board over elliptic weights.

    The "explicit" route is a closed interpolation sum in which a column
    of height b contributes numbers at base shift (2u, u), u = i - 1 - b.
    Zero factors are structural there: an empty board gives r_0 = 1 and
    r_j = 0 for j > 0 as exact floats, not approximations.

    The "oracle" route expands the board product

        (prod_i W(i - 1 - b_i))^-1 prod_i ([z] - [i - 1 - b_i])

    in the Newton basis over the nodes [0], [1], ... and multiplies the
    (n, n-j) coefficient back by the first n-j weights.
    """
    return elliptic_rook_scaled(board, j, params, route)[0]


def elliptic_rook_scaled(board: FerrersBoard, j: int, params: EllipticParams,
                         route: str = "explicit") -> tuple[complex, float]:
    """Rook number plus the conditioning scale of the chosen route."""
    if not 0 <= j <= board.columns:
        raise DomainError("rook count j must lie in 0..columns")
    if route == "explicit":
        terms = _rook_terms(board, j, params)
        return sum(terms, complex(0.0)), max(1.0, *(abs(t) for t in terms))
    if route == "oracle":
        n = board.columns
        k = n - j
        seq = EllipticSequence(params)
        c0 = complex(1.0)
        for i in range(1, n + 1):
            c0 /= elliptic_weight(i - 1 - board.heights[i - 1], params)
        cs = [
            elliptic_number(i - 1 - board.heights[i - 1], params)
            for i in range(1, n + 1)
        ]
        coeff, scale = connection_explicit_scaled(c0, cs, seq, n, k)
        wp = weight_product(k, params)
        return coeff * wp, max(1.0, scale * abs(wp))
    raise _bad_route(route, ("explicit", "oracle"))


# ---------------------------------------------------------------------------
# Lah numbers
# ---------------------------------------------------------------------------

def lah(n: int, k: int) -> int:
    """Ordered-block partition counts C(n-1, k-1) n! / k!."""
    _check_entry(n, k)
    if k > n:
        return 0
    if k == 0:
        return 1 if n == 0 else 0
    return math.comb(n - 1, k - 1) * math.factorial(n) // math.factorial(k)


def _elliptic_lah_rows(n: int, params: EllipticParams) -> list[list[complex]]:
    rows = [[complex(1.0)]]
    for m in range(n):
        prev = rows[-1]
        row = []
        for k in range(m + 2):
            acc = complex(0.0)
            if k >= 1:
                acc += prev[k - 1]
            if k <= m:
                # [k] - [-m] split by the addition rule, so the triangle
                # weight is W(-m) [m+k] at base shift (-2m, -m)
                acc += (
                    elliptic_weight(-m, params)
                    * elliptic_number_shifted(m + k, (-2 * m, -m), params)
                    * prev[k]
                )
            row.append(acc)
        rows.append(row)
    return rows


def _elliptic_lah_terms(n: int, k: int,
                        params: EllipticParams) -> list[complex]:
    terms = []
    for j in range(k + 1):
        aj = elliptic_number(j, params)
        num = complex(1.0)
        for i in range(1, n + 1):
            num *= aj - elliptic_number(-n + i, params)
        den = complex(1.0)
        for i in range(k + 1):
            if i != j:
                den *= aj - elliptic_number(i, params)
        terms.append(num / den)
    return terms


def elliptic_lah(n: int, k: int, params: EllipticParams,
                 route: str = "recurrence") -> complex:
    """Lah numbers over elliptic numbers: connection coefficients from the
    rising basis prod_i ([z] + [i-1]-type nodes) to the falling one.

    Routes: "recurrence" grows the triangle with the split multiplier
    W(-n) [n+k]; "explicit" evaluates the interpolation sum with raw node
    gaps; "oracle" hands the interior nodes [0], [-1], ..., [-(n-1)] to
    the generic connection engine.  At the fully degenerate point the
    triangle collapses to the integer Lah numbers.
    """
    _check_entry(n, k)
    if k > n:
        return complex(0.0)
    if route == "recurrence":
        return _elliptic_lah_rows(n, params)[n][k]
    if route in ("explicit", "oracle"):
        return elliptic_lah_scaled(n, k, params, route)[0]
    raise _bad_route(route, ("recurrence", "explicit", "oracle"))


def elliptic_lah_scaled(n: int, k: int, params: EllipticParams,
                        route: str = "explicit") -> tuple[complex, float]:
    """Lah number plus the conditioning scale of the chosen route."""
    _check_entry(n, k)
    if k > n:
        return complex(0.0), 1.0
    if route == "explicit":
        terms = _elliptic_lah_terms(n, k, params)
        return sum(terms, complex(0.0)), max(1.0, *(abs(t) for t in terms))
    if route == "oracle":
        seq = EllipticSequence(params)
        cs = [elliptic_number(-(i - 1), params) for i in range(1, n + 1)]
        return connection_explicit_scaled(complex(1.0), cs, seq, n, k)
    raise _bad_route(route, ("explicit", "oracle"))


# ---------------------------------------------------------------------------
# table container shared with the command line front end
# ---------------------------------------------------------------------------

@dataclass
class TriangularTable:
    """Rows 0..n of one family, plus the parameters that produced them."""

    family: str
    params: dict
    rows: list[list]

    def entry(self, n: int, k: int):
        return self.rows[n][k]
