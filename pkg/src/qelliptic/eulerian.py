"""Eulerian triangles: classical, q-deformed, r-Whitney, and elliptic.

The unifying object is a node sequence a = (a_i).  The generalized
Eulerian numbers A(n, k) over a are defined by the interpolation identity

    z^n = sum_k A(n, k) prod_{i=1}^n (z - a_{i-k}) / (a_{n-k+1} - a_{i-k}),

so each row is again a set of connection coefficients, this time with
denominators built in.  The generic engine below computes them two ways
for any injective sequence: a triangle recurrence whose correction factor
P(n, k) is a product of gap quotients, and the explicit Lagrange sum read
off the identity.  Specializing the sequence reproduces the named
triangles, and the named direct implementations are kept alongside the
engine so the two can be compared entry by entry:

    a_i = i                 classical Eulerian numbers
    a_i = [i]_q             the standard q-Eulerian triangle
    a_i = m i - r           r-Whitney Eulerian numbers
    a_i = [m i - r]_q       their q-deformation
    a_i = [m i - r]         the elliptic level

The identity itself (worpitzky_check) and the orthogonality relation
behind it (lagrange_delta) are exported as executable checks.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DegenerateSequence, DomainError
from .newton import (
    DISTINCTNESS_REL,
    AffineWhitneySequence,
    EllipticSequence,
    QNumberSequence,
    QWhitneySequence,
    ValueSequence,
    pairwise_distinct_guard,
)
from .scalars import (
    EXACT_Q,
    ExactScalar,
    q_binomial,
    q_int_power,
    q_number,
)
from .theta import (
    EllipticParams,
    elliptic_number,
    elliptic_number_shifted,
    elliptic_weight_shifted,
)

__all__ = [
    "eulerian",
    "q_eulerian",
    "r_whitney_eulerian",
    "q_r_whitney_eulerian",
    "elliptic_eulerian",
    "elliptic_eulerian_scaled",
    "elliptic_r_whitney_eulerian",
    "elliptic_r_whitney_eulerian_scaled",
    "general_eulerian",
    "general_eulerian_scaled",
    "general_eulerian_rows",
    "worpitzky_check",
    "lagrange_delta",
]


def _check_entry(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise DomainError("triangle entries need n >= 0 and k >= 0")


def _bad_route(route: str, allowed: tuple[str, ...]):
    return DomainError(f"unknown route {route!r}, expected one of {allowed}")


# ---------------------------------------------------------------------------
# the generic engine
# ---------------------------------------------------------------------------

def _guard_window(seq: ValueSequence, n: int,
                  rel: float = DISTINCTNESS_REL) -> None:
    # the recurrence and the explicit sum subtract nodes across [-n, n+2];
    # refuse the whole window if any two of them (nearly) coincide
    if not seq.field.exact:
        pairwise_distinct_guard(seq.window(-n, n + 2), seq.field, rel=rel)


def general_eulerian_rows(seq: ValueSequence, N: int) -> list[list]:
    """Rows 0..N of the Eulerian triangle over the given nodes.

    A(n+1, k) = a_{n-k+2} A(n, k-1) - a_{-k} P(n, k) A(n, k) with

        P(n, k) = prod_{i=1}^{n+1} (a_{n-k+2} - a_{i-k})
                                 / (a_{n-k+1} - a_{i-1-k}),

    a product that collapses to 1 for affine nodes and to a power of q
    for q-numbers but must be carried in full beyond that.
    """
    if N < 0:
        raise DomainError("need N >= 0")
    field = seq.field
    _guard_window(seq, N)
    rows = [[field.one]]
    for n in range(N):
        prev = rows[-1]
        row = []
        for k in range(n + 2):
            acc = field.zero
            if k >= 1:
                acc = acc + seq[n - k + 2] * prev[k - 1]
            if k <= n:
                p = field.one
                for i in range(1, n + 2):
                    p = p * field.div(
                        seq[n - k + 2] - seq[i - k],
                        seq[n - k + 1] - seq[i - 1 - k],
                    )
                acc = acc + (-seq[-k]) * p * prev[k]
            row.append(acc)
        rows.append(row)
    return rows


def _gap_amplification(u, v) -> float:
    # subtracting nearly equal nodes leaves a result whose relative error
    # is the working precision divided by this factor
    d = abs(u - v)
    return max(1.0, abs(u), abs(v)) / d if d > 0.0 else float("inf")


def _general_explicit_terms(n: int, k: int, seq: ValueSequence):
    field = seq.field
    terms = []
    amp = 1.0
    for j in range(k + 1):
        ratio = field.one
        for i in range(n + 1):
            if i != k - j:
                num = seq[n - k + 1] - seq[i - k]
                den = seq[-j] - seq[i - k]
                if not field.exact:
                    amp = max(
                        amp,
                        _gap_amplification(seq[n - k + 1], seq[i - k]),
                        _gap_amplification(seq[-j], seq[i - k]),
                    )
                ratio = ratio * field.div(num, den)
        terms.append(ratio * seq[-j] ** n)
    return terms, amp


def general_eulerian(n: int, k: int, seq: ValueSequence,
                     route: str = "recurrence"):
    """One entry of the Eulerian triangle over arbitrary nodes."""
    _check_entry(n, k)
    if k > n:
        return seq.field.zero
    if route == "recurrence":
        return general_eulerian_rows(seq, n)[n][k]
    if route == "explicit":
        return general_eulerian_scaled(n, k, seq)[0]
    raise _bad_route(route, ("recurrence", "explicit"))


def general_eulerian_scaled(n: int, k: int, seq: ValueSequence):
    """Explicit-route entry plus its conditioning scale.

    The scale is the largest summand magnitude times the worst node-gap
    amplification met while forming the quotients, so an honest residual
    for this route is ``abs(err) / max(1, abs(value), scale)``.
    """
    _check_entry(n, k)
    field = seq.field
    if k > n:
        return field.zero, 1.0
    _guard_window(seq, n)
    terms, amp = _general_explicit_terms(n, k, seq)
    total = field.zero
    largest = 1.0
    for t in terms:
        if not field.exact:
            largest = max(largest, abs(t))
        total = total + t
    return total, largest * amp


def worpitzky_check(n: int, seq: ValueSequence, z, row=None):
    """Both sides of the power expansion at one point z, plus the summands.

    Returns (lhs, rhs, terms) where lhs = z^n and rhs = sum(terms); exact
    callers assert lhs == rhs, numeric ones weigh |lhs - rhs| against the
    term magnitudes.  Pass a precomputed triangle row to amortize table
    construction over many sample points.
    """
    if n < 0:
        raise DomainError("need n >= 0")
    field = seq.field
    if row is None:
        row = general_eulerian_rows(seq, n)[n]
    terms = []
    for k in range(n + 1):
        factor = row[k]
        for i in range(1, n + 1):
            factor = factor * field.div(
                z - seq[i - k], seq[n - k + 1] - seq[i - k]
            )
        terms.append(factor)
    rhs = field.zero
    for t in terms:
        rhs = rhs + t
    return z ** n, rhs, terms


def lagrange_delta(n: int, k: int, l: int, seq: ValueSequence,
                   rel: float = DISTINCTNESS_REL,
                   max_scale: float | None = None):
    """The orthogonality sum behind the explicit formula.

    sum_{j=l}^{k} of the explicit-formula ratio at (n, k, j) times the
    basis polynomial for column l evaluated at a_{-j}; it must come out
    to 1 when k = l and 0 for l < k.

    The summands cancel, and each one is accurate only relative to its
    own magnitude, so the absolute error of the result is roughly the
    working precision times the largest summand.  Numeric callers that
    hold the result to an absolute tolerance should pass ``max_scale``
    (largest summand magnitude they can absorb, e.g. 1e5 for 1e-9) and
    resample their parameters on DegenerateSequence.  ``rel`` is
    forwarded to the node distinctness guard.
    """
    if not 0 <= l <= k <= n:
        raise DomainError("need 0 <= l <= k <= n")
    field = seq.field
    _guard_window(seq, n, rel=rel)
    total = field.zero
    for j in range(l, k + 1):
        ratio = field.one
        for i in range(n + 1):
            if i != k - j:
                ratio = ratio * field.div(
                    seq[n - k + 1] - seq[i - k], seq[-j] - seq[i - k]
                )
        basis = field.one
        for i in range(1, n + 1):
            basis = basis * field.div(
                seq[-j] - seq[i - l], seq[n - l + 1] - seq[i - l]
            )
        term = ratio * basis
        if (max_scale is not None and not field.exact
                and abs(term) > max_scale):
            raise DegenerateSequence(
                f"orthogonality summand reached {abs(term):.3e}, past the "
                f"requested bound {max_scale:.1e}; the node window cannot "
                "support the target tolerance"
            )
        total = total + term
    return total


# ---------------------------------------------------------------------------
# classical and q
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _eulerian_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _eulerian_row(n - 1)
    row = []
    for k in range(n + 1):
        v = 0
        if k >= 1:
            v += (n - k + 1) * prev[k - 1]
        if k <= n - 1:
            v += k * prev[k]
        row.append(v)
    return tuple(row)


def eulerian(n: int, k: int, route: str = "recurrence") -> int:
    """Descent counts A(n, k); row 3 reads 0, 1, 4, 1."""
    _check_entry(n, k)
    if k > n:
        return 0
    if route == "recurrence":
        return _eulerian_row(n)[k]
    if route == "explicit":
        return sum(
            (-1) ** j * math.comb(n + 1, j) * (k - j) ** n for j in range(k + 1)
        )
    raise _bad_route(route, ("recurrence", "explicit"))


@lru_cache(maxsize=None)
def _q_eulerian_row(n: int) -> tuple[ExactScalar, ...]:
    if n == 0:
        return (ExactScalar.from_int(1),)
    prev = _q_eulerian_row(n - 1)
    m = n - 1
    row = []
    for k in range(n + 1):
        v = EXACT_Q.zero
        if k >= 1:
            v = v + q_number(m - k + 2) * prev[k - 1]
        if k <= m:
            v = v + ExactScalar.q_power(m - k + 1) * q_number(k) * prev[k]
        row.append(v)
    return tuple(row)


def q_eulerian(n: int, k: int, route: str = "recurrence") -> ExactScalar:
    """q-Eulerian numbers, exact in q.

    The recurrence uses the multipliers [n-k+2]_q and q^(n-k+1) [k]_q;
    the explicit route is the alternating sum with Gaussian binomials;
    "engine" runs the generic machinery over the nodes [i]_q, exercising
    the same gap quotients the elliptic level needs.  Row n sums to
    [n]_q! whichever way it is computed.
    """
    _check_entry(n, k)
    if k > n:
        return EXACT_Q.zero
    if route == "recurrence":
        return _q_eulerian_row(n)[k]
    if route == "explicit":
        total = EXACT_Q.zero
        for j in range(k + 1):
            term = (
                ExactScalar.q_power(math.comb(j, 2))
                * q_binomial(n + 1, j)
                * q_int_power(k - j, n)
            )
            if j % 2:
                term = -term
            total = total + term
        return ExactScalar.q_power(
            math.comb(n - k + 1, 2) - math.comb(k, 2)
        ) * total
    if route == "engine":
        return general_eulerian(n, k, QNumberSequence())
    raise _bad_route(route, ("recurrence", "explicit", "engine"))


# ---------------------------------------------------------------------------
# r-Whitney levels
# ---------------------------------------------------------------------------

def r_whitney_eulerian(n: int, k: int, m: int, r: int,
                       route: str = "direct") -> int:
    """Eulerian numbers over the affine nodes m i - r, integer valued."""
    _check_entry(n, k)
    if m < 1 or r < 0:
        raise DomainError("need m >= 1 and r >= 0")
    if k > n:
        return 0
    if route == "direct":
        row = [1]
        for step in range(n):
            nxt = []
            for kk in range(step + 2):
                v = 0
                if kk >= 1:
                    v += (m * (step - kk + 2) - r) * row[kk - 1]
                if kk <= step:
                    v += (m * kk + r) * row[kk]
                nxt.append(v)
            row = nxt
        return row[k]
    if route == "engine":
        value = general_eulerian(n, k, AffineWhitneySequence(m, r))
        assert value.denominator == 1
        return int(value)
    raise _bad_route(route, ("direct", "engine"))


def q_r_whitney_eulerian(n: int, k: int, m: int, r: int,
                         route: str = "recurrence") -> ExactScalar:
    """q-deformed r-Whitney Eulerian numbers, exact in q.

    Three routes again: the direct triangle with multipliers
    [m(n-k+2) - r]_q and q^(m(n+1) - mk - r) [mk + r]_q, the alternating
    explicit sum whose binomials live in base q^m, and the generic engine
    over the nodes [m i - r]_q.  m = 1, r = 0 collapses everything onto
    the plain q-Eulerian triangle.
    """
    _check_entry(n, k)
    if m < 1 or r < 0:
        raise DomainError("need m >= 1 and r >= 0")
    if k > n:
        return EXACT_Q.zero
    if route == "recurrence":
        row = [ExactScalar.from_int(1)]
        for step in range(n):
            nxt = []
            for kk in range(step + 2):
                v = EXACT_Q.zero
                if kk >= 1:
                    v = v + q_number(m * (step - kk + 2) - r) * row[kk - 1]
                if kk <= step:
                    v = v + (
                        ExactScalar.q_power(m * (step + 1) - m * kk - r)
                        * q_number(m * kk + r)
                        * row[kk]
                    )
                nxt.append(v)
            row = nxt
        return row[k]
    if route == "explicit":
        total = EXACT_Q.zero
        for j in range(k + 1):
            term = (
                ExactScalar.q_power(
                    m * math.comb(n - j + 1, 2) - n * (m * (k - j) + r)
                )
                * q_binomial(n + 1, j).stretch(m)
                * q_int_power(m * (k - j) + r, n)
            )
            if j % 2:
                term = -term
            total = total + term
        return total
    if route == "engine":
        return general_eulerian(n, k, QWhitneySequence(m, r))
    raise _bad_route(route, ("recurrence", "explicit", "engine"))


# ---------------------------------------------------------------------------
# elliptic levels
# ---------------------------------------------------------------------------

def _elliptic_eulerian_rows(N: int, params: EllipticParams) -> list[list[complex]]:
    rows = [[complex(1.0)]]
    for n in range(N):
        prev = rows[-1]
        row = []
        for k in range(n + 2):
            acc = complex(0.0)
            if k >= 1:
                acc += elliptic_number(n - k + 2, params) * prev[k - 1]
            if k <= n:
                # the gap-quotient product, with every weight telescoped
                # into a single shifted one so no 1/a inversion is needed
                p = elliptic_weight_shifted(n + 1, (-2 * k, -k), params)
                for i in range(1, n + 2):
                    u = i - k
                    p *= elliptic_number_shifted(n - i + 2, (2 * u, u), params)
                    p /= elliptic_number_shifted(n - i + 2, (2 * (u - 1), u - 1), params)
                acc += -elliptic_number(-k, params) * p * prev[k]
            row.append(acc)
        rows.append(row)
    return rows


def _elliptic_explicit_terms(n: int, k: int,
                             params: EllipticParams) -> list[complex]:
    terms = []
    for j in range(k + 1):
        ratio = complex(1.0)
        for i in range(n + 1):
            if i != k - j:
                u = i - k
                ratio *= elliptic_number_shifted(n - i + 1, (2 * u, u), params)
                ratio /= elliptic_number_shifted(k - j - i, (2 * u, u), params)
        terms.append(ratio * elliptic_number(-j, params) ** n)
    return terms


def elliptic_eulerian(n: int, k: int, params: EllipticParams,
                      route: str = "recurrence") -> complex:
    """Eulerian numbers over elliptic nodes [i].

    The "recurrence" route keeps the correction product in its weight
    form, every factor a shifted number or weight with its own
    degeneracy guard; "explicit" is the interpolation sum after the
    weights cancel; "engine" recomputes either from raw node gaps.  The
    three agree up to the conditioning of the gaps encountered.
    """
    _check_entry(n, k)
    if k > n:
        return complex(0.0)
    if route == "recurrence":
        return _elliptic_eulerian_rows(n, params)[n][k]
    if route == "explicit":
        return elliptic_eulerian_scaled(n, k, params)[0]
    if route == "engine":
        return general_eulerian(n, k, EllipticSequence(params))
    raise _bad_route(route, ("recurrence", "explicit", "engine"))


def elliptic_eulerian_scaled(n: int, k: int,
                             params: EllipticParams) -> tuple[complex, float]:
    """Explicit-route entry and its largest summand magnitude."""
    _check_entry(n, k)
    if k > n:
        return complex(0.0), 1.0
    terms = _elliptic_explicit_terms(n, k, params)
    return sum(terms, complex(0.0)), max(1.0, *(abs(t) for t in terms))


def elliptic_r_whitney_eulerian(n: int, k: int, m: int, r: int,
                                params: EllipticParams,
                                route: str = "recurrence") -> complex:
    """Eulerian triangle over the elliptic nodes [m i - r], via the engine."""
    _check_entry(n, k)
    if m < 1 or r < 0:
        raise DomainError("need m >= 1 and r >= 0")
    if k > n:
        return complex(0.0)
    seq = EllipticSequence(params, scale=m, offset=-r)
    if route in ("recurrence", "explicit"):
        return general_eulerian(n, k, seq, route)
    raise _bad_route(route, ("recurrence", "explicit"))


def elliptic_r_whitney_eulerian_scaled(
        n: int, k: int, m: int, r: int,
        params: EllipticParams) -> tuple[complex, float]:
    """Explicit-route entry and scale over the nodes [m i - r]."""
    _check_entry(n, k)
    if k > n:
        return complex(0.0), 1.0
    seq = EllipticSequence(params, scale=m, offset=-r)
    return general_eulerian_scaled(n, k, seq)
