"""Seeded invariant suites behind the ``check`` command.

Every suite bundles the executable identities of one layer into
deterministic trials.  A trial draws whatever it needs (parameters,
indices, sample points) from a seeded RNG, evaluates both sides of the
identity, and reports a residual.  Draws that trip a degeneracy guard
are discarded and redrawn, so a suite always runs its full trial count;
the resample consumes RNG state, which keeps reruns byte-identical.

Residual conventions follow the library: identities with visible
summands weigh the error against the largest summand, route comparisons
against each division-bearing route's own conditioning scale.  Exact
checks report 0.0 on structural equality and 1.0 on mismatch so they
flow through the same machinery.

The functions here never print; the CLI renders the reports.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as _field
from fractions import Fraction

from .errors import DegenerateParameters, DegenerateSequence, DomainError
from .eulerian import (
    elliptic_eulerian,
    elliptic_eulerian_scaled,
    eulerian,
    general_eulerian_scaled,
    general_eulerian_rows,
    lagrange_delta,
    q_eulerian,
    q_r_whitney_eulerian,
    r_whitney_eulerian,
    worpitzky_check,
)
from .families import (
    FerrersBoard,
    elliptic_lah,
    elliptic_lah_scaled,
    elliptic_rook,
    elliptic_rook_scaled,
    elliptic_stirling2,
    elliptic_stirling2_scaled,
    lah,
    q_stirling2,
    stirling2,
    weight_product,
)
from .newton import (
    AffineWhitneySequence,
    ClassicalSequence,
    EllipticSequence,
    QNumberSequence,
    QWhitneySequence,
    connection_explicit_scaled,
    connection_recurrence,
    falling_factorial,
    h_explicit_scaled,
    h_recurrence,
    newton_oracle_scaled,
)
from .scalars import residual
from .theta import (
    EllipticParams,
    elliptic_number,
    elliptic_number_shifted,
    elliptic_weight,
    elliptic_weight_shifted,
    sample_annulus,
    sample_elliptic_params,
    theta,
    theta_multi,
)

__all__ = [
    "SUITE_NAMES",
    "DEFAULT_TOLERANCES",
    "DEFAULT_TRIALS",
    "CheckResult",
    "SuiteReport",
    "run_suite",
    "run_suites",
]

SUITE_NAMES = (
    "theta",
    "elliptic-identities",
    "h-routes",
    "connection",
    "rook",
    "lah",
    "eulerian-routes",
    "worpitzky",
    "degeneration",
)

DEFAULT_TOLERANCES = {
    "theta": 1e-9,
    "elliptic-identities": 1e-9,
    "h-routes": 1e-9,
    "connection": 1e-9,
    "rook": 1e-8,
    "lah": 1e-8,
    "eulerian-routes": 1e-7,
    "worpitzky": 1e-8,
    "degeneration": 1e-8,
}

DEFAULT_TRIALS = {
    "theta": 100,
    "elliptic-identities": 50,
}
FALLBACK_TRIALS = 25

# draws discarded by degeneracy guards before a suite gives up
RESAMPLE_LIMIT = 500


@dataclass
class CheckResult:
    name: str
    trials: int
    failed: int
    worst: float
    records: list[str] = _field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failed == 0


@dataclass
class SuiteReport:
    suite: str
    seed: int
    tol: float
    checks: list[CheckResult]

    @property
    def failures(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _run(name, trials, tol, rng, draw):
    failed = 0
    worst = 0.0
    records: list[str] = []
    done = 0
    misses = 0
    while done < trials:
        try:
            err, record = draw(rng)
        except (DegenerateParameters, DegenerateSequence):
            misses += 1
            if misses > RESAMPLE_LIMIT:
                raise
            continue
        worst = max(worst, err)
        if not err <= tol:
            failed += 1
            records.append(record)
        done += 1
    return CheckResult(name, trials, failed, worst, records)


def _param_record(params, **extra):
    bits = [
        f"a={params.a!r}",
        f"b={params.b!r}",
        f"q={params.q!r}",
        f"p={params.p!r}",
    ]
    bits.extend(f"{key}={val!r}" for key, val in extra.items())
    return " ".join(bits)


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------

def _suite_theta(trials, seed, tol):
    rng = random.Random(seed)

    def inversion(rng):
        p = rng.uniform(0.05, 0.5)
        x = sample_annulus(rng, 0.3, 1.8)
        err = residual(theta(x, p), -x * theta(1 / x, p))
        return err, f"x={x!r} p={p!r}"

    def quasi_periodicity(rng):
        p = rng.uniform(0.05, 0.5)
        x = sample_annulus(rng, 0.3, 1.8)
        err = residual(theta(p * x, p), -(1 / x) * theta(x, p))
        return err, f"x={x!r} p={p!r}"

    def three_term(rng):
        p = rng.uniform(0.05, 0.5)
        x, y, u, z = (sample_annulus(rng, 0.45, 1.5) for _ in range(4))
        lhs = theta_multi([x * y, x / y, u * z, u / z], p)
        t1 = theta_multi([u * y, u / y, x * z, x / z], p)
        t2 = (x / z) * theta_multi([z * y, z / y, u * x, u / x], p)
        err = residual(lhs, t1 + t2, t1, t2)
        return err, f"x={x!r} y={y!r} u={u!r} z={z!r} p={p!r}"

    checks = [
        _run("inversion", trials, tol, rng, inversion),
        _run("quasi-periodicity", trials, tol, rng, quasi_periodicity),
        _run("three-term", trials, tol, rng, three_term),
    ]
    return SuiteReport("theta", seed, tol, checks)


# ---------------------------------------------------------------------------
# elliptic number and weight identities
# ---------------------------------------------------------------------------

def _suite_elliptic_identities(trials, seed, tol):
    rng = random.Random(seed)

    def addition(rng):
        params = sample_elliptic_params(rng)
        y = rng.randint(-4, 5)
        z = rng.randint(-4, 5)
        lhs = elliptic_number(y + z, params)
        first = elliptic_number(y, params)
        second = elliptic_weight(y, params) * elliptic_number_shifted(
            z, (2 * y, y), params
        )
        err = residual(lhs, first + second, first, second)
        return err, _param_record(params, y=y, z=z)

    def weight_shift(rng):
        params = sample_elliptic_params(rng)
        k = rng.randint(-3, 5)
        j = rng.randint(-3, 5)
        lhs = elliptic_weight(k + j, params)
        rhs = elliptic_weight(j, params) * elliptic_weight_shifted(
            k, (2 * j, j), params
        )
        return residual(lhs, rhs), _param_record(params, k=k, j=j)

    def negation(rng):
        params = sample_elliptic_params(rng)
        k = rng.randint(1, 6)
        recip = params.with_ab(1 / params.a, params.b / params.a)
        lhs = elliptic_number(-k, params)
        rhs = -elliptic_weight(-1, params) * elliptic_number(k, recip)
        return residual(lhs, rhs), _param_record(params, k=k)

    def ellipticity_a(rng):
        params = sample_elliptic_params(rng)
        z = rng.randint(-3, 5)
        base = elliptic_number(z, params)
        moved = elliptic_number(z, params.with_ab(a=params.p * params.a))
        return residual(base, moved), _param_record(params, z=z)

    def ellipticity_b(rng):
        params = sample_elliptic_params(rng)
        z = rng.randint(-3, 5)
        base = elliptic_number(z, params)
        moved = elliptic_number(z, params.with_ab(b=params.p * params.b))
        return residual(base, moved), _param_record(params, z=z)

    checks = [
        _run("addition", trials, tol, rng, addition),
        _run("weight-shift", trials, tol, rng, weight_shift),
        _run("negation", trials, tol, rng, negation),
        _run("ellipticity-a", trials, tol, rng, ellipticity_a),
        _run("ellipticity-b", trials, tol, rng, ellipticity_b),
    ]
    return SuiteReport("elliptic-identities", seed, tol, checks)


# ---------------------------------------------------------------------------
# complete homogeneous routes
# ---------------------------------------------------------------------------

def _suite_h_routes(trials, seed, tol):
    rng = random.Random(seed)

    def elliptic_routes(rng):
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        seq = EllipticSequence(params)
        values = seq.window(0, k)
        field = seq.field
        rec = h_recurrence(n - k, values, field)
        exp_, s_exp = h_explicit_scaled(n - k, values, field)
        coeffs, s_orc = newton_oracle_scaled(
            [seq[i] ** n for i in range(n + 1)], seq, n
        )
        orc = coeffs[k]
        err = max(
            abs(rec - exp_) / max(1.0, abs(rec), s_exp),
            abs(rec - orc) / max(1.0, abs(rec), s_orc),
            abs(exp_ - orc) / max(1.0, abs(exp_), s_exp, s_orc),
        )
        return err, _param_record(params, n=n, k=k)

    def exact_q_routes(rng):
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        seq = QNumberSequence()
        values = seq.window(0, k)
        rec = h_recurrence(n - k, values, seq.field)
        exp_ = h_explicit_scaled(n - k, values, seq.field)[0]
        orc = newton_oracle_scaled(
            [seq[i] ** n for i in range(n + 1)], seq, n
        )[0][k]
        ok = rec == exp_ == orc
        return (0.0 if ok else 1.0), f"n={n} k={k}"

    checks = [
        _run("elliptic-routes", trials, tol, rng, elliptic_routes),
        _run("exact-q-routes", trials, tol, rng, exact_q_routes),
    ]
    return SuiteReport("h-routes", seed, tol, checks)


# ---------------------------------------------------------------------------
# connection coefficients
# ---------------------------------------------------------------------------

def _suite_connection(trials, seed, tol):
    rng = random.Random(seed)

    def routes(rng):
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 5)
        seq = EllipticSequence(params)
        offset = rng.randint(-2, 2)
        cs = [elliptic_number(offset - (i - 1), params) for i in range(1, n + 1)]
        c0 = complex(1.0)
        rows = connection_recurrence(c0, cs, seq)
        f_values = []
        for zi in range(n + 1):
            acc = c0
            for c in cs:
                acc = acc * (seq[zi] - c)
            f_values.append(acc)
        coeffs, s_orc = newton_oracle_scaled(f_values, seq, n)
        worst = 0.0
        for k in range(n + 1):
            exp_, s_exp = connection_explicit_scaled(c0, cs, seq, n, k)
            rec = rows[n][k]
            worst = max(
                worst,
                abs(rec - exp_) / max(1.0, abs(rec), s_exp),
                abs(rec - coeffs[k]) / max(1.0, abs(rec), s_orc),
            )
        return worst, _param_record(params, n=n, offset=offset)

    def newton_expansion(rng):
        # the defining identity itself, evaluated at one random grid point
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 5)
        seq = EllipticSequence(params)
        offset = rng.randint(-2, 2)
        cs = [elliptic_number(offset - (i - 1), params) for i in range(1, n + 1)]
        c0 = complex(1.0)
        rows = connection_recurrence(c0, cs, seq)
        zi = rng.randint(0, n + 3)
        z = seq[zi]
        lhs = c0
        for c in cs:
            lhs = lhs * (z - c)
        terms = [
            rows[n][k] * falling_factorial(z, seq, k) for k in range(n + 1)
        ]
        rhs = sum(terms, complex(0.0))
        err = residual(lhs, rhs, *terms)
        return err, _param_record(params, n=n, offset=offset, zi=zi)

    checks = [
        _run("routes", trials, tol, rng, routes),
        _run("newton-expansion", trials, tol, rng, newton_expansion),
    ]
    return SuiteReport("connection", seed, tol, checks)


# ---------------------------------------------------------------------------
# rook numbers
# ---------------------------------------------------------------------------

def _random_board(rng):
    n = rng.randint(1, 4)
    heights = sorted(rng.randint(0, 4) for _ in range(n))
    return FerrersBoard(tuple(heights))


def _suite_rook(trials, seed, tol):
    rng = random.Random(seed)

    def route_agreement(rng):
        params = sample_elliptic_params(rng)
        board = _random_board(rng)
        j = rng.randint(0, len(board.heights))
        exp_, s_exp = elliptic_rook_scaled(board, j, params, "explicit")
        orc, s_orc = elliptic_rook_scaled(board, j, params, "oracle")
        err = abs(exp_ - orc) / max(1.0, abs(exp_), s_exp, s_orc)
        return err, _param_record(params, board=board.heights, j=j)

    def staircase_stirling(rng):
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 5)
        k = rng.randint(0, n)
        board = FerrersBoard.staircase(n)
        rook, s_rook = elliptic_rook_scaled(board, n - k, params, "explicit")
        stir, s_stir = elliptic_stirling2_scaled(n, k, params, "explicit")
        scaled = stir * weight_product(k, params)
        err = abs(rook - scaled) / max(1.0, abs(rook), s_rook, s_stir)
        return err, _param_record(params, n=n, k=k)

    def empty_board(rng):
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 5)
        board = FerrersBoard.empty(n)
        ok = elliptic_rook(board, 0, params) == 1.0 and all(
            elliptic_rook(board, j, params) == 0.0 for j in range(1, n + 1)
        )
        return (0.0 if ok else 1.0), _param_record(params, n=n)

    checks = [
        _run("route-agreement", trials, tol, rng, route_agreement),
        _run("staircase-stirling", trials, tol, rng, staircase_stirling),
        _run("empty-board", trials, tol, rng, empty_board),
    ]
    return SuiteReport("rook", seed, tol, checks)


# ---------------------------------------------------------------------------
# Lah numbers
# ---------------------------------------------------------------------------

def _suite_lah(trials, seed, tol):
    rng = random.Random(seed)

    def routes(rng):
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 5)
        k = rng.randint(0, n)
        rec = elliptic_lah(n, k, params, "recurrence")
        exp_, s_exp = elliptic_lah_scaled(n, k, params, "explicit")
        orc, s_orc = elliptic_lah_scaled(n, k, params, "oracle")
        err = max(
            abs(rec - exp_) / max(1.0, abs(rec), s_exp),
            abs(rec - orc) / max(1.0, abs(rec), s_orc),
            abs(exp_ - orc) / max(1.0, abs(exp_), s_exp, s_orc),
        )
        return err, _param_record(params, n=n, k=k)

    def classical_point(rng):
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        flat = EllipticParams(a=0, b=0, q=1, p=0)
        got = elliptic_lah(n, k, flat, "recurrence")
        err = abs(got - lah(n, k))
        # the same integers must fall out of the connection oracle over
        # the classical nodes with c_i = -(i - 1)
        seq = ClassicalSequence()
        cs = [Fraction(-(i - 1)) for i in range(1, n + 1)]
        rows = connection_recurrence(Fraction(1), cs, seq)
        if rows[n][k] != lah(n, k):
            err = max(err, 1.0)
        return err, f"n={n} k={k}"

    checks = [
        _run("routes", trials, tol, rng, routes),
        _run("classical-point", trials, tol, rng, classical_point),
    ]
    return SuiteReport("lah", seed, tol, checks)


# ---------------------------------------------------------------------------
# Eulerian routes
# ---------------------------------------------------------------------------

def _suite_eulerian_routes(trials, seed, tol):
    rng = random.Random(seed)

    def elliptic_routes(rng):
        params = sample_elliptic_params(rng)
        n = rng.randint(1, 5)
        k = rng.randint(0, n)
        rec = elliptic_eulerian(n, k, params, "recurrence")
        exp_, s_exp = elliptic_eulerian_scaled(n, k, params)
        eng, s_eng = general_eulerian_scaled(n, k, EllipticSequence(params))
        err = max(
            abs(rec - exp_) / max(1.0, abs(rec), s_exp),
            abs(rec - eng) / max(1.0, abs(rec), s_eng),
            abs(exp_ - eng) / max(1.0, abs(exp_), s_exp, s_eng),
        )
        return err, _param_record(params, n=n, k=k)

    def r_whitney_exact(rng):
        m = rng.randint(1, 3)
        r = rng.randint(0, m - 1)
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        direct = r_whitney_eulerian(n, k, m, r, "direct")
        engine = r_whitney_eulerian(n, k, m, r, "engine")
        return (0.0 if direct == engine else 1.0), f"m={m} r={r} n={n} k={k}"

    def q_r_whitney_exact(rng):
        m = rng.randint(1, 3)
        r = rng.randint(0, m - 1)
        n = rng.randint(1, 5)
        k = rng.randint(0, n)
        rec = q_r_whitney_eulerian(n, k, m, r, "recurrence")
        exp_ = q_r_whitney_eulerian(n, k, m, r, "explicit")
        eng = q_r_whitney_eulerian(n, k, m, r, "engine")
        ok = rec == exp_ == eng
        return (0.0 if ok else 1.0), f"m={m} r={r} n={n} k={k}"

    def delta_identity(rng):
        params = sample_elliptic_params(rng)
        seq = EllipticSequence(params)
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        l = rng.randint(0, k)
        got = lagrange_delta(n, k, l, seq, max_scale=1e5)
        want = 1.0 if k == l else 0.0
        return abs(got - want), _param_record(params, n=n, k=k, l=l)

    checks = [
        _run("elliptic-routes", trials, tol, rng, elliptic_routes),
        _run("r-whitney-exact", trials, tol, rng, r_whitney_exact),
        _run("q-r-whitney-exact", trials, tol, rng, q_r_whitney_exact),
        _run("delta-identity", trials, tol, rng, delta_identity),
    ]
    return SuiteReport("eulerian-routes", seed, tol, checks)


# ---------------------------------------------------------------------------
# Worpitzky expansion
# ---------------------------------------------------------------------------

def _suite_worpitzky(trials, seed, tol):
    rng = random.Random(seed)

    def exact_families(rng):
        m = rng.randint(1, 3)
        r = rng.randint(0, m - 1)
        factories = (
            lambda: ClassicalSequence(),
            lambda: QNumberSequence(),
            lambda: AffineWhitneySequence(m, r),
            lambda: QWhitneySequence(m, r),
        )
        seq = factories[rng.randrange(len(factories))]()
        n = rng.randint(1, 6)
        row = general_eulerian_rows(seq, n)[n]
        for zi in range(-2, n + 4):
            lhs, rhs, _ = worpitzky_check(n, seq, seq[zi], row=row)
            if lhs != rhs:
                return 1.0, f"seq={type(seq).__name__} m={m} r={r} n={n} zi={zi}"
        return 0.0, f"seq={type(seq).__name__} m={m} r={r} n={n}"

    def elliptic(rng):
        params = sample_elliptic_params(rng)
        seq = EllipticSequence(params)
        n = rng.randint(1, 6)
        row = general_eulerian_rows(seq, n)[n]
        worst = 0.0
        for _ in range(20):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            lhs, rhs, terms = worpitzky_check(n, seq, z, row=row)
            worst = max(worst, residual(lhs, rhs, *terms))
        return worst, _param_record(params, n=n)

    checks = [
        _run("exact-families", trials, tol, rng, exact_families),
        _run("elliptic", trials, tol, rng, elliptic),
    ]
    return SuiteReport("worpitzky", seed, tol, checks)


# ---------------------------------------------------------------------------
# degeneration lattice
# ---------------------------------------------------------------------------

def _suite_degeneration(trials, seed, tol):
    rng = random.Random(seed)

    def stirling_chain(rng):
        qv = sample_annulus(rng, 0.4, 0.9)
        flat = EllipticParams(a=0, b=0, q=qv, p=0)
        n = rng.randint(1, 5)
        k = rng.randint(0, n)
        got = elliptic_stirling2(n, k, flat, "recurrence")
        want = q_stirling2(n, k).evaluate(qv)
        return residual(got, want), f"q={qv!r} n={n} k={k}"

    def eulerian_chain(rng):
        qv = sample_annulus(rng, 0.4, 0.9)
        flat = EllipticParams(a=0, b=0, q=qv, p=0)
        n = rng.randint(1, 5)
        k = rng.randint(0, n)
        got = elliptic_eulerian(n, k, flat, "recurrence")
        want = q_eulerian(n, k).evaluate(qv)
        return residual(got, want), f"q={qv!r} n={n} k={k}"

    def lah_chain(rng):
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        flat = EllipticParams(a=0, b=0, q=1, p=0)
        got = elliptic_lah(n, k, flat, "recurrence")
        return abs(got - lah(n, k)), f"n={n} k={k}"

    def classical_point(rng):
        n = rng.randint(1, 6)
        k = rng.randint(0, n)
        s_err = abs(q_stirling2(n, k).evaluate(1.0) - stirling2(n, k))
        e_err = abs(q_eulerian(n, k).evaluate(1.0) - eulerian(n, k))
        return max(s_err, e_err), f"n={n} k={k}"

    checks = [
        _run("stirling-chain", trials, tol, rng, stirling_chain),
        _run("eulerian-chain", trials, tol, rng, eulerian_chain),
        _run("lah-chain", trials, tol, rng, lah_chain),
        _run("classical-point", trials, tol, rng, classical_point),
    ]
    return SuiteReport("degeneration", seed, tol, checks)


_SUITES = {
    "theta": _suite_theta,
    "elliptic-identities": _suite_elliptic_identities,
    "h-routes": _suite_h_routes,
    "connection": _suite_connection,
    "rook": _suite_rook,
    "lah": _suite_lah,
    "eulerian-routes": _suite_eulerian_routes,
    "worpitzky": _suite_worpitzky,
    "degeneration": _suite_degeneration,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0,
              tol: float | None = None) -> SuiteReport:
    """Run one named suite; None picks the suite's default trials/tol."""
    if name not in _SUITES:
        raise DomainError(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or all"
        )
    if trials is None:
        trials = DEFAULT_TRIALS.get(name, FALLBACK_TRIALS)
    if trials < 0:
        raise DomainError("trials must be >= 0")
    if tol is None:
        tol = DEFAULT_TOLERANCES[name]
    if not tol > 0:
        raise DomainError("tol must be positive")
    return _SUITES[name](trials, seed, tol)


def run_suites(name: str, trials: int | None = None, seed: int = 0,
               tol: float | None = None) -> list[SuiteReport]:
    """Run one suite, or every suite in canonical order for "all"."""
    if name == "all":
        return [run_suite(s, trials, seed, tol) for s in SUITE_NAMES]
    return [run_suite(name, trials, seed, tol)]
