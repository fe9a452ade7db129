"""Numeric theta functions, elliptic numbers and elliptic weights.

Everything here is double-precision complex.  The central object is the
multiplicative theta function

    theta(x; p) = prod_{j >= 0} (1 - p^j x) (1 - p^(j+1) / x),

truncated at a policy-controlled order, together with the elliptic number
[z]_{a,b;q,p} and the elliptic weight W_{a,b;q,p}(k) built as quotients of
theta values.  Degenerate parameter chains (p = 0, then a = 0, then b = 0,
finally q = 1) are evaluated through closed forms, never as numeric limits,
so the same entry points cover the elliptic, q-analogue and classical ends
of the lattice.

Every theta factor that lands in a denominator is guarded: a modulus below
``min_denominator`` raises DegenerateParameters naming the factor.  Values
are memoized per parameter set, keyed by the integer (alpha, beta) exponent
pair of the shift a -> a q^alpha, b -> b q^beta; results do not depend on
cache state, so concurrent readers are safe.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from .errors import DegenerateParameters, DomainError

__all__ = [
    "ThetaPolicy",
    "EllipticParams",
    "theta",
    "theta_multi",
    "elliptic_number",
    "elliptic_number_shifted",
    "elliptic_weight",
    "elliptic_weight_shifted",
    "sample_annulus",
    "sample_elliptic_params",
    "DEFAULT_MIN_DENOMINATOR",
]

DEFAULT_MIN_DENOMINATOR = 1e-6
_TWO_PI = 2 * math.pi


def qpow(base: complex, z) -> complex:
    """base ** z: repeated multiplication for integer z, principal branch else."""
    if isinstance(z, complex):
        if z.imag == 0:
            z = z.real
        else:
            return cmath.exp(z * cmath.log(base))
    if isinstance(z, float) and z.is_integer():
        z = int(z)
    if isinstance(z, int):
        return base ** z
    return cmath.exp(z * cmath.log(base))


@dataclass(frozen=True)
class ThetaPolicy:
    """Truncation policy for theta products.

    The invariant truncation_order >= ceil(log(target_eps) / log(|p|)) keeps
    the dropped tail below target_eps; `for_nome` constructs the smallest
    compliant order but never less than 24 factors.
    """

    truncation_order: int
    target_eps: float = 1e-16

    def __post_init__(self):
        if self.truncation_order < 1:
            raise DomainError("truncation order must be positive")
        if not 0 < self.target_eps < 1:
            raise DomainError("target_eps must lie in (0, 1)")

    @classmethod
    def for_nome(cls, p: complex, target_eps: float = 1e-16) -> "ThetaPolicy":
        if p == 0:
            return cls(24, target_eps)
        needed = math.ceil(math.log(target_eps) / math.log(abs(p)))
        return cls(max(24, needed), target_eps)

    def admits(self, p: complex) -> bool:
        if p == 0:
            return True
        return self.truncation_order >= math.ceil(
            math.log(self.target_eps) / math.log(abs(p))
        )


def theta(x: complex, p: complex, policy: ThetaPolicy | None = None) -> complex:
    """Modified Jacobi theta function; exactly 1 - x when p = 0."""
    if x == 0:
        raise DomainError("theta argument must be nonzero")
    if abs(p) >= 1:
        raise DomainError("theta nome needs |p| < 1")
    if p == 0:
        return 1 - x
    if policy is None:
        policy = ThetaPolicy.for_nome(p)
    acc = 1 + 0j
    pj = 1 + 0j
    inv = 1 / x
    for _ in range(policy.truncation_order):
        acc *= (1 - pj * x) * (1 - pj * p * inv)
        pj *= p
    return acc


def theta_multi(xs, p: complex, policy: ThetaPolicy | None = None) -> complex:
    """Product of theta(x; p) over the given arguments (1 for an empty list)."""
    if p != 0 and policy is None:
        policy = ThetaPolicy.for_nome(p)
    acc = 1 + 0j
    for x in xs:
        acc *= theta(x, p, policy)
    return acc


@dataclass(frozen=True, eq=False)
class EllipticParams:
    """Parameter pack (a, b; q, p) for elliptic numbers and weights.

    Generic use requires a, b, q nonzero and |p| < 1.  The degeneration
    chain is first-class: p = 0 with a, b arbitrary; then a = 0 (only with
    p = 0); then b = 0 (only with a = 0); q = 1 is legal only on the fully
    degenerate end, where the closed forms turn into classical integers.
    """

    a: complex
    b: complex
    q: complex
    p: complex
    min_denominator: float = DEFAULT_MIN_DENOMINATOR
    policy: ThetaPolicy | None = None
    _num_cache: dict = field(
        default_factory=dict, repr=False, compare=False, hash=False
    )
    _wt_cache: dict = field(
        default_factory=dict, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "p", complex(self.p))
        if self.q == 0:
            raise DomainError("q must be nonzero")
        if abs(self.p) >= 1:
            raise DomainError("nome needs |p| < 1")
        if self.p != 0 and (self.a == 0 or self.b == 0):
            raise DomainError("a = 0 or b = 0 requires p = 0 first")
        if self.b == 0 and self.a != 0:
            raise DomainError("b = 0 requires a = 0 first")
        if self.q == 1 and not (self.p == 0 and self.a == 0 and self.b == 0):
            raise DomainError("q = 1 is only legal on the fully degenerate chain")
        if self.policy is None:
            object.__setattr__(self, "policy", ThetaPolicy.for_nome(self.p))

    @property
    def degenerate(self) -> bool:
        return self.p == 0

    def with_ab(self, a: complex | None = None, b: complex | None = None) -> "EllipticParams":
        return EllipticParams(
            a=self.a if a is None else a,
            b=self.b if b is None else b,
            q=self.q,
            p=self.p,
            min_denominator=self.min_denominator,
            policy=self.policy,
        )

    def shifted(self, alpha: int, beta: int) -> "EllipticParams":
        """Replace (a, b) by (a q^alpha, b q^beta)."""
        if alpha == 0 and beta == 0:
            return self
        return self.with_ab(
            self.a * qpow(self.q, alpha), self.b * qpow(self.q, beta)
        )

    def window_ok(self, lo: int, hi: int) -> bool:
        """True when numbers and weights over [lo, hi] clear the guards."""
        try:
            for z in range(lo, hi + 1):
                elliptic_number(z, self)
                elliptic_weight(z, self)
        except DegenerateParameters:
            return False
        return True

    def require_window(self, lo: int, hi: int) -> None:
        for z in range(lo, hi + 1):
            elliptic_number(z, self)
            elliptic_weight(z, self)


def _guard(value: complex, label: str, min_den: float) -> complex:
    if abs(value) < min_den:
        raise DegenerateParameters(
            f"denominator factor {label} has modulus {abs(value):.3e} < {min_den:.1e}"
        )
    return value


def _number_raw(z, a, b, q, p, policy, min_den) -> complex:
    if p == 0 and a == 0 and b == 0 and q == 1:
        return complex(z)
    u = qpow(q, z)
    if p == 0:
        if a == 0 and b == 0:
            den = _guard(1 - q, "(1 - q)", min_den)
            return (1 - u) / den
        if a == 0:
            den = _guard(1 - q, "(1 - q)", min_den) * _guard(
                1 - b * u, "(1 - b q^z)", min_den
            )
            return (1 - u) * (1 - b * q) / den
        den = (
            _guard(1 - q, "(1 - q)", min_den)
            * _guard(1 - a * q, "(1 - a q)", min_den)
            * _guard(1 - b * u, "(1 - b q^z)", min_den)
            * _guard(1 - a * u / b, "(1 - a q^z / b)", min_den)
        )
        return (1 - u) * (1 - a * u) * (1 - b * q) * (1 - a * q / b) / den
    num = theta_multi([u, a * u, b * q, a * q / b], p, policy)
    den = (
        _guard(theta(q, p, policy), "theta(q)", min_den)
        * _guard(theta(a * q, p, policy), "theta(a q)", min_den)
        * _guard(theta(b * u, p, policy), "theta(b q^z)", min_den)
        * _guard(theta(a * u / b, p, policy), "theta(a q^z / b)", min_den)
    )
    return num / den


def _weight_raw(k, a, b, q, p, policy, min_den) -> complex:
    u = qpow(q, k)
    if p == 0:
        if a == 0 and b == 0:
            return u
        if a == 0:
            den = _guard(1 - b * u, "(1 - b q^k)", min_den) * _guard(
                1 - b * q * u, "(1 - b q^(k+1))", min_den
            )
            return (1 - b) * (1 - b * q) / den * u
        den = (
            _guard(1 - a * q, "(1 - a q)", min_den)
            * _guard(1 - b * u, "(1 - b q^k)", min_den)
            * _guard(1 - b * q * u, "(1 - b q^(k+1))", min_den)
            * _guard(1 - a * u / b, "(1 - a q^k / b)", min_den)
            * _guard(1 - a * q * u / b, "(1 - a q^(k+1) / b)", min_den)
        )
        num = (
            (1 - a * q * u * u)
            * (1 - b)
            * (1 - b * q)
            * (1 - a / b)
            * (1 - a * q / b)
        )
        return num / den * u
    num = theta_multi(
        [a * q * u * u, b, b * q, a / b, a * q / b], p, policy
    )
    den = (
        _guard(theta(a * q, p, policy), "theta(a q)", min_den)
        * _guard(theta(b * u, p, policy), "theta(b q^k)", min_den)
        * _guard(theta(b * q * u, p, policy), "theta(b q^(k+1))", min_den)
        * _guard(theta(a * u / b, p, policy), "theta(a q^k / b)", min_den)
        * _guard(theta(a * q * u / b, p, policy), "theta(a q^(k+1) / b)", min_den)
    )
    return num / den * u


def elliptic_number_shifted(z, shift: tuple[int, int], params: EllipticParams) -> complex:
    """[z] with parameters (a q^alpha, b q^beta) for shift = (alpha, beta)."""
    alpha, beta = shift
    key = (alpha, beta, z)
    cached = params._num_cache.get(key)
    if cached is not None:
        return cached
    q = params.q
    a = params.a * qpow(q, alpha) if alpha else params.a
    b = params.b * qpow(q, beta) if beta else params.b
    value = _number_raw(z, a, b, q, params.p, params.policy, params.min_denominator)
    params._num_cache[key] = value
    return value


def elliptic_number(z, params: EllipticParams) -> complex:
    """The elliptic number [z]_{a,b;q,p}."""
    return elliptic_number_shifted(z, (0, 0), params)


def elliptic_weight_shifted(k, shift: tuple[int, int], params: EllipticParams) -> complex:
    """W(k) with parameters (a q^alpha, b q^beta) for shift = (alpha, beta)."""
    alpha, beta = shift
    key = (alpha, beta, k)
    cached = params._wt_cache.get(key)
    if cached is not None:
        return cached
    q = params.q
    a = params.a * qpow(q, alpha) if alpha else params.a
    b = params.b * qpow(q, beta) if beta else params.b
    value = _weight_raw(k, a, b, q, params.p, params.policy, params.min_denominator)
    params._wt_cache[key] = value
    return value


def elliptic_weight(k, params: EllipticParams) -> complex:
    """The elliptic weight W_{a,b;q,p}(k)."""
    return elliptic_weight_shifted(k, (0, 0), params)


# ---------------------------------------------------------------------------
# seeded sampling policy
# ---------------------------------------------------------------------------

def sample_annulus(rng: random.Random, lo: float, hi: float) -> complex:
    r = rng.uniform(lo, hi)
    phi = rng.uniform(0.0, _TWO_PI)
    return complex(r * math.cos(phi), r * math.sin(phi))


def sample_elliptic_params(
    rng: random.Random,
    window: tuple[int, int] = (-8, 10),
    retries: int = 100,
    min_denominator: float = DEFAULT_MIN_DENOMINATOR,
) -> EllipticParams:
    """Draw generic parameters: |p| in [0.05, 0.5], moduli of q, a, b in
    [0.4, 0.9] with random phase.  Resamples (at most `retries` times) until
    every guarded denominator over the index window clears min_denominator.
    """
    for _ in range(retries):
        p = rng.uniform(0.05, 0.5)
        q = sample_annulus(rng, 0.4, 0.9)
        a = sample_annulus(rng, 0.4, 0.9)
        b = sample_annulus(rng, 0.4, 0.9)
        params = EllipticParams(a=a, b=b, q=q, p=p, min_denominator=min_denominator)
        if params.window_ok(*window):
            return params
    raise DegenerateParameters(
        f"no generic parameter tuple found in {retries} attempts"
    )
