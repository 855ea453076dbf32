"""Scalar q-special functions with a-posteriori truncation bounds.

Every infinite object (product or series) is cut at the first index where a
cheap, rigorous bound on the discarded part drops below the policy's
``tail_tol``.  Values are plain Python ``complex``; bases are real floats in
(0, 1).  The ``log_*`` variants return the complex logarithm of the same
object and are what the certification code uses, since products such as
``(q;q)_inf`` underflow long before ``q`` reaches 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadTau,
    NonFinite,
    PoleAtB,
    PoleAtNonpositiveInteger,
    TruncationExceeded,
    ZeroArgument,
)

__all__ = [
    "TruncationPolicy",
    "EvalResult",
    "DEFAULT_POLICY",
    "check_q",
    "check_complex",
    "qpoch_inf",
    "log_qpoch_inf",
    "qpoch_fin",
    "ramanujan_Aq",
    "phi11",
    "theta4_series",
    "theta4_product",
    "log_theta4_product",
    "theta4_vtau",
    "q_gamma",
    "log_q_gamma",
]

POLE_RTOL = 1e-14
POISSON_MIN_Q = math.exp(-math.pi)


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls for every truncated infinite series or product.

    ``tail_tol`` bounds the discarded tail relative to the value: for series
    it is compared with the running partial sum, for products it bounds the
    logarithm of the discarded factor.
    """

    tail_tol: float = 1e-16
    max_terms: int = 10_000

    def __post_init__(self):
        if not (self.tail_tol > 0 and math.isfinite(self.tail_tol)):
            raise ValueError(f"tail_tol must be positive and finite, got {self.tail_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")

    def scaled(self, factor: float) -> "TruncationPolicy":
        return TruncationPolicy(self.tail_tol * factor, self.max_terms)


@dataclass(frozen=True)
class EvalResult:
    value: complex
    terms_used: int
    tail_bound: float

    def __complex__(self):
        return complex(self.value)


DEFAULT_POLICY = TruncationPolicy()


def check_q(q) -> float:
    """Validate a base ``q`` and return it as a float in (0, 1)."""
    if isinstance(q, complex):
        if q.imag != 0:
            raise ValueError(f"base q must be real, got {q!r}")
        q = q.real
    q = float(q)
    if not math.isfinite(q):
        raise NonFinite(f"base q is not finite: {q!r}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"base q must satisfy 0 < q < 1, got {q!r}")
    return q


def check_complex(z, name: str = "argument") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFinite(f"{name} is not finite: {z!r}")
    return z


def _finite_result(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NonFinite(f"{what} overflowed or produced NaN")
    return value


def _relative(tail: float, partial: complex) -> float:
    """Tail bound measured against the running partial sum."""
    size = abs(partial)
    if size == 0.0:
        return 0.0 if tail == 0.0 else math.inf
    return tail / size


# ---------------------------------------------------------------------------
# q-Pochhammer symbols


def _product_length(abs_a: float, q: float, policy: TruncationPolicy) -> tuple[int, float]:
    """Smallest N with |a| q^(N+1) < 1/2 and log-tail bound <= tail_tol.

    The log of the discarded factor prod_{n>N}(1 - a q^n) is bounded by
    sum |a| q^n / (1 - |a| q^n) <= |a| q^(N+1) / ((1 - q)(1 - |a| q^(N+1))).
    """
    if abs_a == 0.0:
        return 0, 0.0
    tol = policy.tail_tol
    target = tol * (1.0 - q) / (1.0 + tol * (1.0 - q))
    k = math.ceil(math.log(target / abs_a) / math.log(q))
    n = max(k - 1, 0)

    def bound(n):
        w = abs_a * q ** (n + 1)
        return w, w / ((1.0 - q) * (1.0 - w)) if w < 1.0 else math.inf

    w, b = bound(n)
    while n > 0:
        w_prev, b_prev = bound(n - 1)
        if w_prev < 0.5 and b_prev <= tol:
            n, w, b = n - 1, w_prev, b_prev
        else:
            break
    while not (w < 0.5 and b <= tol):
        n += 1
        w, b = bound(n)
    if n + 1 > policy.max_terms:
        raise TruncationExceeded(
            f"(a;q)_inf with |a|={abs_a:.3g}, q={q!r} needs {n + 1} factors "
            f"(max_terms={policy.max_terms})"
        )
    return n, b


def _pochhammer_terms(a: complex, q: float, policy: TruncationPolicy):
    n, bound = _product_length(abs(a), q, policy)
    w = a * np.power(q, np.arange(n + 1, dtype=float))
    return w, bound


def _log1m(w: np.ndarray) -> np.ndarray:
    """Elementwise principal log(1 - w), accurate for small |w|."""
    w = np.asarray(w, dtype=complex)
    one_minus = 1.0 - w
    small = np.abs(w) < 0.5
    with np.errstate(divide="ignore"):
        re = np.where(
            small,
            0.5 * np.log1p(np.where(small, w.real * w.real + w.imag * w.imag - 2.0 * w.real, 0.0)),
            np.log(np.abs(one_minus)),
        )
    return re + 1j * np.angle(one_minus)


def qpoch_inf(a, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Infinite q-Pochhammer symbol (a;q)_inf = prod_{n>=0} (1 - a q^n)."""
    a = check_complex(a, "a")
    q = check_q(q)
    w, bound = _pochhammer_terms(a, q, policy)
    value = complex(np.prod(1.0 - w))
    return EvalResult(_finite_result(value, "(a;q)_inf"), len(w), bound)


def log_qpoch_inf(a, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Complex logarithm of (a;q)_inf as a sum of principal logs of the factors.

    The real part is log|(a;q)_inf|; the imaginary part is an argument, not
    necessarily the principal one.  A vanishing factor gives ``-inf``.
    """
    a = check_complex(a, "a")
    q = check_q(q)
    w, bound = _pochhammer_terms(a, q, policy)
    logs = _log1m(w)
    value = complex(math.fsum(logs.real), math.fsum(logs.imag))
    return EvalResult(value, len(w), bound)


def qpoch_fin(a, q, n: int) -> complex:
    """Finite q-Pochhammer symbol (a;q)_n; the empty product is 1."""
    a = check_complex(a, "a")
    q = check_q(q)
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    value = 1.0 + 0.0j
    qk = 1.0
    for _ in range(int(n)):
        value *= 1.0 - a * qk
        qk *= q
    return _finite_result(value, "(a;q)_n")


# ---------------------------------------------------------------------------
# Series


def ramanujan_Aq(z, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Ramanujan's entire function A_q(z) = sum_n q^(n^2) (-z)^n / (q;q)_n.

    The ratio of consecutive terms is q^(2n+1)(-z)/(1 - q^(n+1)), whose
    modulus is decreasing in n; once it is below 1/2 the remaining terms are
    dominated by a geometric series.
    """
    z = check_complex(z, "z")
    q = check_q(q)
    abs_z = abs(z)
    tol = policy.tail_tol
    term = 1.0 + 0.0j
    total = term
    n = 0
    while True:
        qn1 = q ** (n + 1)
        ratio = q ** (2 * n + 1) * abs_z / (1.0 - qn1)
        if ratio < 0.5:
            bound = _relative(abs(term) * ratio / (1.0 - ratio), total)
            if bound <= tol:
                return EvalResult(_finite_result(total, "A_q"), n + 1, bound)
        if n + 2 > policy.max_terms:
            raise TruncationExceeded(f"A_q(z={z!r}; q={q!r}) did not converge in {policy.max_terms} terms")
        term *= q ** (2 * n + 1) * (-z) / (1.0 - qn1)
        total += term
        n += 1
        if not math.isfinite(abs(total)):
            raise NonFinite(f"A_q(z={z!r}; q={q!r}) overflowed")


def phi11(a, b, q, z, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Confluent basic hypergeometric series 1phi1(a; b; q, z).

    Uses the convention sum_n (a;q)_n q^(n(n-1)/2) (-z)^n / ((b;q)_n (q;q)_n).
    """
    a = check_complex(a, "a")
    b = check_complex(b, "b")
    z = check_complex(z, "z")
    q = check_q(q)
    abs_a, abs_b, abs_z = abs(a), abs(b), abs(z)
    pole_tol = POLE_RTOL * (1.0 + abs_b)
    tol = policy.tail_tol
    term = 1.0 + 0.0j
    total = term
    n = 0
    qn = 1.0
    while True:
        denom_b = 1.0 - b * qn
        if abs(denom_b) < pole_tol:
            raise PoleAtB(f"(b;q)_n vanishes at n={n + 1}: b={b!r}, q={q!r}")
        qn1 = qn * q
        if abs_b * qn < 0.5:
            ratio = (1.0 + abs_a * qn) * qn * abs_z / ((1.0 - abs_b * qn) * (1.0 - qn1))
            if ratio < 0.5:
                bound = _relative(abs(term) * ratio / (1.0 - ratio), total)
                if bound <= tol:
                    return EvalResult(_finite_result(total, "1phi1"), n + 1, bound)
        if n + 2 > policy.max_terms:
            raise TruncationExceeded(f"1phi1 did not converge in {policy.max_terms} terms")
        term *= (1.0 - a * qn) * qn * (-z) / (denom_b * (1.0 - qn1))
        total += term
        n += 1
        qn = qn1
        if not math.isfinite(abs(total)):
            raise NonFinite("1phi1 overflowed")


# ---------------------------------------------------------------------------
# Jacobi theta_4


def _theta4_bilateral(z: complex, q: complex, policy: TruncationPolicy) -> EvalResult:
    """sum_{n in Z} q^(n^2) (-z)^n for complex |q| < 1.

    |z| is first brought into [|q|^3, |q|^-3] with theta4(z) = -q z theta4(q^2 z),
    which keeps every term of the remaining sum below |q|^(-9/4) and so avoids
    catastrophic cancellation for large or small |z|.
    """
    if abs(z) < 1e-300:
        raise ZeroArgument("theta_4 series needs z != 0")
    aq = abs(q)
    hi = aq ** -3
    lo = aq ** 3
    prefactor = 1.0 + 0.0j
    q2 = q * q
    steps = 0
    while abs(z) > hi:
        prefactor *= -q * z
        z *= q2
        steps += 1
    while abs(z) < lo:
        prefactor *= -q / z
        z /= q2
        steps += 1
    if steps > policy.max_terms:
        raise TruncationExceeded(f"theta_4 argument reduction took {steps} steps")

    big = max(abs(z), 1.0 / abs(z))
    neg_z = -z
    neg_zinv = -1.0 / z
    tol = policy.tail_tol
    total = 1.0 + 0.0j
    qpow = 1.0 + 0.0j  # q^(n^2)
    zpow = 1.0 + 0.0j
    zinvpow = 1.0 + 0.0j
    n = 0
    while True:
        r = aq ** (2 * n + 3) * big
        if r < 0.5:
            bound = _relative(2.0 * aq ** ((n + 1) ** 2) * big ** (n + 1) / (1.0 - r), total)
            if bound <= tol:
                value = prefactor * total
                return EvalResult(_finite_result(value, "theta_4"), 2 * n + 1, bound)
        if n + 1 > policy.max_terms:
            raise TruncationExceeded(f"theta_4 series did not converge in {policy.max_terms} terms")
        n += 1
        qpow *= q ** (2 * n - 1)
        zpow *= neg_z
        zinvpow *= neg_zinv
        total += qpow * (zpow + zinvpow)


def _theta4_poisson(z: complex, q: float, policy: TruncationPolicy) -> EvalResult:
    """theta_4 for real q near 1 through its Poisson-summed form.

    With q = exp(-pi u) and z = exp(2 pi i v),
    theta_4 = u^(-1/2) sum_n exp(-pi (v - n - 1/2)^2 / u).  The terms are
    Gaussian in n around Re(v) - 1/2 and carry a common modulus factor, so
    the sum does not cancel the way the q-series does when theta_4 is
    exponentially small.
    """
    if abs(z) < 1e-300:
        raise ZeroArgument("theta_4 series needs z != 0")
    u = -math.log(q) / math.pi
    v = cmath.log(z) / (2j * math.pi)
    centre = math.floor(v.real)  # Re(v) - 1/2 - centre lies in [-1/2, 1/2)
    scale = math.exp(math.pi * v.imag * v.imag / u) / math.sqrt(u)
    tol = policy.tail_tol
    c = math.pi / u

    def term(n):
        d = v - n - 0.5
        return cmath.exp(-c * d * d)

    total = term(centre)
    n = 0
    while True:
        ratio = math.exp(-2.0 * c * (n + 1))
        bound = _relative(2.0 * scale * math.exp(-c * (n + 0.5) ** 2) / (1.0 - ratio), total / math.sqrt(u))
        if bound <= tol:
            value = total / math.sqrt(u)
            return EvalResult(_finite_result(value, "theta_4"), 2 * n + 1, bound)
        if n + 1 > policy.max_terms:
            raise TruncationExceeded(f"theta_4 series did not converge in {policy.max_terms} terms")
        n += 1
        total += term(centre + n) + term(centre - n)


def theta4_series(z, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """theta_4(z; q) = sum_{n=-inf}^{inf} q^(n^2) (-z)^n, summed symmetrically.

    For q > exp(-pi) the sum is taken in its Poisson-summed form (see
    ``_theta4_poisson``); the q-series itself loses all relative accuracy
    there because theta_4 is exponentially small compared with its terms.
    """
    z = check_complex(z, "z")
    q = check_q(q)
    if q > POISSON_MIN_Q:
        return _theta4_poisson(z, q, policy)
    return _theta4_bilateral(z, complex(q), policy)


def theta4_product(z, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """theta_4(z; q) as the triple product (q^2, q z, q/z; q^2)_inf."""
    z = check_complex(z, "z")
    q = check_q(q)
    if abs(z) < 1e-300:
        raise ZeroArgument("theta_4 product needs z != 0")
    part = policy.scaled(1.0 / 3.0)
    q2 = q * q
    factors = [qpoch_inf(q2, q2, part), qpoch_inf(q * z, q2, part), qpoch_inf(q / z, q2, part)]
    value = factors[0].value * factors[1].value * factors[2].value
    return EvalResult(
        _finite_result(value, "theta_4"),
        sum(f.terms_used for f in factors),
        sum(f.tail_bound for f in factors),
    )


def log_theta4_product(z, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Complex log of theta_4(z; q) via the triple product; safe as q -> 1."""
    z = check_complex(z, "z")
    q = check_q(q)
    if abs(z) < 1e-300:
        raise ZeroArgument("theta_4 product needs z != 0")
    part = policy.scaled(1.0 / 3.0)
    q2 = q * q
    logs = [log_qpoch_inf(q2, q2, part), log_qpoch_inf(q * z, q2, part), log_qpoch_inf(q / z, q2, part)]
    return EvalResult(
        sum(r.value for r in logs),
        sum(r.terms_used for r in logs),
        sum(r.tail_bound for r in logs),
    )


def theta4_vtau(v, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """theta_4(v | tau) with z = exp(2 pi i v) and q = exp(pi i tau).

    Purely imaginary tau gives a real base and goes through ``theta4_series``;
    any other tau in the upper half-plane uses the same bilateral sum with
    complex q.
    """
    v = check_complex(v, "v")
    tau = check_complex(tau, "tau")
    if not tau.imag > 0:
        raise BadTau(f"tau must have positive imaginary part, got {tau!r}")
    z = cmath.exp(2j * math.pi * v)
    if tau.real == 0.0:
        return theta4_series(z, math.exp(-math.pi * tau.imag), policy)
    q = cmath.exp(1j * math.pi * tau)
    return _theta4_bilateral(check_complex(z, "exp(2 pi i v)"), q, policy)


# ---------------------------------------------------------------------------
# q-Gamma


def _q_gamma_parts(x: complex, q: float, policy: TruncationPolicy):
    lnq = math.log(q)
    qx = cmath.exp(x * lnq)
    part = policy.scaled(0.5)
    w, bound_x = _pochhammer_terms(qx, q, part)
    factors = 1.0 - w
    if np.min(np.abs(factors)) < POLE_RTOL:
        raise PoleAtNonpositiveInteger(f"Gamma_q has a pole at x={x!r} (q={q!r})")
    log_num = log_qpoch_inf(q, q, part)
    logs = _log1m(w)
    log_den = complex(math.fsum(logs.real), math.fsum(logs.imag))
    log_value = (1.0 - x) * math.log1p(-q) + log_num.value - log_den
    return log_value, log_num.terms_used + len(w), log_num.tail_bound + bound_x


def q_gamma(x, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """q-Gamma function (1-q)^(1-x) (q;q)_inf / (q^x;q)_inf, principal branches.

    Evaluated through logarithms so that the ratio survives the underflow of
    both products when q is close to 1.
    """
    x = check_complex(x, "x")
    q = check_q(q)
    log_value, terms, bound = _q_gamma_parts(x, q, policy)
    return EvalResult(_finite_result(cmath.exp(log_value), "Gamma_q"), terms, bound)


def log_q_gamma(x, q, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    x = check_complex(x, "x")
    q = check_q(q)
    log_value, terms, bound = _q_gamma_parts(x, q, policy)
    return EvalResult(log_value, terms, bound)
