"""Quadrature checks of the integral representations behind the three kernels.

Each kernel is (up to a positive constant) the Fourier transform of an
explicit density.  The checks here sample that density on a truncated line,
integrate it against e^{-i alpha x} and compare with the closed form.
Nonnegativity is always sampled on the real line.  The
densities are Gaussian mixtures, which gives certified tail bounds: the
truncation window is widened until the discarded mass is below 1e-16 of the
total.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import erfc, logsumexp

from .errors import CutoffInsufficient, DomainViolation
from .gram import Variant
from .qkernel import DEFAULT_POLICY, check_complex, check_q, qpoch_inf

__all__ = [
    "Scheme",
    "QuadratureSpec",
    "TransformCheck",
    "euler_density",
    "phi11_density",
    "ramanujan_density",
    "reconstruct_density",
    "verify_euler_transform",
    "verify_phi11_transform",
    "verify_ramanujan_integral",
    "verify_ramanujan_abs_square",
    "auto_cutoff",
]

TAIL_EPS = 1e-20
TAIL_REL = 1e-16
# relative size at which mixture series are cut; far below TAIL_REL even after summing the tail
SERIES_EPS = 1e-24
LOG_SERIES_EPS = -math.log(SERIES_EPS)
SQRT_2PI = math.sqrt(2.0 * math.pi)


class Scheme(str, Enum):
    GAUSS_LEGENDRE = "gauss_legendre_composite"
    TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation window [-cutoff, cutoff] and node layout.

    ``cutoff=None`` picks the window automatically.  ``nodes`` is the panel
    count for Gauss-Legendre (``order`` points each) or the number of
    subintervals for the trapezoid rule; ``None`` means unit-length panels,
    or ``order`` subintervals per unit for the trapezoid rule.

    ``contour_shift`` moves the Euler and 1phi1 integrals onto the horizontal
    line through the saddle of the Gaussian factor.  The densities are entire
    with Gaussian decay in every strip, so the value is unchanged, but the
    exp(-x^2/(4c))-sized cancellation of the real-line integral disappears.
    """

    cutoff: float | None = None
    nodes: int | None = None
    order: int = 64
    scheme: Scheme = Scheme.GAUSS_LEGENDRE
    contour_shift: bool = True

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.cutoff is not None and not self.cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff!r}")
        if self.nodes is not None and self.nodes < 1:
            raise ValueError(f"nodes must be >= 1, got {self.nodes!r}")
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order!r}")

    def rule(self, cutoff: float, panel_width: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on [-cutoff, cutoff].

        ``panel_width`` below 1 refines the default layout for integrands
        with poles close to the real axis.
        """
        length = 2.0 * cutoff
        if self.scheme is Scheme.GAUSS_LEGENDRE:
            panels = self.nodes or max(1, math.ceil(length / panel_width))
            t, w = leggauss(self.order)
            edges = np.linspace(-cutoff, cutoff, panels + 1)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[:-1] + edges[1:])
            x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
            wt = (half[:, None] * w[None, :]).ravel()
            return x, wt
        n = self.nodes or max(1, math.ceil(length / panel_width) * self.order)
        x = np.linspace(-cutoff, cutoff, n + 1)
        wt = np.full(n + 1, length / n)
        wt[0] = wt[-1] = 0.5 * length / n
        return x, wt


@dataclass(frozen=True)
class TransformCheck:
    lhs: complex
    rhs: complex
    rel_err: float
    density_min: float
    cutoff: float = 0.0
    node_count: int = 0
    tail_bound: float = 0.0
    # mass of the density over |lhs|: rounding in the quadrature scales with it
    condition: float = 1.0

    def to_dict(self) -> dict:
        return {
            "lhs_re": self.lhs.real,
            "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real,
            "rhs_im": self.rhs.imag,
            "rel_err": self.rel_err,
            "density_min": self.density_min,
            "cutoff": self.cutoff,
            "node_count": self.node_count,
            "tail_bound": self.tail_bound,
            "condition": self.condition,
        }


def auto_cutoff(q_eff: float, eps: float = TAIL_EPS) -> int:
    """Smallest window for which the Gaussian q_eff^{alpha^2} drops below eps, plus 2."""
    return math.ceil(math.sqrt(math.log(1.0 / eps) / math.log(1.0 / q_eff))) + 2


def _gauss_tail(c: float, centre: np.ndarray | float, cutoff: float, width: float = 1.0) -> np.ndarray:
    """Mass of exp(-c (alpha - centre)^2 / width) outside [-cutoff, cutoff]."""
    s = math.sqrt(c / width)
    centre = np.asarray(centre, dtype=float)
    return 0.5 * math.sqrt(math.pi) / s * (erfc(s * (cutoff - centre)) + erfc(s * (cutoff + centre)))


def _gauss_edge(weights: np.ndarray, c: float, centre: np.ndarray | float, cutoff: float,
                width: float = 1.0) -> float:
    """Larger of the mixture sum_j w_j exp(-c (alpha - centre_j)^2 / width) at alpha = +-cutoff."""
    centre = np.asarray(centre, dtype=float)
    hi = np.sum(weights * np.exp(-c * (cutoff - centre) ** 2 / width))
    lo = np.sum(weights * np.exp(-c * (cutoff + centre) ** 2 / width))
    return float(max(hi, lo))


def _choose_cutoff(quad: QuadratureSpec, start: int, tail_fn, mass: float,
                   edge_fn=None, peak: float = 0.0) -> tuple[float, float]:
    """Return (cutoff, certified tail) meeting tail <= TAIL_REL * mass.

    With ``edge_fn`` the density bound at +-cutoff must also fall below
    TAIL_REL * peak, so the window edge is negligible pointwise as well.
    """
    def ok(a: float) -> bool:
        if tail_fn(a) > TAIL_REL * mass:
            return False
        return edge_fn is None or edge_fn(a) <= TAIL_REL * peak

    auto = float(start)
    while not ok(auto):
        auto += 1.0
        if auto > 1e4:
            raise CutoffInsufficient("no window below 1e4 certifies the tail", auto)
    if quad.cutoff is None:
        return auto, tail_fn(auto)
    if not ok(quad.cutoff):
        raise CutoffInsufficient(
            f"cutoff {quad.cutoff} leaves tail mass {tail_fn(quad.cutoff):.3e} against {mass:.3e}"
            f" (limit {TAIL_REL:.0e} relative); try {auto:g}",
            auto,
        )
    return float(quad.cutoff), tail_fn(quad.cutoff)


def _rel_err(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), 1e-300)


# ---------------------------------------------------------------------------
# Euler transform


def _log_qq(q: float, n: int) -> np.ndarray:
    """log (q;q)_k for k = 0..n."""
    return np.concatenate(([0.0], np.cumsum(np.log1p(-q ** np.arange(1, n + 1)))))


def _euler_terms(z: complex, q: float) -> int:
    # weights |z|^n / (q;q)_n decay geometrically; stop once below SERIES_EPS of the first
    if abs(z) == 0:
        return 1
    return int(math.ceil(math.log(SERIES_EPS * qpoch_inf(q, q).value.real) / math.log(abs(z)))) + 1


def euler_density(z, q, alphas) -> np.ndarray:
    """q^{alpha^2} A_q(-q^{2 alpha} z), summed as sum_n z^n / (q;q)_n q^{(alpha+n)^2}."""
    z = check_complex(z, "z")
    q = check_q(q)
    if not abs(z) < 1:
        raise DomainViolation(f"|z| must be < 1, got {abs(z)!r}")
    alphas = np.asarray(alphas, dtype=float)
    n_max = _euler_terms(z, q)
    n = np.arange(n_max)
    lnq = math.log(q)
    log_w = -_log_qq(q, n_max - 1)
    expo = log_w[None, :] + lnq * (alphas[:, None] + n[None, :]) ** 2
    if z.imag == 0 and z.real >= 0:
        if z.real == 0:
            return np.exp(lnq * alphas ** 2)
        return np.exp(logsumexp(expo + n[None, :] * math.log(z.real), axis=1))
    return np.sum(np.exp(expo) * (z ** n)[None, :], axis=1)


def verify_euler_transform(z, q, x: float, quad: QuadratureSpec = QuadratureSpec()) -> TransformCheck:
    """exp(x^2/log q^4) / ((z e^{ix};q)_inf sqrt(log q^{-2})) against the quadrature of its density."""
    z = check_complex(z, "z")
    q = check_q(q)
    if not abs(z) < 1:
        raise DomainViolation(f"|z| must be < 1, got {abs(z)!r}")
    c = -math.log(q)
    lhs = math.exp(-x * x / (4.0 * c)) / (qpoch_inf(z * cmath.exp(1j * x), q).value * math.sqrt(2.0 * c))
    n_max = _euler_terms(z, q)
    n = np.arange(n_max)
    weights = np.abs(z) ** n * np.exp(-_log_qq(q, n_max - 1))
    mass = math.sqrt(math.pi / c) * float(np.sum(weights))
    tail_fn = lambda a: float(np.sum(weights * _gauss_tail(c, -n, a)))
    edge_fn = lambda a: _gauss_edge(weights, c, -n, a)
    peak = abs(complex(euler_density(z, q, [0.0])[0]))
    cutoff, tail = _choose_cutoff(quad, auto_cutoff(q), tail_fn, mass, edge_fn, peak)
    nodes, w = quad.rule(cutoff)
    dens = euler_density(z, q, nodes)
    if quad.contour_shift:
        # on alpha = s - i x/(2c) the integrand is exp(-x^2/(4c)) times the density at z e^{ix}
        damp = math.exp(-x * x / (4.0 * c))
        rhs = damp * complex(np.sum(w * euler_density(z * cmath.exp(1j * x), q, nodes))) / SQRT_2PI
        mass *= damp
    else:
        rhs = complex(np.sum(w * dens * np.exp(-1j * nodes * x))) / SQRT_2PI
    return TransformCheck(lhs, rhs, _rel_err(lhs, rhs), float(np.min(dens.real)), cutoff,
                          len(nodes), tail / SQRT_2PI, mass / SQRT_2PI / max(abs(lhs), 1e-300))


# ---------------------------------------------------------------------------
# 1phi1 transform


def _check_phi11(a, b, z, q):
    if not (-1 < a < 1 and 0 <= b < 1 and 0 <= z < 1):
        raise DomainViolation(f"need -1<a<1, 0<=b,z<1; got a={a}, b={b}, z={z}")
    return check_q(q)


def _phi11_terms(a: float, b: float, z: float, q: float, alpha_min: float) -> int:
    """Series length for the density at alpha >= alpha_min.

    The term ratio is about z/b while b beta q^n > 1, i.e. up to n ~ -alpha,
    and then falls like (z/b) q^k; k is chosen so the product of those
    ratios drops below SERIES_EPS.
    """
    c = -math.log(q)
    lead = math.log(z / b) if b > 0 and z > 0 else 0.0
    lead = max(lead, 0.0)
    k = (lead + math.sqrt(lead * lead + 2.0 * LOG_SERIES_EPS * c)) / c
    return int(max(0.0, -alpha_min) + k) + 5


def _phi11_weights(a: float, b: float, z: float, q: float) -> np.ndarray:
    """W_s = sum_{n+k=s} (a;q)_n z^n b^k / ((q;q)_n (q;q)_k), the mixture weights."""
    rho = max(z, b)
    if rho == 0:
        return np.ones(1)
    s_max = 8
    big = LOG_SERIES_EPS - 2.0 * math.log(qpoch_inf(q, q).value.real)
    while s_max * -math.log(rho) < big + math.log(s_max + 1):
        s_max *= 2
    k = np.arange(s_max)
    inv_qq = np.exp(-_log_qq(q, s_max - 1))
    a_coef = np.concatenate(([1.0], np.cumprod(1.0 - a * q ** k[:-1])))
    wn = np.abs(a_coef) * z ** k * inv_qq
    wk = b ** k * inv_qq
    return np.convolve(wn, wk)[:s_max]


def _log1p_rotated(t: np.ndarray, phase: float) -> np.ndarray:
    """log(1 + e^{t + i phase}) for real t, without overflow and in real arithmetic."""
    if not phase:
        return np.logaddexp(0.0, t)
    big = t > 0
    # for t > 0 factor out e^{t + i phase} and expand in its reciprocal
    mag = np.exp(np.where(big, -t, t))
    re = mag * math.cos(phase)
    im = np.where(big, -mag, mag) * math.sin(phase)
    small = np.log(np.hypot(1.0 + re, im)) + 1j * np.arctan2(im, 1.0 + re)
    return np.where(big, t + 1j * phase + small, small)


def _log_qpoch_tail(log_w: np.ndarray, phase: float, q: float, start: int) -> np.ndarray:
    """log(w q^start; q)_inf-style tail sum_{j>=start} log(1 + w q^j), w = e^{log_w + i phase}.

    Uses sum_m (-1)^{m+1} (w q^start)^m / (m (1 - q^m)) where |w q^start| <= 1/2,
    and direct summation elsewhere.
    """
    lead = log_w + start * math.log(q)
    out = np.zeros(lead.shape, dtype=complex if phase else float)
    ok = lead <= -math.log(2.0)
    if np.any(ok):
        u = np.exp(lead[ok] + 1j * phase) if phase else np.exp(lead[ok])
        m = np.arange(1, 60)
        coef = (-1.0) ** (m + 1) / (m * -np.expm1(m * math.log(q)))
        out[ok] = np.sum(coef[None, :] * u[:, None] ** m[None, :], axis=1)
    if not np.all(ok):
        j = np.arange(400)
        rest = lead[~ok]
        out[~ok] = np.sum(_log1p_rotated(rest[:, None] + j[None, :] * math.log(q), phase), axis=1)
    return out


def phi11_density(a, b, z, q, alphas, block: int = 2048, phase: float = 0.0) -> np.ndarray:
    """(-b beta;q)_inf q^{alpha^2/2} 1phi1(a; -b beta; q, -z beta) with beta = q^{alpha + 1/2}.

    Written as q^{alpha^2/2} sum_n (a;q)_n q^{n(n-1)/2} (z beta)^n (-b beta q^n;q)_inf / (q;q)_n,
    every term of which is positive on the hypothesis domain.  A nonzero
    ``phase`` replaces b, z by b e^{i phase}, z e^{i phase} and returns complex values.
    """
    a, b, z = float(a), float(b), float(z)
    q = _check_phi11(a, b, z, q)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size > block:
        return np.concatenate([phi11_density(a, b, z, q, alphas[i:i + block], block, phase)
                               for i in range(0, alphas.size, block)])
    lnq = math.log(q)
    n_max = _phi11_terms(a, b, z, q, float(np.min(alphas)) if alphas.size else 0.0)
    n = np.arange(n_max)
    log_beta = (alphas + 0.5) * lnq
    log_coef = np.concatenate(([0.0], np.cumsum(np.log1p(-a * q ** n[:-1]))))
    log_coef += 0.5 * n * (n - 1) * lnq - _log_qq(q, n_max - 1)
    expo = 0.5 * lnq * alphas[:, None] ** 2 + log_coef[None, :]
    if z > 0:
        expo = expo + n[None, :] * (math.log(z) + (1j * phase if phase else 0.0) + log_beta[:, None])
    elif n_max > 1:
        expo[:, 1:] = -np.inf
    if b > 0:
        # L_n = log(-b beta q^n; q)_inf, built downward from its tail
        log_bb = math.log(b) + log_beta
        tail = _log_qpoch_tail(log_bb, phase, q, n_max)
        steps = _log1p_rotated(log_bb[:, None] + n[None, :] * lnq, phase)
        big_l = tail[:, None] + np.cumsum(steps[:, ::-1], axis=1)[:, ::-1]
        expo = expo + big_l
    if not phase:
        return np.exp(logsumexp(expo, axis=1))
    top = np.max(expo.real, axis=1, keepdims=True)
    return np.exp(top[:, 0]) * np.sum(np.exp(expo - top), axis=1)


def phi11_kernel(a, b, z, q, x: float, variant: Variant | str = Variant.DERIVED) -> complex:
    """(a z e^{ix};q)_inf exp(x^2/log q^2) / ((b e^{ix}, s z e^{ix};q)_inf sqrt(log q^{-1}))."""
    q = check_q(q)
    s = 1.0 if Variant(variant) is Variant.DERIVED else -1.0
    e = cmath.exp(1j * x)
    c = -math.log(q)
    num = qpoch_inf(a * z * e, q).value * math.exp(-x * x / (2.0 * c))
    return num / (qpoch_inf(b * e, q).value * qpoch_inf(s * z * e, q).value * math.sqrt(c))


def verify_phi11_transform(a, b, z, q, x: float, quad: QuadratureSpec = QuadratureSpec(),
                           variant: Variant | str = Variant.DERIVED) -> TransformCheck:
    """Closed form of the 1phi1 kernel against the quadrature of its density.

    The density is a mixture sum_s W_s q^{(alpha+s)^2/2} with
    W_s = sum_{n+k=s} (a;q)_n z^n b^k / ((q;q)_n (q;q)_k), which bounds the tails.
    """
    a, b, z = float(a), float(b), float(z)
    q = _check_phi11(a, b, z, q)
    c = -math.log(q)
    lhs = phi11_kernel(a, b, z, q, x, variant)
    weights = _phi11_weights(a, b, z, q)
    centres = -np.arange(weights.size)
    mass = math.sqrt(2.0 * math.pi / c) * float(np.sum(weights))
    tail_fn = lambda A: float(np.sum(weights * _gauss_tail(c, centres, A, width=2.0)))
    edge_fn = lambda A: _gauss_edge(weights, c, centres, A, width=2.0)
    peak = float(phi11_density(a, b, z, q, [0.0])[0])
    cutoff, tail = _choose_cutoff(quad, auto_cutoff(math.sqrt(q)), tail_fn, mass, edge_fn, peak)
    nodes, w = quad.rule(cutoff)
    dens = phi11_density(a, b, z, q, nodes)
    if quad.contour_shift:
        # on alpha = s - i x/c the integrand is exp(-x^2/(2c)) times the density at b e^{ix}, z e^{ix}
        damp = math.exp(-x * x / (2.0 * c))
        rhs = damp * complex(np.sum(w * phi11_density(a, b, z, q, nodes, phase=x))) / SQRT_2PI
        mass *= damp
    else:
        rhs = complex(np.sum(w * dens * np.exp(-1j * nodes * x))) / SQRT_2PI
    return TransformCheck(lhs, rhs, _rel_err(lhs, rhs), float(np.min(dens)), cutoff,
                          len(nodes), tail / SQRT_2PI, mass / SQRT_2PI / max(abs(lhs), 1e-300))


# ---------------------------------------------------------------------------
# Ramanujan integral


def _k_base(k: float) -> float:
    if not k > 0:
        raise DomainViolation(f"k must be positive, got {k!r}")
    return math.exp(-2.0 * k * k)


def _qpoch_vec(w: np.ndarray, q: float) -> np.ndarray:
    """(w;q)_inf for an array of arguments with |w| < 1."""
    top = float(np.max(np.abs(w))) if w.size else 0.0
    n = 1
    while top * q ** n / (1.0 - q) > 1e-17:
        n += 1
    return np.prod(1.0 - w[:, None] * q ** np.arange(n)[None, :], axis=1)


def ramanujan_density(a, b, k: float, xs) -> np.ndarray:
    """e^{-x^2} / (a e^{2ikx} q^{1/2}, b e^{-2ikx} q^{1/2}; q)_inf with q = e^{-2k^2}.

    With b = conj(a) this is e^{-x^2} / |(a q^{1/2} e^{2ikx}; q)_inf|^2 > 0.
    """
    q = _k_base(k)
    a, b = complex(a), complex(b)
    xs = np.asarray(xs, dtype=float)
    e = np.exp(2j * k * xs)
    rq = math.sqrt(q)
    den = _qpoch_vec(a * rq * e, q) * _qpoch_vec(b * rq / e, q)
    return np.exp(-xs * xs) / den


def _pole_panel(radius: float, k: float) -> float:
    """Panel width for 1/(w e^{2ikx};q)_inf with |w| = radius < 1.

    The nearest pole sits ln(1/radius)/(2k) off the real axis; panels about
    five times that distance keep 64-point Gauss-Legendre at full precision.
    """
    if radius <= 0:
        return 1.0
    return min(1.0, 5.0 * math.log(1.0 / radius) / (2.0 * k))


def _check_ram(a: complex, b: complex, q: float):
    if not (abs(a) * math.sqrt(q) < 1 and abs(b) * math.sqrt(q) < 1):
        raise DomainViolation("need |a| q^{1/2} < 1 and |b| q^{1/2} < 1 so the denominator cannot vanish")


def verify_ramanujan_integral(c, k: float, m, quad: QuadratureSpec = QuadratureSpec(),
                              b=None) -> TransformCheck:
    """int e^{-x^2+2mx} / (a e^{2ikx} q^{1/2}, b e^{-2ikx} q^{1/2}; q)_inf dx with a = c.

    ``b`` defaults to conj(c).  The closed form is
    sqrt(pi) e^{m^2} (-a q e^{2imk}, -b q e^{-2imk}; q)_inf / (a b q; q)_inf.
    """
    q = _k_base(k)
    a = check_complex(c, "c")
    b = a.conjugate() if b is None else check_complex(b, "b")
    m = check_complex(m, "m")
    _check_ram(a, b, q)
    lhs = (math.sqrt(math.pi) * cmath.exp(m * m)
           * qpoch_inf(-a * q * cmath.exp(2j * m * k), q).value
           * qpoch_inf(-b * q * cmath.exp(-2j * m * k), q).value
           / qpoch_inf(a * b * q, q).value)
    bound = 1.0 / (qpoch_inf(abs(a) * math.sqrt(q), q).value.real * qpoch_inf(abs(b) * math.sqrt(q), q).value.real)
    shift = m.real
    scale = bound * math.exp(shift * shift)
    mass = scale * math.sqrt(math.pi)
    tail_fn = lambda A: scale * float(_gauss_tail(1.0, shift, A))
    start = auto_cutoff(math.exp(-1.0)) + math.ceil(abs(shift))
    cutoff, tail = _choose_cutoff(quad, start, tail_fn, mass)
    nodes, w = quad.rule(cutoff, _pole_panel(max(abs(a), abs(b)) * math.sqrt(q), k))
    dens = ramanujan_density(a, b, k, nodes)
    rhs = complex(np.sum(w * dens * np.exp(2.0 * m * nodes)))
    dmin = float(np.min(dens.real)) if b == a.conjugate() else float("nan")
    return TransformCheck(lhs, rhs, _rel_err(lhs, rhs), dmin, cutoff, len(nodes), tail,
                          mass / max(abs(lhs), 1e-300))


def verify_ramanujan_abs_square(c, k: float, m: float, quad: QuadratureSpec = QuadratureSpec()) -> TransformCheck:
    """int e^{-x^2+2imx} / |(c e^{2ikx};q)_inf|^2 dx
    = sqrt(pi) e^{-m^2} (-c q^{1/2} e^{-2mk}, -conj(c) q^{1/2} e^{2mk}; q)_inf / (|c|^2; q)_inf.

    Evaluated from its own closed form, independently of the parent identity.
    """
    q = _k_base(k)
    c = check_complex(c, "c")
    m = float(m)
    if not abs(c) < 1:
        raise DomainViolation(f"|c| must be < 1, got {abs(c)!r}")
    rq = math.sqrt(q)
    lhs = (math.sqrt(math.pi) * math.exp(-m * m)
           * qpoch_inf(-c * rq * math.exp(-2.0 * m * k), q).value
           * qpoch_inf(-c.conjugate() * rq * math.exp(2.0 * m * k), q).value
           / qpoch_inf(abs(c) ** 2, q).value)
    scale = 1.0 / qpoch_inf(abs(c), q).value.real ** 2
    mass = scale * math.sqrt(math.pi)
    tail_fn = lambda A: scale * float(_gauss_tail(1.0, 0.0, A))
    cutoff, tail = _choose_cutoff(quad, auto_cutoff(math.exp(-1.0)), tail_fn, mass)
    nodes, w = quad.rule(cutoff, _pole_panel(abs(c), k))
    e = np.exp(2j * k * nodes)
    dens = np.exp(-nodes * nodes) / np.abs(_qpoch_vec(c * e, q)) ** 2
    rhs = complex(np.sum(w * dens * np.exp(2j * m * nodes)))
    return TransformCheck(lhs, rhs, _rel_err(lhs, rhs), float(np.min(dens)), cutoff, len(nodes), tail,
                          mass / max(abs(lhs), 1e-300))


def reconstruct_density(theorem_id: str, params: dict, alphas) -> np.ndarray:
    """Sample the density of the named transform: ``euler`` (z, q), ``phi11``
    (a, b, z, q) or ``ramanujan`` (c, k; the variable is x)."""
    if theorem_id == "euler":
        return euler_density(params["z"], params["q"], alphas).real
    if theorem_id == "phi11":
        return phi11_density(params["a"], params["b"], params["z"], params["q"], alphas)
    if theorem_id == "ramanujan":
        c = complex(params["c"])
        return ramanujan_density(c, c.conjugate(), params["k"], alphas).real
    raise DomainViolation(f"unknown transform {theorem_id!r}; expected euler, phi11 or ramanujan")
