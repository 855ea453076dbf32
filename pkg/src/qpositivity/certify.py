"""Signed margins for the inequalities that follow from positive definiteness.

Each ``ineq_*`` function evaluates both sides of one inequality and returns a
:class:`MarginReport` oriented so that ``lhs >= rhs`` is the claim.  Both
sides are positive, so they are computed as logarithms and only
exponentiated for display; the stable relative margin
``(lhs - rhs) / max(lhs, rhs)`` is what survives when q is close to 1 and
the sides themselves underflow.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainViolation
from .gram import Variant
from .qkernel import (
    TruncationPolicy,
    log_q_gamma,
    log_qpoch_inf,
    log_theta4_product,
)

__all__ = [
    "INEQUALITY_IDS",
    "VARIANT_IDS",
    "CERTIFY_POLICY",
    "MarginReport",
    "ParamRange",
    "SweepGrid",
    "SweepResult",
    "ineq_2_3",
    "ineq_2_6",
    "ineq_2_7",
    "ineq_2_8",
    "ineq_2_9",
    "ineq_2_10",
    "ineq_2_13a",
    "moebius_map",
    "ineq_mapped",
    "ineq_2_20",
    "ineq_2_23",
    "ineq_2_24",
    "ineq_2_28",
    "evaluate",
    "draw_inputs",
    "sweep",
]

INEQUALITY_IDS = (
    "2.3", "2.6", "2.7", "2.8", "2.9", "2.10", "2.13a",
    "2.15", "2.16", "2.17", "2.20", "2.23", "2.24", "2.28",
)
MAPPED_IDS = ("2.15", "2.16", "2.17")
# Ids whose display differs between the literal reading and the derived one.
VARIANT_IDS = ("2.15", "2.16", "2.17", "2.20", "2.23", "2.24")

# Products at q = 0.999 need tens of thousands of factors.
CERTIFY_POLICY = TruncationPolicy(tail_tol=1e-16, max_terms=1_000_000)

ABS_TOL = 1e-12


def _lp(a, q, policy) -> complex:
    return log_qpoch_inf(a, q, policy).value


@dataclass(frozen=True)
class MarginReport:
    ineq_id: str
    inputs: dict
    lhs: float
    rhs: float
    margin: float
    passed: bool
    log_lhs: float
    log_rhs: float
    rel_margin: float
    variant: str = Variant.DERIVED.value
    note: str = ""

    @classmethod
    def from_logs(cls, ineq_id: str, inputs: dict, log_lhs: float, log_rhs: float,
                  variant: Variant | str = Variant.DERIVED, note: str = "") -> "MarginReport":
        log_lhs, log_rhs = float(log_lhs), float(log_rhs)
        if not (math.isfinite(log_lhs) and math.isfinite(log_rhs)):
            raise DomainViolation(f"{ineq_id}: a side is zero or non-finite at {inputs}")
        d = log_rhs - log_lhs
        rel = -math.expm1(d) if d <= 0 else math.expm1(-d)
        lhs, rhs = _safe_exp(log_lhs), _safe_exp(log_rhs)
        margin = max(lhs, rhs) * rel
        abs_tol = ABS_TOL * max(abs(lhs), abs(rhs), 1.0)
        return cls(ineq_id, dict(inputs), lhs, rhs, margin, margin >= -abs_tol,
                   log_lhs, log_rhs, rel, Variant(variant).value, note)

    @property
    def abs_tol(self) -> float:
        return ABS_TOL * max(abs(self.lhs), abs(self.rhs), 1.0)

    @property
    def log_ratio(self) -> float:
        return self.log_lhs - self.log_rhs

    def holds(self, rel_tol: float = 1e-10) -> bool:
        """Verdict used by sweeps: the absolute rule and the scale-free one."""
        return self.passed and self.rel_margin >= -rel_tol

    def to_dict(self) -> dict:
        return {
            "ineq_id": self.ineq_id,
            "variant": self.variant,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "rel_margin": self.rel_margin,
            "log_ratio": self.log_ratio,
            "pass": self.passed,
            "note": self.note,
        }


def _safe_exp(t: float) -> float:
    return math.exp(t) if t < 709.0 else math.inf


def _check_unit(name: str, value: float, lo: float = 0.0, hi: float = 1.0):
    if not (lo < value < hi):
        raise DomainViolation(f"{name}={value!r} must lie in ({lo}, {hi})")


def _as_list(v) -> list[float]:
    if isinstance(v, (list, tuple, np.ndarray)):
        return [float(t) for t in v]
    return [float(v)]


# ---------------------------------------------------------------------------
# Euler family


def ineq_2_3(y, q, x: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """prod_l (y_l;q_l)_inf / |(y_l e^{ix};q_l)_inf| * exp(x^2 / log q_l^4) <= 1."""
    ys, qs = _as_list(y), _as_list(q)
    if len(ys) != len(qs) or not ys:
        raise DomainViolation("y and q must be non-empty lists of equal length")
    for yl, ql in zip(ys, qs):
        _check_unit("y", yl)
        _check_unit("q", ql)
    e = cmath.exp(1j * x)
    log_prod = math.fsum(
        _lp(yl, ql, policy).real - _lp(yl * e, ql, policy).real + x * x / (4.0 * math.log(ql))
        for yl, ql in zip(ys, qs)
    )
    return MarginReport.from_logs("2.3", {"y": ys, "q": qs, "x": x}, 0.0, log_prod)


def ineq_2_9(y: float, q: float, x: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """|(y e^{ix};q)_inf| >= (y;q)_inf exp(x^2 / (4 log q))."""
    _check_unit("y", y)
    _check_unit("q", q)
    lhs = _lp(y * cmath.exp(1j * x), q, policy).real
    rhs = _lp(y, q, policy).real + x * x / (4.0 * math.log(q))
    return MarginReport.from_logs("2.9", {"y": y, "q": q, "x": x}, lhs, rhs)


def ineq_2_6(u: float, v: float, q: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """|(q^{u+iv};q)_inf| >= (q^u;q)_inf q^{v^2/4}."""
    if not u > 0:
        raise DomainViolation(f"u={u!r} must be positive")
    _check_unit("q", q)
    lnq = math.log(q)
    lhs = _lp(cmath.exp(complex(u, v) * lnq), q, policy).real
    rhs = _lp(math.exp(u * lnq), q, policy).real + 0.25 * v * v * lnq
    return MarginReport.from_logs("2.6", {"u": u, "v": v, "q": q}, lhs, rhs)


def ineq_2_7(u: float, v: float, q: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """Gamma_q(u) >= |Gamma_q(u + iv)| q^{v^2/4}."""
    if not u > 0:
        raise DomainViolation(f"u={u!r} must be positive")
    _check_unit("q", q)
    lhs = log_q_gamma(u, q, policy).value.real
    rhs = log_q_gamma(complex(u, v), q, policy).value.real + 0.25 * v * v * math.log(q)
    return MarginReport.from_logs("2.7", {"u": u, "v": v, "q": q}, lhs, rhs)


def _log_theta4_iu(v: complex, u: float, policy) -> complex:
    """log theta_4(v | iu) through the product with z = e^{2 pi i v}, q = e^{-pi u}."""
    return log_theta4_product(cmath.exp(2j * math.pi * v), math.exp(-math.pi * u), policy).value


def ineq_2_8(u: float, v: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """theta_4(v|iu) / theta_4(0|iu) >= e^{-pi v^2 / u}."""
    if not u > 0:
        raise DomainViolation(f"u={u!r} must be positive")
    lhs = _log_theta4_iu(v, u, policy).real - _log_theta4_iu(0.0, u, policy).real
    rhs = -math.pi * v * v / u
    return MarginReport.from_logs("2.8", {"u": u, "v": v}, lhs, rhs)


def ineq_2_10(x: float, q: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """(q^2, q e^{ix}, q e^{-ix}; q^2)_inf >= (q^2, q, q; q^2)_inf exp(x^2 / (4 log q))."""
    _check_unit("q", q)
    q2 = q * q
    common = _lp(q2, q2, policy).real
    lhs = common + 2.0 * _lp(q * cmath.exp(1j * x), q2, policy).real
    rhs = common + 2.0 * _lp(q, q2, policy).real + x * x / (4.0 * math.log(q))
    return MarginReport.from_logs("2.10", {"x": x, "q": q}, lhs, rhs)


def ineq_2_13a(u: float, v: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """|theta_4(ui - v | ui)| >= theta_4(0|ui) e^{pi u (1 - v^2/u^2)}."""
    if not u > 0:
        raise DomainViolation(f"u={u!r} must be positive")
    lhs = _log_theta4_iu(complex(-v, u), u, policy).real
    rhs = _log_theta4_iu(0.0, u, policy).real + math.pi * u * (1.0 - (v / u) ** 2)
    return MarginReport.from_logs("2.13a", {"u": u, "v": v}, lhs, rhs)


# ---------------------------------------------------------------------------
# Images of the unit disk


def moebius_map(z) -> complex:
    """(1 + z) / (1 - z), a bijection of the unit disk onto Re w > 0."""
    z = complex(z)
    if not abs(z) < 1:
        raise DomainViolation(f"|z| must be < 1, got {abs(z)!r}")
    x, y = z.real, z.imag
    d = (1.0 - x) ** 2 + y * y
    return complex((1.0 - x * x - y * y) / d, 2.0 * y / d)


def ineq_mapped(ineq_id: str, z, q: float | None = None, variant: Variant | str = Variant.DERIVED,
                policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """The q-Pochhammer, q-Gamma and theta_4 bounds pulled back through ``moebius_map``.

    ``2.15`` and ``2.16`` use the exponent y^2 / ((1-x)^2 + y^2)^2 in both
    variants; it equals (Im f(z))^2 / 4, so the literal and derived readings
    coincide.  For ``2.17`` the derived bound is exp(pi (U - V^2/U)) with
    f = U + iV, the literal one has the opposite sign in the exponent and is
    report-only.
    """
    variant = Variant(variant)
    z = complex(z)
    f = moebius_map(z)
    x, y = z.real, z.imag
    d = (1.0 - x) ** 2 + y * y
    big_u, big_v = f.real, f.imag
    inputs = {"x": x, "y": y}
    if ineq_id in ("2.15", "2.16"):
        if q is None:
            raise DomainViolation(f"{ineq_id} needs a base q")
        _check_unit("q", q)
        inputs["q"] = q
        lnq = math.log(q)
        exponent = (y * y / (d * d)) * lnq
        if ineq_id == "2.15":
            lhs = _lp(cmath.exp(f * lnq), q, policy).real
            rhs = _lp(math.exp(big_u * lnq), q, policy).real + exponent
        else:
            lhs = log_q_gamma(big_u, q, policy).value.real
            rhs = log_q_gamma(f, q, policy).value.real + exponent
        return MarginReport.from_logs(ineq_id, inputs, lhs, rhs, variant)
    if ineq_id == "2.17":
        lhs = _log_theta4_iu(1j * f, big_u, policy).real
        base = _log_theta4_iu(0.0, big_u, policy).real
        if variant is Variant.DERIVED:
            exponent = math.pi * (big_u - big_v * big_v / big_u)
            note = ""
        else:
            r2 = 1.0 - x * x - y * y
            exponent = math.pi * (4.0 * y * y - r2 * r2) / (d * r2)
            note = "literal exponent; no pass expectation"
        return MarginReport.from_logs(ineq_id, inputs, lhs, base + exponent, variant, note)
    raise DomainViolation(f"unknown mapped inequality {ineq_id!r}; expected one of {MAPPED_IDS}")


# ---------------------------------------------------------------------------
# 1phi1 family


def _check_phi11(a, b, z, q):
    _check_unit("a", a, -1.0, 1.0)
    _check_unit("b", b)
    _check_unit("z", z)
    _check_unit("q", q)


def ineq_2_20(a, b, z, q, x: float, variant: Variant | str = Variant.DERIVED,
              policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """Modulus of the normalized 1phi1 kernel against its Gaussian envelope.

    Derived form: prod_l |(b, z; q)/(b e^{ix}, z e^{ix}; q) * (a z e^{ix}; q)/(a z; q)|
    <= prod_l exp(-x^2 / log q_l^2).  The literal reading has -z in place of z
    and exp(+x^2 / log q_l^2) on the right; it is report-only.
    """
    variant = Variant(variant)
    cols = [_as_list(t) for t in (a, b, z, q)]
    if len({len(c) for c in cols}) != 1 or not cols[0]:
        raise DomainViolation("a, b, z, q must be non-empty lists of equal length")
    sign = 1.0 if variant is Variant.DERIVED else -1.0
    e = cmath.exp(1j * x)
    ratio_terms, env_terms = [], []
    for al, bl, zl, ql in zip(*cols):
        _check_phi11(al, bl, zl, ql)
        s = sign * zl
        ratio_terms.append(
            _lp(bl, ql, policy).real + _lp(s, ql, policy).real
            - _lp(bl * e, ql, policy).real - _lp(s * e, ql, policy).real
            + _lp(al * zl * e, ql, policy).real - _lp(al * zl, ql, policy).real
        )
        env_terms.append(-sign * x * x / (2.0 * math.log(ql)))
    inputs = {"a": cols[0], "b": cols[1], "z": cols[2], "q": cols[3], "x": x}
    note = "" if variant is Variant.DERIVED else "literal signs; no pass expectation"
    return MarginReport.from_logs("2.20", inputs, math.fsum(env_terms), math.fsum(ratio_terms), variant, note)


def ineq_2_23(a: float, b: float, c: float, q: float, v: float,
              variant: Variant | str = Variant.DERIVED,
              policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """|(a q^{iv}, s b q^{iv}; q)/(b c q^{iv}; q)| >= (a, s b; q)/(b c; q) q^{v^2/2}.

    The denominator's free oscillation is bound to q^{iv} (x = v log q).
    s = +1 in the derived form, -1 in the literal one.
    """
    variant = Variant(variant)
    _check_unit("a", a)
    _check_unit("b", b)
    _check_unit("q", q)
    _check_unit("c", c, -1.0, 1.0)
    lnq = math.log(q)
    w = cmath.exp(1j * v * lnq)
    sb = (1.0 if variant is Variant.DERIVED else -1.0) * b
    lhs = _lp(a * w, q, policy).real + _lp(sb * w, q, policy).real - _lp(b * c * w, q, policy).real
    rhs = _lp(a, q, policy).real + _lp(sb, q, policy).real - _lp(b * c, q, policy).real + 0.5 * v * v * lnq
    note = "" if variant is Variant.DERIVED else "literal signs; no pass expectation"
    return MarginReport.from_logs("2.23", {"a": a, "b": b, "c": c, "q": q, "v": v}, lhs, rhs, variant, note)


def ineq_2_24(a: float, b: float, q: float, v: float, variant: Variant | str = Variant.DERIVED,
              policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """The a = b specialization of ``ineq_2_23`` with c renamed to a.

    Literal: |(b^2 q^{2iv}; q^2)/(a b q^{iv}; q)| >= (b^2; q^2)/(a b; q) q^{v^2/2}.
    Derived: (b q^{iv}; q)^2 replaces (b^2 q^{2iv}; q^2) on both sides.
    """
    variant = Variant(variant)
    _check_unit("a", a, -1.0, 1.0)
    _check_unit("b", b)
    _check_unit("q", q)
    lnq = math.log(q)
    w = cmath.exp(1j * v * lnq)
    if variant is Variant.DERIVED:
        top_l = 2.0 * _lp(b * w, q, policy).real
        top_r = 2.0 * _lp(b, q, policy).real
    else:
        top_l = _lp(b * b * w * w, q * q, policy).real
        top_r = _lp(b * b, q * q, policy).real
    lhs = top_l - _lp(a * b * w, q, policy).real
    rhs = top_r - _lp(a * b, q, policy).real + 0.5 * v * v * lnq
    return MarginReport.from_logs("2.24", {"a": a, "b": b, "q": q, "v": v}, lhs, rhs, variant)


# ---------------------------------------------------------------------------
# Gaussian family


def ineq_2_28(c: float, k: float, x: float, policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """(-c e^{-2xk}, -c e^{2xk}; q)_inf <= e^{x^2} (-c, -c; q)_inf with q = e^{-2k^2}."""
    if not k > 0:
        raise DomainViolation(f"k={k!r} must be positive")
    q = math.exp(-2.0 * k * k)
    _check_unit("c", c, 0.0, math.exp(-k * k))
    lhs = x * x + 2.0 * _lp(-c, q, policy).real
    rhs = _lp(-c * math.exp(-2.0 * x * k), q, policy).real + _lp(-c * math.exp(2.0 * x * k), q, policy).real
    return MarginReport.from_logs("2.28", {"c": c, "k": k, "x": x}, lhs, rhs)


# ---------------------------------------------------------------------------
# Dispatch and sweeps

EDGE = 1e-3
UNIT = (EDGE, 1.0 - EDGE)
SIGNED_UNIT = (-1.0 + EDGE, 1.0 - EDGE)
U_RANGE = (EDGE, 10.0)
X_RANGE = (-10.0, 10.0)

# Sampling box per parameter; the symmetry variable is listed last.
DRAW_BOXES = {
    "2.3": {"y": UNIT, "q": UNIT, "x": X_RANGE},
    "2.9": {"y": UNIT, "q": UNIT, "x": X_RANGE},
    "2.6": {"u": U_RANGE, "q": UNIT, "v": X_RANGE},
    "2.7": {"u": U_RANGE, "q": UNIT, "v": X_RANGE},
    "2.8": {"u": U_RANGE, "v": (-2.0, 2.0)},
    "2.10": {"q": UNIT, "x": X_RANGE},
    "2.13a": {"u": U_RANGE, "v": (-2.0, 2.0)},
    "2.15": {"q": UNIT, "x": SIGNED_UNIT, "y": SIGNED_UNIT},
    "2.16": {"q": UNIT, "x": SIGNED_UNIT, "y": SIGNED_UNIT},
    "2.17": {"x": SIGNED_UNIT, "y": SIGNED_UNIT},
    "2.20": {"a": SIGNED_UNIT, "b": UNIT, "z": UNIT, "q": UNIT, "x": X_RANGE},
    "2.23": {"a": UNIT, "b": UNIT, "c": SIGNED_UNIT, "q": UNIT, "v": X_RANGE},
    "2.24": {"a": SIGNED_UNIT, "b": UNIT, "q": UNIT, "v": X_RANGE},
    "2.28": {"k": (0.03, 3.0), "c": UNIT, "x": (-5.0, 5.0)},
}
SYMMETRY_VAR = {i: list(box)[-1] for i, box in DRAW_BOXES.items()}
MULTI_FACTOR = {"2.3": ("y", "q"), "2.20": ("a", "b", "z", "q")}
DISK_RADIUS = 1.0 - EDGE


def evaluate(ineq_id: str, inputs: dict, variant: Variant | str = Variant.DERIVED,
             policy: TruncationPolicy = CERTIFY_POLICY) -> MarginReport:
    """Dispatch ``inputs`` (a parameter record) to the inequality ``ineq_id``."""
    p = inputs
    if ineq_id == "2.3":
        return ineq_2_3(p["y"], p["q"], p["x"], policy)
    if ineq_id == "2.9":
        return ineq_2_9(p["y"], p["q"], p["x"], policy)
    if ineq_id == "2.6":
        return ineq_2_6(p["u"], p["v"], p["q"], policy)
    if ineq_id == "2.7":
        return ineq_2_7(p["u"], p["v"], p["q"], policy)
    if ineq_id == "2.8":
        return ineq_2_8(p["u"], p["v"], policy)
    if ineq_id == "2.10":
        return ineq_2_10(p["x"], p["q"], policy)
    if ineq_id == "2.13a":
        return ineq_2_13a(p["u"], p["v"], policy)
    if ineq_id in MAPPED_IDS:
        return ineq_mapped(ineq_id, complex(p["x"], p["y"]), p.get("q"), variant, policy)
    if ineq_id == "2.20":
        return ineq_2_20(p["a"], p["b"], p["z"], p["q"], p["x"], variant, policy)
    if ineq_id == "2.23":
        return ineq_2_23(p["a"], p["b"], p["c"], p["q"], p["v"], variant, policy)
    if ineq_id == "2.24":
        return ineq_2_24(p["a"], p["b"], p["q"], p["v"], variant, policy)
    if ineq_id == "2.28":
        return ineq_2_28(p["c"], p["k"], p["x"], policy)
    raise DomainViolation(f"unknown inequality id {ineq_id!r}; expected one of {INEQUALITY_IDS}")


def _mapped_ok(x: float, y: float) -> bool:
    if x * x + y * y >= DISK_RADIUS ** 2:
        return False
    u = moebius_map(complex(x, y)).real
    return U_RANGE[0] <= u <= U_RANGE[1]


def draw_inputs(ineq_id: str, rng: np.random.Generator, boxes: dict | None = None,
                n_factors: int | None = None, max_factors: int = 3) -> dict:
    """One random parameter record for ``ineq_id`` inside its clamped domain.

    ``boxes`` overrides individual sampling intervals.  Constrained domains
    (the disk for the mapped bounds, c < e^{-k^2} for 2.28) are met by
    rejection or by rescaling, always consuming the generator in a fixed order.
    """
    if ineq_id not in DRAW_BOXES:
        raise DomainViolation(f"unknown inequality id {ineq_id!r}")
    box = dict(DRAW_BOXES[ineq_id])
    box.update(boxes or {})
    if ineq_id in MULTI_FACTOR:
        n = int(rng.integers(1, max_factors + 1)) if n_factors is None else n_factors
        out = {}
        for name in box:
            if name in MULTI_FACTOR[ineq_id]:
                out[name] = [float(rng.uniform(*box[name])) for _ in range(n)]
            else:
                out[name] = float(rng.uniform(*box[name]))
        return out
    if ineq_id in MAPPED_IDS:
        while True:
            out = {name: float(rng.uniform(*box[name])) for name in box}
            if _mapped_ok(out["x"], out["y"]):
                return out
    out = {name: float(rng.uniform(*box[name])) for name in box}
    if ineq_id == "2.28":
        out["c"] *= math.exp(-out["k"] ** 2)
    return out


@dataclass(frozen=True)
class ParamRange:
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"range needs at least one point, got count={self.count}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("range bounds must be finite")

    @classmethod
    def parse(cls, text: str) -> "ParamRange":
        """Parse ``lo:hi:count`` (or a single value)."""
        parts = text.split(":")
        if len(parts) == 1:
            v = float(parts[0])
            return cls(v, v, 1)
        if len(parts) != 3:
            raise ValueError(f"expected lo:hi:count, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.lo]
        return [float(t) for t in np.linspace(self.lo, self.hi, self.count)]

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "count": self.count}


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid over ``ranges``, or ``random`` seeded draws when random > 0.

    In random mode the ranges, when given, replace the default sampling
    intervals of the named parameters.
    """

    ranges: dict = field(default_factory=dict)
    random: int = 0
    seed: int = 0
    variant: Variant = Variant.DERIVED
    n_factors: int | None = None

    def __post_init__(self):
        ranges = {k: v if isinstance(v, ParamRange) else ParamRange(**v) for k, v in self.ranges.items()}
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.random < 0:
            raise ValueError("random draw count must be nonnegative")
        if self.random == 0 and not ranges:
            raise ValueError("empty sweep: give parameter ranges or a random draw count")

    def to_dict(self) -> dict:
        return {
            "ranges": {k: r.to_dict() for k, r in self.ranges.items()},
            "random": self.random,
            "seed": self.seed,
            "variant": self.variant.value,
            "n_factors": self.n_factors,
        }


@dataclass
class SweepResult:
    ineq_id: str
    reports: list
    pass_count: int
    fail_count: int
    min_rel_margin: float
    argmin_inputs: dict

    def to_dict(self) -> dict:
        return {
            "ineq_id": self.ineq_id,
            "count": len(self.reports),
            "pass_count": self.pass_count,
            "fail_count": self.fail_count,
            "min_rel_margin": self.min_rel_margin,
            "argmin_inputs": self.argmin_inputs,
        }


def _grid_inputs(ineq_id: str, grid: SweepGrid):
    names = list(DRAW_BOXES[ineq_id])
    missing = [n for n in names if n not in grid.ranges]
    extra = [n for n in grid.ranges if n not in names]
    if missing or extra:
        raise ValueError(f"{ineq_id} grid needs ranges for {names}; missing {missing}, unknown {extra}")
    axes = [grid.ranges[n].values() for n in names]
    for combo in itertools.product(*axes):
        p = dict(zip(names, combo))
        if ineq_id in MULTI_FACTOR:
            p = {k: [v] if k in MULTI_FACTOR[ineq_id] else v for k, v in p.items()}
        yield p


def sweep(ineq_id: str, grid: SweepGrid, policy: TruncationPolicy = CERTIFY_POLICY,
          rel_tol: float = 1e-10) -> SweepResult:
    """Evaluate ``ineq_id`` over the grid in a fixed order and aggregate."""
    if ineq_id not in DRAW_BOXES:
        raise DomainViolation(f"unknown inequality id {ineq_id!r}")
    if grid.random > 0:
        rng = np.random.default_rng(grid.seed)
        boxes = {k: (r.lo, r.hi) for k, r in grid.ranges.items()}
        inputs = (draw_inputs(ineq_id, rng, boxes, grid.n_factors) for _ in range(grid.random))
    else:
        inputs = _grid_inputs(ineq_id, grid)
    reports = [evaluate(ineq_id, p, grid.variant, policy) for p in inputs]
    if not reports:
        raise ValueError("empty sweep")
    passes = sum(r.holds(rel_tol) for r in reports)
    worst = min(reports, key=lambda r: r.rel_margin)
    return SweepResult(ineq_id, reports, passes, len(reports) - passes, worst.rel_margin, worst.inputs)
