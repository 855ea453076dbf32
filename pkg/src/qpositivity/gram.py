"""Gram matrices of the three positive definite kernels and their PSD certificates.

A kernel f with f(-x) = conj(f(x)) gives the Hermitian matrix
(f(x_j - x_k))_{j,k}.  Only the upper triangle is evaluated; the lower one
is its mirror, so the Hermitian property holds exactly rather than to
rounding.  Eigenvalues come from a cyclic complex Jacobi iteration, which
copes with the rank-deficient matrices produced by repeated sample points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DimMismatch, DomainViolation, NumericalFailure
from .qkernel import DEFAULT_POLICY, TruncationPolicy, qpoch_inf

__all__ = [
    "Theorem",
    "Variant",
    "GramSpec",
    "HermitianMatrix",
    "PsdVerdict",
    "kernel_value",
    "kernel_value_euler",
    "kernel_value_phi11",
    "kernel_value_gauss",
    "build_gram",
    "jacobi_eigvalsh",
    "psd_check",
    "schur_product",
    "det_hermitian",
    "random_gram_spec",
]


class Theorem(str, Enum):
    EULER = "euler"
    PHI11 = "phi11"
    GAUSS = "gauss"


class Variant(str, Enum):
    """Which reading of a display to evaluate.

    ``DERIVED`` is the form that follows from the integral representation
    (and carries a pass expectation); ``AS_PRINTED`` reproduces the display
    literally and is report-only where the two differ.
    """

    DERIVED = "derived_form"
    AS_PRINTED = "as_printed"


_PARAM_NAMES = {
    Theorem.EULER: ("y", "q"),
    Theorem.PHI11: ("a", "b", "z", "q"),
    Theorem.GAUSS: ("c", "k"),
}


def _check_params(theorem: Theorem, params) -> tuple[tuple[float, ...], ...]:
    names = _PARAM_NAMES[theorem]
    out = []
    for p in params:
        p = tuple(float(t) for t in p)
        if len(p) != len(names):
            raise DomainViolation(f"{theorem.value} factor needs {names}, got {p}")
        if not all(math.isfinite(t) for t in p):
            raise DomainViolation(f"non-finite parameter in {p}")
        if theorem is Theorem.EULER:
            y, q = p
            ok = 0 < y < 1 and 0 < q < 1
        elif theorem is Theorem.PHI11:
            a, b, z, q = p
            ok = 0 < z < 1 and 0 < b < 1 and 0 < q < 1 and -1 < a < 1
        else:
            c, k = p
            ok = 0 < c < 1 and k > 0
        if not ok:
            raise DomainViolation(f"{theorem.value} parameters {dict(zip(names, p))} outside the hypothesis domain")
        out.append(p)
    if not out:
        raise DomainViolation("at least one factor is required")
    return tuple(out)


@dataclass(frozen=True)
class GramSpec:
    theorem: Theorem
    params: tuple[tuple[float, ...], ...]
    points: tuple[float, ...]
    variant: Variant = Variant.DERIVED

    def __post_init__(self):
        theorem = Theorem(self.theorem)
        object.__setattr__(self, "theorem", theorem)
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "params", _check_params(theorem, self.params))
        points = tuple(float(x) for x in self.points)
        if not points:
            raise DomainViolation("a Gram matrix needs at least one sample point")
        if not all(math.isfinite(x) for x in points):
            raise DomainViolation("sample points must be finite")
        object.__setattr__(self, "points", points)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "params": [list(p) for p in self.params],
            "points": list(self.points),
            "variant": self.variant.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GramSpec":
        return cls(
            theorem=d["theorem"],
            params=d["params"],
            points=d["points"],
            variant=d.get("variant", Variant.DERIVED.value),
        )


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise DimMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainViolation("matrix has non-finite entries")
        if not np.array_equal(a, a.conj().T):
            raise DomainViolation("matrix is not Hermitian")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.entries)))

    @classmethod
    def from_upper(cls, upper: np.ndarray) -> "HermitianMatrix":
        """Mirror the upper triangle; the diagonal keeps its real part."""
        a = np.triu(np.asarray(upper, dtype=complex), 1)
        a = a + a.conj().T + np.diag(np.diag(np.asarray(upper)).real)
        return cls(a)

    def to_json(self) -> list:
        return [[[float(v.real), float(v.imag)] for v in row] for row in self.entries]

    @classmethod
    def from_json(cls, rows) -> "HermitianMatrix":
        try:
            a = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
        except (TypeError, ValueError) as exc:
            raise DomainViolation(f"matrix must be rows of [re, im] pairs: {exc}") from None
        return cls(a)


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float
    scale: float
    eigenvalues: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "is_psd": self.is_psd,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance_used": self.tolerance_used,
            "scale": self.scale,
        }


# ---------------------------------------------------------------------------
# Kernels


def kernel_value_euler(params, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """prod_l exp(x^2 / log q_l^4) / (y_l e^{ix}; q_l)_inf."""
    e = cmath.exp(1j * x)
    value = 1.0 + 0.0j
    for y, q in params:
        value *= math.exp(x * x / (4.0 * math.log(q))) / qpoch_inf(y * e, q, policy).value
    return value


def kernel_value_phi11(params, x: float, variant: Variant = Variant.DERIVED,
                       policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """prod_l (a z e^{ix}; q)_inf exp(x^2 / log q^2) / (b e^{ix}, s z e^{ix}; q)_inf.

    ``s`` is +1 for the derived form, which is the Fourier transform of the
    positive 1phi1 density, and -1 for the display as printed.
    """
    sign = 1.0 if Variant(variant) is Variant.DERIVED else -1.0
    e = cmath.exp(1j * x)
    value = 1.0 + 0.0j
    for a, b, z, q in params:
        num = qpoch_inf(a * z * e, q, policy).value
        den = qpoch_inf(b * e, q, policy).value * qpoch_inf(sign * z * e, q, policy).value
        value *= num * math.exp(x * x / (2.0 * math.log(q))) / den
    return value


def kernel_value_gauss(params, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """prod_j e^{-x^2} (-c e^{-k^2 - 2xk}, -c e^{-k^2 + 2xk}; q_j)_inf, q_j = e^{-2 k^2}."""
    value = 1.0
    for c, k in params:
        q = math.exp(-2.0 * k * k)
        left = qpoch_inf(-c * math.exp(-k * k - 2.0 * x * k), q, policy).value.real
        right = qpoch_inf(-c * math.exp(-k * k + 2.0 * x * k), q, policy).value.real
        value *= math.exp(-x * x) * left * right
    return complex(value)


def kernel_value(spec: GramSpec, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    if spec.theorem is Theorem.EULER:
        return kernel_value_euler(spec.params, x, policy)
    if spec.theorem is Theorem.PHI11:
        return kernel_value_phi11(spec.params, x, spec.variant, policy)
    return kernel_value_gauss(spec.params, x, policy)


def build_gram(spec: GramSpec, policy: TruncationPolicy = DEFAULT_POLICY) -> HermitianMatrix:
    """Materialize (f(x_j - x_k))_{j,k} for the kernel named by ``spec``."""
    pts = spec.points
    m = len(pts)
    upper = np.zeros((m, m), dtype=complex)
    f0 = kernel_value(spec, 0.0, policy)
    for j in range(m):
        upper[j, j] = f0.real
        for k in range(j + 1, m):
            upper[j, k] = kernel_value(spec, pts[j] - pts[k], policy)
    return HermitianMatrix.from_upper(upper)


# ---------------------------------------------------------------------------
# Spectral machinery


def jacobi_eigvalsh(matrix, max_rotations: int | None = None) -> np.ndarray:
    """Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first rephases column q so that a_pq becomes real, then
    applies the classical real rotation that annihilates it.
    """
    a = np.array(matrix, dtype=complex)
    m = a.shape[0]
    if m == 1:
        return np.array([a[0, 0].real])
    limit = 30 * m * m if max_rotations is None else max_rotations
    frob = np.linalg.norm(a)
    if frob == 0.0:
        return np.zeros(m)
    target = 1e-15 * frob
    rotations = 0
    while True:
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                if rotations >= limit:
                    raise NumericalFailure(f"Jacobi iteration exceeded {limit} rotations (dim {m})")
                rotations += 1
                phase = apq / g
                a[:, q] *= phase.conjugate()
                a[q, :] *= phase
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return np.sort(np.diag(a).real)


def psd_check(matrix: HermitianMatrix, rel_tol: float = 1e-10) -> PsdVerdict:
    """Certify positive semidefiniteness up to rel_tol * dim * max|entry|."""
    eig = jacobi_eigvalsh(matrix.entries)
    scale = matrix.scale
    tol = rel_tol * matrix.dim * scale
    lam_min = float(eig[0])
    return PsdVerdict(lam_min >= -tol, lam_min, tol, scale, tuple(float(e) for e in eig))


def schur_product(a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    """Entrywise (Hadamard) product."""
    if a.dim != b.dim:
        raise DimMismatch(f"Schur product of {a.dim}x{a.dim} and {b.dim}x{b.dim} matrices")
    return HermitianMatrix.from_upper(a.entries * b.entries)


def det_hermitian(matrix: HermitianMatrix) -> float:
    return float(np.prod(jacobi_eigvalsh(matrix.entries)))


# ---------------------------------------------------------------------------
# Random instances

SAMPLE_DOMAINS = {
    Theorem.EULER: {"y": (0.05, 0.95), "q": (0.05, 0.95)},
    Theorem.PHI11: {"a": (-0.95, 0.95), "b": (0.05, 0.95), "z": (0.05, 0.95), "q": (0.05, 0.95)},
    Theorem.GAUSS: {"c": (0.05, 0.95), "k": (0.1, 2.0)},
}
POINT_RANGE = (-4.0, 4.0)


def random_gram_spec(theorem, rng: np.random.Generator, m: int | None = None,
                     n: int | None = None, max_m: int = 12, max_n: int = 3) -> GramSpec:
    """Draw a GramSpec uniformly from the sampling box of ``theorem``."""
    theorem = Theorem(theorem)
    m = int(rng.integers(1, max_m + 1)) if m is None else m
    n = int(rng.integers(1, max_n + 1)) if n is None else n
    box = SAMPLE_DOMAINS[theorem]
    params = [tuple(float(rng.uniform(*box[name])) for name in _PARAM_NAMES[theorem]) for _ in range(n)]
    points = [float(x) for x in rng.uniform(*POINT_RANGE, size=m)]
    return GramSpec(theorem, params, points)


def spec_factors(spec: GramSpec) -> list[GramSpec]:
    """Single-factor specs whose Gram matrices multiply entrywise to ``spec``'s."""
    return [GramSpec(spec.theorem, [p], spec.points, spec.variant) for p in spec.params]


def points_with_repeats(points: Sequence[float], rng: np.random.Generator) -> list[float]:
    pts = list(points)
    if len(pts) > 1:
        pts[-1] = pts[int(rng.integers(0, len(pts) - 1))]
    return pts


def build_gram_euler(params, points, policy: TruncationPolicy = DEFAULT_POLICY) -> HermitianMatrix:
    return build_gram(GramSpec(Theorem.EULER, params, points), policy)


def build_gram_phi11(params, points, variant: Variant = Variant.DERIVED,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> HermitianMatrix:
    return build_gram(GramSpec(Theorem.PHI11, params, points, variant), policy)


def build_gram_gauss(params, points, policy: TruncationPolicy = DEFAULT_POLICY) -> HermitianMatrix:
    return build_gram(GramSpec(Theorem.GAUSS, params, points), policy)
