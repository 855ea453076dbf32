import cmath
import math

import mpmath
import numpy as np
import pytest

from qpositivity.errors import CutoffInsufficient, DomainViolation
from qpositivity.oracle import (
    QuadratureSpec,
    Scheme,
    auto_cutoff,
    euler_density,
    phi11_density,
    ramanujan_density,
    reconstruct_density,
    verify_euler_transform,
    verify_phi11_transform,
    verify_ramanujan_abs_square,
    verify_ramanujan_integral,
)

mpmath.mp.dps = 30


# --- analytic Gaussian cases ----------------------------------------------


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
def test_euler_gaussian_case(q):
    chk = verify_euler_transform(0, q, 0.0)
    assert chk.lhs == pytest.approx(1 / math.sqrt(-2 * math.log(q)), rel=1e-15)
    assert chk.rel_err < 1e-12


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
def test_phi11_gaussian_case(q):
    chk = verify_phi11_transform(0, 0, 0, q, 0.0)
    assert chk.lhs == pytest.approx(1 / math.sqrt(-math.log(q)), rel=1e-15)
    assert chk.rel_err < 1e-12


@pytest.mark.parametrize("m", [0.0, 0.7, -1.3 + 0.4j])
def test_ramanujan_gaussian_case(m):
    chk = verify_ramanujan_integral(0, 0.8, m)
    assert abs(chk.lhs - math.sqrt(math.pi) * cmath.exp(m * m)) <= 1e-15 * abs(chk.lhs)
    assert chk.rel_err < 1e-12


def test_gaussian_case_with_frequency():
    # z = 0 leaves exp(-x^2 / (4c)) / sqrt(2c), the Fourier transform of q^{alpha^2}
    chk = verify_euler_transform(0, 0.5, 2.0)
    assert chk.rel_err < 1e-12


# --- listed instances -----------------------------------------------------


@pytest.mark.parametrize("x", [0.0, math.pi])
def test_euler_instances(x):
    chk = verify_euler_transform(0.5, 0.5, x)
    assert chk.rel_err <= 1e-8 and chk.density_min >= 0
    core = np.linspace(-20, 20, 401)
    assert np.all(euler_density(0.5, 0.5, core).real > 0)
    ref = 1 / (mpmath.qp(0.5 * mpmath.expj(x), 0.5) * mpmath.sqrt(-2 * mpmath.log(0.5)))
    ref *= mpmath.exp(x * x / (4 * mpmath.log(0.5)))
    assert abs(chk.lhs - complex(ref)) <= 1e-14 * abs(chk.lhs)


@pytest.mark.parametrize("x", [0.0, 2.0])
def test_phi11_instances(x):
    chk = verify_phi11_transform(0.3, 0.4, 0.5, 0.6, x)
    assert chk.rel_err <= 1e-8 and chk.density_min >= 0
    core = np.linspace(-20, 20, 401)
    assert np.all(phi11_density(0.3, 0.4, 0.5, 0.6, core) > 0)


@pytest.mark.parametrize("m", [0.0, 0.5j])
def test_ramanujan_instances(m):
    chk = verify_ramanujan_integral(0.3, 0.8, m)
    assert chk.rel_err <= 1e-8 and chk.density_min > 0
    assert chk.cutoff <= 9


def test_ramanujan_parent_with_independent_b():
    chk = verify_ramanujan_integral(0.4 + 0.2j, 0.6, 0.3 - 0.2j, b=-0.5 + 0.1j)
    assert chk.rel_err <= 1e-8
    assert math.isnan(chk.density_min)


def test_abs_square_agrees_with_parent_specialization():
    c, k, m = 0.5 * cmath.exp(0.7j), 0.6, 0.4
    spec = verify_ramanujan_abs_square(c, k, m)
    # the parent with a = c q^{-1/2}, b = conj(a), m -> i m
    q = math.exp(-2 * k * k)
    parent = verify_ramanujan_integral(c / math.sqrt(q), k, 1j * m)
    assert spec.rel_err <= 1e-8 and parent.rel_err <= 1e-8
    assert abs(spec.lhs - parent.lhs) <= 1e-12 * abs(spec.lhs)


def test_abs_square_near_unit_modulus():
    chk = verify_ramanujan_abs_square(0.95 * cmath.exp(2.0j), 1.5, 1.0)
    assert chk.rel_err <= 1e-8 and chk.density_min > 0


def test_total_mass_is_kernel_at_zero():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a = rng.uniform(-0.9, 0.9)
        b, z = rng.uniform(0.05, 0.9, 2)
        q = rng.uniform(0.1, 0.6)
        chk = verify_phi11_transform(a, b, z, q, 0.0)
        f0 = mpmath.qp(a * z, q) / (mpmath.qp(b, q) * mpmath.qp(z, q) * mpmath.sqrt(-mpmath.log(q)))
        assert abs(chk.rhs - float(f0)) <= 1e-8 * float(f0)


# --- densities ------------------------------------------------------------


def test_euler_density_at_zero_is_aq():
    z, q = 0.5, 0.5
    ref = mpmath.nsum(lambda n: mpmath.power(q, n * n) * mpmath.power(-(-z), n) / mpmath.qp(q, q, n), [0, mpmath.inf])
    got = euler_density(z, q, [0.0])[0]
    assert got > 0
    assert got.real == pytest.approx(float(ref), rel=1e-14)


def test_euler_density_complex_argument_against_series():
    z, q = 0.4 * cmath.exp(1.1j), 0.6
    alphas = [-2.3, 0.0, 1.7]
    for al, got in zip(alphas, euler_density(z, q, alphas)):
        w = -mpmath.power(q, 2 * al) * z
        ref = mpmath.power(q, al * al) * mpmath.nsum(
            lambda n: mpmath.power(q, n * n) * mpmath.power(-w, n) / mpmath.qp(q, q, n), [0, mpmath.inf])
        assert abs(got - complex(ref)) <= 1e-13 * abs(complex(ref))


def test_phi11_density_against_mpmath():
    a, b, z, q = -0.4, 0.7, 0.8, 0.5
    for al in [-6.0, -1.5, 0.0, 2.5]:
        beta = mpmath.power(q, al + 0.5)
        ref = (mpmath.qp(-b * beta, q) * mpmath.power(q, al * al / 2)
               * mpmath.qhyper([a], [-b * beta], q, -z * beta))
        got = phi11_density(a, b, z, q, [al])[0]
        assert got == pytest.approx(float(ref), rel=1e-12)


def test_ramanujan_density_is_positive_real_for_conjugates():
    c = 0.7 * cmath.exp(0.3j)
    xs = np.linspace(-5, 5, 101)
    d = ramanujan_density(c, c.conjugate(), 0.9, xs)
    assert np.all(np.abs(d.imag) <= 1e-14 * np.abs(d.real))
    assert np.all(d.real > 0)


def test_reconstruct_density():
    al = np.linspace(-5, 5, 41)
    g = reconstruct_density("euler", {"z": 0.0, "q": 0.5}, al)
    assert np.allclose(g, 0.5 ** (al * al), rtol=1e-14, atol=0)
    d = reconstruct_density("phi11", {"a": 0.3, "b": 0.4, "z": 0.5, "q": 0.6}, al)
    assert np.all(d > 0)
    r = reconstruct_density("ramanujan", {"c": 0.3, "k": 0.8}, al)
    assert np.all(r > 0)
    with pytest.raises(DomainViolation):
        reconstruct_density("gauss", {}, al)


def test_density_decays_at_cutoff():
    z, q = 0.5, 0.5
    a = verify_euler_transform(z, q, 0.0).cutoff
    d0 = euler_density(z, q, [0.0])[0].real
    assert np.all(euler_density(z, q, [-a, a]).real < 1e-16 * d0)
    p = (0.3, 0.4, 0.5, 0.6)
    a = verify_phi11_transform(*p, 0.0).cutoff
    assert np.all(phi11_density(*p, [-a, a]) < 1e-16 * phi11_density(*p, [0.0])[0])


# --- quadrature controls --------------------------------------------------


def test_auto_cutoff_rule():
    assert auto_cutoff(0.5) == math.ceil(math.sqrt(math.log(1e20) / math.log(2))) + 2


def test_cutoff_insufficient_suggests_a_window():
    with pytest.raises(CutoffInsufficient) as err:
        verify_euler_transform(0.5, 0.5, 0.0, QuadratureSpec(cutoff=2.0))
    suggested = err.value.suggested_cutoff
    assert suggested > 2
    assert verify_euler_transform(0.5, 0.5, 0.0, QuadratureSpec(cutoff=suggested)).rel_err <= 1e-8


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(cutoff=-1)
    with pytest.raises(ValueError):
        QuadratureSpec(nodes=0)
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="simpson")


def test_trapezoid_scheme():
    chk = verify_phi11_transform(0.3, 0.4, 0.5, 0.6, 1.0, QuadratureSpec(scheme=Scheme.TRAPEZOID))
    assert chk.rel_err <= 1e-8


def test_doubling_nodes_reduces_error():
    errs = []
    for nodes in (20, 40, 80, 160):
        quad = QuadratureSpec(nodes=nodes, order=2)
        chk = verify_phi11_transform(0.3, 0.4, 0.5, 0.6, 1.0, quad)
        errs.append(abs(chk.lhs - chk.rhs))
    assert errs[0] > 1e-10
    for e0, e1 in zip(errs, errs[1:]):
        assert e1 <= e0 / 4 or e1 < 1e-10


def test_random_draws_hold():
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = rng.uniform(0.05, 0.95) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        q = rng.uniform(0.05, 0.7)
        chk = verify_euler_transform(z, q, rng.uniform(-math.pi, math.pi))
        assert chk.rel_err <= 1e-8


def test_contour_shift_matches_real_line():
    real = QuadratureSpec(contour_shift=False)
    a = verify_phi11_transform(-0.4, 0.6, 0.3, 0.5, 2.5)
    b = verify_phi11_transform(-0.4, 0.6, 0.3, 0.5, 2.5, real)
    assert a.rel_err <= 1e-12 and b.rel_err <= 1e-10
    assert a.density_min == b.density_min
    a = verify_euler_transform(0.4, 0.3, -1.5)
    b = verify_euler_transform(0.4, 0.3, -1.5, real)
    assert a.rel_err <= 1e-12 and b.rel_err <= 1e-10


def test_contour_shift_removes_gaussian_cancellation():
    # on the real line the result is exp(-x^2/(4c)) ~ 1e-10 of the density's mass
    z, q, x = 0.3, 0.9, 3.0
    real = verify_euler_transform(z, q, x, QuadratureSpec(contour_shift=False))
    shifted = verify_euler_transform(z, q, x)
    assert real.condition > 1e8 and real.rel_err > 1e-9
    assert shifted.condition < 1e3 and shifted.rel_err < 1e-13


def test_rotated_phi11_density_against_mpmath():
    a, b, z, q, ph = 0.3, 0.7, 0.8, 0.6, 2.2
    e = mpmath.expj(ph)
    for al in [-4.0, 0.0, 1.5]:
        beta = mpmath.power(q, al + 0.5)
        ref = (mpmath.qp(-b * e * beta, q) * mpmath.power(q, al * al / 2)
               * mpmath.qhyper([a], [-b * e * beta], q, -z * e * beta))
        got = phi11_density(a, b, z, q, [al], phase=ph)[0]
        assert abs(got - complex(ref)) <= 1e-12 * abs(complex(ref))
