import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpositivity.errors import DimMismatch, DomainViolation, NumericalFailure
from qpositivity.gram import (
    GramSpec,
    HermitianMatrix,
    Theorem,
    Variant,
    build_gram,
    det_hermitian,
    jacobi_eigvalsh,
    kernel_value_euler,
    kernel_value_gauss,
    kernel_value_phi11,
    points_with_repeats,
    psd_check,
    random_gram_spec,
    schur_product,
    spec_factors,
)


def poch(a, q, n=400):
    out = 1.0 + 0j
    for k in range(n):
        out *= 1 - a * q**k
    return out


def random_hermitian(rng, m):
    a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return HermitianMatrix.from_upper(a + a.conj().T)


# --- kernels --------------------------------------------------------------


def test_euler_kernel_at_zero():
    params = [(0.5, 0.5), (0.2, 0.8)]
    expect = 1 / (poch(0.5, 0.5) * poch(0.2, 0.8))
    got = kernel_value_euler(params, 0.0)
    assert got.imag == 0 and got.real > 1
    assert abs(got - expect) < 1e-13 * abs(expect)


def test_euler_kernel_single_factor_at_pi():
    y, q, x = 0.5, 0.5, math.pi
    expect = math.exp(x * x / (4 * math.log(q))) / poch(y * cmath.exp(1j * x), q)
    assert abs(kernel_value_euler([(y, q)], x) - expect) < 1e-14 * abs(expect)


@given(st.floats(-10, 10))
def test_euler_kernel_hermitian_symmetry(x):
    params = [(0.3, 0.6), (0.7, 0.2)]
    assert abs(kernel_value_euler(params, -x) - kernel_value_euler(params, x).conjugate()) < 1e-14


def test_phi11_kernel_at_zero_and_a_zero():
    a, b, z, q = 0.3, 0.4, 0.5, 0.6
    f0 = kernel_value_phi11([(a, b, z, q)], 0.0)
    assert abs(f0 - poch(a * z, q) / (poch(b, q) * poch(z, q))) < 1e-13 * abs(f0)
    printed = kernel_value_phi11([(a, b, z, q)], 0.0, Variant.AS_PRINTED)
    assert abs(printed - poch(a * z, q) / (poch(b, q) * poch(-z, q))) < 1e-13 * abs(printed)
    # a = 0 leaves no numerator factor
    g = kernel_value_phi11([(0.0, b, z, q)], 0.7)
    e = cmath.exp(0.7j)
    assert abs(g - math.exp(0.49 / (2 * math.log(q))) / (poch(b * e, q) * poch(z * e, q))) < 1e-13 * abs(g)


def test_phi11_kernel_single_factor_at_one():
    a, b, z, q, x = 0.3, 0.4, 0.5, 0.6, 1.0
    e = cmath.exp(1j * x)
    expect = poch(a * z * e, q) * math.exp(x * x / (2 * math.log(q))) / (poch(b * e, q) * poch(z * e, q))
    assert abs(kernel_value_phi11([(a, b, z, q)], x) - expect) < 1e-13 * abs(expect)


def test_gauss_kernel_values():
    c, k = 0.3, 0.8
    q = math.exp(-2 * k * k)
    f0 = kernel_value_gauss([(c, k)], 0.0)
    assert abs(f0 - poch(-c * math.exp(-k * k), q) ** 2) < 1e-13 * abs(f0)
    x = 0.5
    expect = math.exp(-x * x) * poch(-c * math.exp(-k * k - 2 * x * k), q) * poch(-c * math.exp(-k * k + 2 * x * k), q)
    got = kernel_value_gauss([(c, k)], x)
    assert got.imag == 0 and abs(got - expect) < 1e-13 * abs(expect)
    assert kernel_value_gauss([(c, k)], -x) == pytest.approx(got, rel=1e-15)


def test_spec_validation():
    with pytest.raises(DomainViolation):
        GramSpec(Theorem.EULER, [(1.2, 0.5)], [0.0])
    with pytest.raises(DomainViolation):
        GramSpec(Theorem.PHI11, [(0.3, 0.4, 0.5)], [0.0])
    with pytest.raises(DomainViolation):
        GramSpec(Theorem.GAUSS, [(0.3, -1.0)], [0.0])
    with pytest.raises(DomainViolation):
        GramSpec(Theorem.EULER, [(0.3, 0.5)], [])
    with pytest.raises(DomainViolation):
        GramSpec(Theorem.EULER, [], [0.0])


def test_spec_round_trip():
    s = GramSpec("phi11", [(0.1, 0.2, 0.3, 0.4)], [0, 1.5], "as_printed")
    assert GramSpec.from_dict(s.to_dict()) == s


# --- matrices -------------------------------------------------------------


def test_build_gram_one_point():
    m = build_gram(GramSpec(Theorem.EULER, [(0.5, 0.5)], [2.0]))
    assert m.dim == 1
    assert m.entries[0, 0] == kernel_value_euler([(0.5, 0.5)], 0.0).real


def test_build_gram_is_exactly_hermitian_with_real_diagonal():
    rng = np.random.default_rng(0)
    for th in Theorem:
        m = build_gram(random_gram_spec(th, rng, m=7, n=2))
        assert np.array_equal(m.entries, m.entries.conj().T)
        assert np.all(np.diag(m.entries).imag == 0)


def test_two_point_determinant_is_the_modulus_inequality():
    y, q, t = 0.5, 0.5, 1.3
    m = build_gram(GramSpec(Theorem.EULER, [(y, q)], [0.0, t]))
    f0 = m.entries[0, 0].real
    ft = kernel_value_euler([(y, q)], -t)
    assert det_hermitian(m) == pytest.approx(f0 * f0 - abs(ft) ** 2, rel=1e-12)
    assert det_hermitian(m) >= 0


def test_hermitian_matrix_rejects_bad_input():
    with pytest.raises(DomainViolation):
        HermitianMatrix(np.array([[1, 2 + 1j], [2 + 1j, 1]]))
    with pytest.raises(DimMismatch):
        HermitianMatrix(np.ones((2, 3)))
    with pytest.raises(DomainViolation):
        HermitianMatrix.from_json([[[1, 0], [2]], [[2, 0], [1, 0]]])


def test_json_round_trip():
    rng = np.random.default_rng(1)
    m = random_hermitian(rng, 4)
    assert np.array_equal(HermitianMatrix.from_json(m.to_json()).entries, m.entries)


# --- spectra --------------------------------------------------------------


def test_psd_check_identity_and_indefinite():
    v = psd_check(HermitianMatrix(np.eye(3)))
    assert v.is_psd and v.min_eigenvalue == pytest.approx(1.0)
    v = psd_check(HermitianMatrix(np.array([[1.0, 2.0], [2.0, 1.0]])))
    assert not v.is_psd
    assert v.min_eigenvalue == pytest.approx(-1.0, abs=1e-14)
    assert v.tolerance_used == pytest.approx(1e-10 * 2 * 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(m, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, m).entries
    ours = jacobi_eigvalsh(a)
    ref = np.linalg.eigvalsh(a)
    assert np.max(np.abs(ours - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_jacobi_rank_deficient_and_zero():
    v = np.array([1.0, 2j, -1.0])
    a = np.outer(v, v.conj())
    eig = jacobi_eigvalsh(a)
    assert eig[-1] == pytest.approx(6.0)
    assert np.all(np.abs(eig[:2]) < 1e-14)
    assert np.all(jacobi_eigvalsh(np.zeros((3, 3))) == 0)


def test_jacobi_rotation_cap():
    rng = np.random.default_rng(3)
    with pytest.raises(NumericalFailure):
        jacobi_eigvalsh(random_hermitian(rng, 6).entries, max_rotations=3)


def test_det_examples():
    assert det_hermitian(HermitianMatrix(np.eye(4))) == pytest.approx(1.0)
    a, b = 3.0, 1 + 2j
    m = HermitianMatrix(np.array([[a, b], [b.conjugate(), a]]))
    assert det_hermitian(m) == pytest.approx(a * a - abs(b) ** 2)


def test_schur_product_examples():
    rng = np.random.default_rng(4)
    a, b = random_hermitian(rng, 5), random_hermitian(rng, 5)
    ident = HermitianMatrix(np.eye(5))
    assert np.array_equal(schur_product(a, ident).entries, np.diag(np.diag(a.entries)))
    ab, ba = schur_product(a, b).entries, schur_product(b, a).entries
    assert np.max(np.abs(ab - ba)) <= 1e-15 * np.max(np.abs(ab))
    with pytest.raises(DimMismatch):
        schur_product(a, HermitianMatrix(np.eye(3)))


def test_schur_composition_euler_two_factors():
    pts = [0.0, 0.4, -1.1, 2.5]
    p1, p2 = (0.3, 0.6), (0.8, 0.25)
    two = build_gram(GramSpec(Theorem.EULER, [p1, p2], pts)).entries
    prod = schur_product(build_gram(GramSpec(Theorem.EULER, [p1], pts)),
                         build_gram(GramSpec(Theorem.EULER, [p2], pts))).entries
    assert np.max(np.abs(two - prod) / np.abs(two)) < 1e-12


# --- positivity -----------------------------------------------------------


@pytest.mark.parametrize("theorem", list(Theorem))
def test_random_grams_are_psd(theorem):
    rng = np.random.default_rng(10)
    for _ in range(40):
        spec = random_gram_spec(theorem, rng)
        assert psd_check(build_gram(spec), 1e-10).is_psd


@pytest.mark.parametrize("theorem", list(Theorem))
def test_repeated_points_stay_psd(theorem):
    rng = np.random.default_rng(11)
    for _ in range(10):
        spec = random_gram_spec(theorem, rng, m=6)
        spec = GramSpec(spec.theorem, spec.params, points_with_repeats(spec.points, rng))
        v = psd_check(build_gram(spec), 1e-10)
        assert v.is_psd
        # two equal rows make the matrix singular
        assert v.min_eigenvalue <= 1e-9 * v.scale


def test_entry_bounded_by_diagonal():
    rng = np.random.default_rng(12)
    for th in Theorem:
        m = build_gram(random_gram_spec(th, rng, m=8)).entries
        d = np.sqrt(np.diag(m).real)
        assert np.all(np.abs(m) <= np.outer(d, d) + 1e-10 * np.max(np.abs(m)))


def test_printed_phi11_kernel_is_not_psd_somewhere():
    # the literal sign in front of z breaks positivity; this instance is a witness
    rng = np.random.default_rng(1)
    witnessed = False
    for _ in range(200):
        s = random_gram_spec(Theorem.PHI11, rng)
        s = GramSpec(s.theorem, s.params, s.points, Variant.AS_PRINTED)
        if not psd_check(build_gram(s)).is_psd:
            witnessed = True
            break
    assert witnessed


def test_spec_factors_cover_all_params():
    s = GramSpec(Theorem.GAUSS, [(0.2, 0.5), (0.4, 1.0)], [0, 1])
    assert [f.params[0] for f in spec_factors(s)] == list(s.params)
