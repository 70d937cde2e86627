import numpy as np
import pytest
from numpy.testing import assert_allclose

from generator.state_gallery import random_density, werner
from utils.errors import DensityValidationError, DimensionError
from utils.state_core import (
    SIGMA_Z,
    DensityMatrix,
    Tolerances,
    check_dims,
    kron,
    kron_all,
    partial_trace,
    purity,
    validate_density,
)


def test_kron_identity_and_diagonal():
    assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert_allclose(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))


def test_kron_all_is_associative(rng):
    a, b, c = (rng.standard_normal((2, 2)) for _ in range(3))
    assert_allclose(kron_all([a, b, c]), kron(a, kron(b, c)), atol=1e-12)


@pytest.mark.parametrize("dims", [[], [1], [2, 0]])
def test_check_dims_rejects_bad_dims(dims):
    with pytest.raises(DimensionError):
        check_dims(dims)


def test_partial_trace_bell_marginal(bell):
    for k in (0, 1):
        assert_allclose(partial_trace(bell, [k]).matrix, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_product_state():
    rho2 = random_density((3,), 3, 5).matrix
    rho = DensityMatrix((2, 3), kron(np.diag([1.0, 0.0]), rho2))
    assert_allclose(partial_trace(rho, [0]).matrix, np.diag([1.0, 0.0]), atol=1e-15)
    assert_allclose(partial_trace(rho, [1]).matrix, rho2, atol=1e-15)


@pytest.mark.parametrize("phi", [-1.0, -0.5, 0.0, 0.3, 1.0])
def test_partial_trace_werner_marginal(phi):
    reduced = partial_trace(werner(phi), [1])
    assert reduced.dims == (2,)
    assert_allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_keeps_subsystem_order():
    rho = random_density((2, 3, 2), 4, 11)
    reduced = partial_trace(rho, [2, 0])
    assert reduced.dims == (2, 2)
    assert np.trace(reduced.matrix).real == pytest.approx(1.0, abs=1e-12)


def test_partial_trace_full_keep_is_identity():
    rho = random_density((2, 3), 2, 3)
    assert_allclose(partial_trace(rho, [0, 1]).matrix, rho.matrix, atol=1e-15)


@pytest.mark.parametrize("keep", [[], [2], [-1]])
def test_partial_trace_bad_keep(bell, keep):
    with pytest.raises(DimensionError):
        partial_trace(bell, keep)


def test_validate_density_accepts_completely_mixed():
    rho = validate_density(np.eye(4) / 4, [2, 2])
    assert rho.dims == (2, 2)
    assert not rho.matrix.flags.writeable


@pytest.mark.parametrize(
    "matrix, kind",
    [
        (np.diag([0.9, 0, 0, 0]), "trace"),
        (np.diag([1.1, -0.1, 0, 0]), "positivity"),
        (np.array([[0.5, 0.1, 0, 0], [0, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), "hermitian"),
        (np.eye(3) / 3, "dimension"),
    ],
)
def test_validate_density_reports_each_defect(matrix, kind):
    with pytest.raises(DensityValidationError) as info:
        validate_density(matrix, [2, 2])
    assert info.value.kind == kind


def test_validate_density_bad_dims_is_dimension_error():
    with pytest.raises(DensityValidationError) as info:
        validate_density(np.eye(2) / 2, [1, 2])
    assert info.value.kind == "dimension"


def test_validate_density_respects_tolerances():
    m = np.diag([0.5 + 1e-7, 0.5])
    with pytest.raises(DensityValidationError):
        validate_density(m, [2])
    assert validate_density(m, [2], Tolerances(trace=1e-6)).dims == (2,)


def test_tolerances_reject_negative():
    with pytest.raises(ValueError):
        Tolerances(psd=-1.0)


def test_purity_examples():
    psi = np.array([1, 1j, 0]) / np.sqrt(2)
    assert purity(DensityMatrix((3,), np.outer(psi, psi.conj()))) == pytest.approx(1.0)
    for n in (2, 3, 5):
        assert purity(DensityMatrix((n,), np.eye(n) / n)) == pytest.approx(1 / n)
    assert purity(werner(1.0)) == pytest.approx(1.0)


def test_density_matrix_is_read_only():
    source = np.eye(2) / 2
    rho = DensityMatrix((2,), source)
    assert source.flags.writeable
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0
