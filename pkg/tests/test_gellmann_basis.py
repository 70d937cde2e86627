import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from utils.errors import DimensionError
from utils.gellmann_basis import (
    BasisIndex,
    basis_element,
    basis_labels,
    basis_list,
    basis_stack,
    expand_operator,
)
from utils.state_core import PAULIS


def test_qubit_basis_is_pauli_over_sqrt2():
    stack = basis_stack(2)
    assert_allclose(stack[0], np.eye(2) / np.sqrt(2))
    for k, sigma in enumerate(PAULIS, start=1):
        assert_allclose(stack[k], sigma / np.sqrt(2), atol=1e-15)


def test_qutrit_entries():
    z2 = basis_element(BasisIndex(3, 7))
    assert BasisIndex(3, 7).p == 2
    assert_allclose(z2, np.diag([1, -1, 0]) / np.sqrt(2), atol=1e-15)

    x12 = basis_element(BasisIndex(3, 1))
    expected = np.zeros((3, 3))
    expected[0, 1] = expected[1, 0] = 1 / np.sqrt(2)
    assert_allclose(x12, expected)


def test_qutrit_labels_follow_flat_order():
    assert basis_labels(3) == ["0", "x12", "x13", "x23", "y12", "y13", "y23", "z2", "z3"]


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_orthonormal_hermitian_traceless(dim):
    stack = basis_stack(dim)
    assert len(basis_list(dim)) == dim**2
    gram = np.einsum("iab,jab->ij", stack.conj(), stack)
    assert_allclose(gram, np.eye(dim**2), atol=1e-12)
    assert_allclose(stack, np.conj(np.swapaxes(stack, 1, 2)), atol=0)
    traces = np.einsum("kaa->k", stack)
    assert_allclose(traces[1:], 0, atol=1e-12)
    assert traces[0] == pytest.approx(np.sqrt(dim))


def test_basis_stack_is_cached_and_read_only():
    assert basis_stack(4) is basis_stack(4)
    with pytest.raises(ValueError):
        basis_stack(4)[0, 0, 0] = 0


@pytest.mark.parametrize("dim, flat", [(1, 0), (2, 4), (3, -1)])
def test_basis_index_out_of_range(dim, flat):
    with pytest.raises(DimensionError):
        BasisIndex(dim, flat)


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(min_value=2, max_value=5), seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_expansion_reconstructs_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = h + h.conj().T
    coeffs = expand_operator(h)
    assert_allclose(coeffs.imag, 0, atol=1e-12)
    rebuilt = np.einsum("k,kab->ab", coeffs, basis_stack(dim))
    assert_allclose(rebuilt, h, atol=1e-10)
