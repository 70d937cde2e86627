import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from generator.state_gallery import completely_mixed, random_density
from service.entanglement_measure import eq_measure
from service.local_channels import (
    LocalKrausChannel,
    LocalUnitary,
    apply_local_kraus,
    apply_local_unitary,
    channel_from_dict,
    coherence_superoperator,
    local_superoperators,
    random_local_unitary,
    random_povm,
    random_unitary,
    unitarity_defect,
    validate_povm,
)
from utils.coherence_map import encode
from utils.errors import ChannelError, DimensionError, StateFormatError
from utils.state_core import SIGMA_X, DensityMatrix

P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])
HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_local_unitary_examples():
    ground = DensityMatrix((2, 2), np.diag([1.0, 0, 0, 0]))
    out = apply_local_unitary(ground, LocalUnitary((2, 2), [SIGMA_X, np.eye(2)]))
    assert_allclose(out.matrix, np.diag([0, 0, 1.0, 0]), atol=1e-15)

    mixed = completely_mixed((2, 2))
    out = apply_local_unitary(mixed, LocalUnitary((2, 2), [HADAMARD, HADAMARD]))
    assert_allclose(out.matrix, mixed.matrix, atol=1e-15)


def test_local_unitary_rejects_non_unitary():
    with pytest.raises(ChannelError):
        LocalUnitary((2,), [np.diag([1.0, 0.5])])
    with pytest.raises(DimensionError):
        LocalUnitary((2, 2), [np.eye(2)])
    with pytest.raises(DimensionError):
        LocalUnitary((2,), [np.eye(3)])


def test_dephasing_bell(bell):
    ch = LocalKrausChannel.from_local((2, 2), {0: [P0, P1]})
    out = apply_local_kraus(bell, ch)
    assert_allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    assert eq_measure(out).eq == pytest.approx(0.0, abs=1e-12)


def test_identity_channel(bell):
    ch = LocalKrausChannel((2, 2), [[np.eye(2)], [np.eye(2)]])
    assert_allclose(apply_local_kraus(bell, ch).matrix, bell.matrix)


def test_incomplete_kraus_set_is_rejected(bell):
    ch = LocalKrausChannel.from_local((2, 2), {0: [P0]})
    with pytest.raises(ChannelError):
        apply_local_kraus(bell, ch)


def test_channel_dims_must_match(bell):
    with pytest.raises(DimensionError):
        apply_local_kraus(bell, LocalKrausChannel((2,), [[np.eye(2)]]))


def test_povm_diagnosis():
    assert validate_povm([P0, P1]).is_povm
    assert validate_povm([np.eye(2)]).is_povm

    gamma = 0.3
    damping = [np.diag([1, np.sqrt(1 - gamma)]), np.sqrt(gamma) * np.array([[0, 1], [0, 0]])]
    diagnosis = validate_povm(damping)
    assert diagnosis.is_complete
    assert not diagnosis.is_povm
    assert diagnosis.normality_defects[0][1] > 0.1

    assert not validate_povm([P0]).is_complete


def test_povm_diagnosis_rejects_empty_list():
    with pytest.raises(ChannelError):
        validate_povm([])


def test_z_measurement_superoperator():
    superop = coherence_superoperator(LocalKrausChannel((2,), [[P0, P1]]))
    assert_allclose(superop.matrix, np.diag([1, 0, 0, 1]), atol=1e-15)
    assert superop.block_defect() == pytest.approx(0.0, abs=1e-15)
    assert superop.max_singular_value() == pytest.approx(1.0)


def test_z_rotation_superoperator():
    theta = 0.7
    u = np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])
    superop = coherence_superoperator(LocalUnitary((2,), [u]))
    block = superop.coherence_block()
    rotation = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    assert_allclose(block[:2, :2], rotation, atol=1e-12)
    assert block[2, 2] == pytest.approx(1.0)
    assert superop.block_defect() == pytest.approx(0.0, abs=1e-15)
    assert superop.orthogonality_defect() == pytest.approx(0.0, abs=1e-12)


def test_non_povm_channel_breaks_block_form():
    lower = np.array([[0, 1], [0, 0]])
    superop = coherence_superoperator(LocalKrausChannel((2,), [[lower, P0]]))
    assert superop.block_defect() > 0.1
    with pytest.raises(DimensionError):
        coherence_superoperator(LocalKrausChannel((2, 2), [[np.eye(2)], [np.eye(2)]])).block_defect()


def test_random_povm_fixed_parameters():
    ch = random_povm(2, 0, lam=1.0, v=np.eye(2))
    assert_allclose(coherence_superoperator(ch).matrix, np.diag([1, 0, 0, 1]), atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(dim=st.sampled_from([2, 3]), seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_random_povm_is_contractive(dim, seed):
    ch = random_povm(dim, seed)
    assert validate_povm(ch).is_povm
    superop = coherence_superoperator(ch)
    assert superop.block_defect() <= 1e-9
    assert superop.max_singular_value() <= 1 + 1e-9

    rho = random_density((dim,), dim, seed)
    assert_allclose(superop.apply(encode(rho).data), encode(apply_local_kraus(rho, ch)).data, atol=1e-9)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3)])
def test_superoperator_factorizes(dims):
    rng = np.random.default_rng(5)
    ch = LocalKrausChannel(dims, [random_povm(d, rng).kraus[0] for d in dims])
    locals_ = local_superoperators(ch)
    assert_allclose(coherence_superoperator(ch).matrix, np.kron(locals_[0].matrix, locals_[1].matrix), atol=1e-10)


def test_local_unitary_preserves_measure():
    rho = random_density((2, 3), 3, 21)
    u = random_local_unitary((2, 3), 22)
    before, after = eq_measure(rho).f, eq_measure(apply_local_unitary(rho, u)).f
    assert after == pytest.approx(before, abs=1e-9)


def test_random_unitary_is_unitary_and_centered():
    rng = np.random.default_rng(0)
    draws = np.array([random_unitary(2, rng) for _ in range(10000)])
    assert max(unitarity_defect(u) for u in draws[:100]) <= 1e-12
    assert np.max(np.abs(draws.mean(axis=0))) <= 0.05


def test_channel_dict_roundtrip():
    ch = LocalKrausChannel.from_local((2, 3), {0: [P0, P1]})
    again = channel_from_dict(ch.to_dict())
    assert again.dims == (2, 3)
    assert_allclose(again.kraus[0][1], P1)
    assert len(again.kraus[1]) == 1


@pytest.mark.parametrize("payload", [[], {"dims": [2]}, {"dims": [2], "factors": [{"ops": []}]}])
def test_channel_from_dict_rejects_malformed(payload):
    with pytest.raises(StateFormatError):
        channel_from_dict(payload)


def test_input_arrays_stay_writeable():
    p0 = P0.copy()
    LocalKrausChannel((2,), [[p0, P1]])
    p0[0, 0] = 1.0
    assert p0.flags.writeable
