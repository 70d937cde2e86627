"""密度矩阵与扩展相干矢量之间的双向映射

m_{i1...in} = tr[rho Omega_{i1} (x) ... (x) Omega_{in}]
rho = sum m_{i1...in} Omega_{i1} (x) ... (x) Omega_{in}

多重下标 (i1, ..., in), i_k in [0, N_k^2 - 1], 行优先平铺, 子系统 1 为最高位,
与 state_core 的 Kronecker 顺序一致, 因此 S (x) ... (x) S 与分量天然对齐。
"""

import os
import sys
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import TOL_IMAG
from utils.errors import DensityValidationError, DimensionError, ImaginaryResidueError
from utils.gellmann_basis import basis_stack
from utils.state_core import (
    DensityMatrix,
    Tolerances,
    check_dims,
    kron_all,
    validate_density,
)


@dataclass(frozen=True)
class ExpandedCoherenceVector:
    dims: Tuple[int, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        data = np.array(self.data, dtype=np.float64).reshape(-1)
        expected = int(np.prod([d * d for d in dims]))
        if data.size != expected:
            raise DimensionError(
                f"相干矢量长度 {data.size} 与维数 {list(dims)} 不符, 应为 {expected}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @property
    def shape(self):
        """按子系统展开后的形状 (N_1^2, ..., N_n^2)"""
        return tuple(d * d for d in self.dims)

    def as_tensor(self) -> np.ndarray:
        return self.data.reshape(self.shape)

    def component(self, multi: Sequence[int]) -> float:
        return float(self.data[flatten_index(self.dims, multi)])

    def norm_sq(self) -> float:
        """|m|^2, 等于 tr rho^2"""
        return float(self.data @ self.data)


def _shape(dims):
    return tuple(d * d for d in check_dims(dims))


def flatten_index(dims: Sequence[int], multi: Sequence[int]) -> int:
    shape = _shape(dims)
    multi = tuple(int(i) for i in multi)
    if len(multi) != len(shape):
        raise DimensionError(f"多重下标 {multi} 的长度与子系统个数 {len(shape)} 不符")
    for i, size in zip(multi, shape):
        if not 0 <= i < size:
            raise DimensionError(f"多重下标 {multi} 超出范围 {shape}")
    return int(np.ravel_multi_index(multi, shape))


def unflatten_index(dims: Sequence[int], flat: int) -> Tuple[int, ...]:
    shape = _shape(dims)
    total = int(np.prod(shape))
    if not 0 <= int(flat) < total:
        raise DimensionError(f"平铺下标 {flat} 超出范围 [0, {total - 1}]")
    return tuple(int(i) for i in np.unravel_index(int(flat), shape))


def encode_operator(h: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """任意算符在乘积基下的 (复) 展开系数, 不做任何物理性检查"""
    dims = check_dims(dims)
    n = len(dims)
    tensor = np.asarray(h, dtype=np.complex128).reshape(dims + dims)

    # tr(rho A) = sum_ab rho_ab A_ba; 行指标 k, 列指标 n+k, 基下标 2n+k
    operands = [tensor, list(range(2 * n))]
    for k, d in enumerate(dims):
        operands += [basis_stack(d), [2 * n + k, n + k, k]]
    coeffs = np.einsum(*operands, list(range(2 * n, 3 * n)), optimize=True)
    return coeffs.reshape(-1)


def encode(rho: DensityMatrix, imag_tol: float = TOL_IMAG) -> ExpandedCoherenceVector:
    """密度矩阵 -> 扩展相干矢量

    展开系数理论上为实数, 虚部残差超过 imag_tol 时说明 rho 不是合法的厄米矩阵。
    """
    coeffs = encode_operator(rho.matrix, rho.dims)
    residue = float(np.max(np.abs(coeffs.imag)))
    if residue > imag_tol:
        raise ImaginaryResidueError(f"相干矢量虚部残差 {residue:.3e} > {imag_tol:.1e}")
    return ExpandedCoherenceVector(rho.dims, coeffs.real)


def decode_operator(coeffs: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """展开系数 -> 算符, encode_operator 的逆"""
    dims = check_dims(dims)
    n = len(dims)
    tensor = np.asarray(coeffs, dtype=np.complex128).reshape(_shape(dims))

    operands = [tensor, list(range(2 * n, 3 * n))]
    for k, d in enumerate(dims):
        operands += [basis_stack(d), [2 * n + k, k, n + k]]
    out = np.einsum(*operands, list(range(2 * n)), optimize=True)
    size = int(np.prod(dims))
    return out.reshape(size, size)


def decode(
    v: ExpandedCoherenceVector, tol: Tolerances = None, strict: bool = False
) -> DensityMatrix:
    """扩展相干矢量 -> 密度矩阵

    结果一定厄米且迹为 1; 对任意矢量不保证半正定, strict=True 时做完整校验。
    """
    tol = tol or Tolerances.default()
    expected = 1 / np.sqrt(np.prod(v.dims))
    defect = abs(v.data[0] - expected)
    if defect > tol.eq:
        raise DensityValidationError(
            "trace",
            f"归一化分量 m_0 = {v.data[0]:.12g}, 应为 1/sqrt(prod N_k) = {expected:.12g}",
            defect,
        )

    matrix = decode_operator(v.data, v.dims)
    if strict:
        return validate_density(matrix, v.dims, tol)
    return DensityMatrix(v.dims, matrix)


def product_vector(vectors: Sequence[ExpandedCoherenceVector]) -> ExpandedCoherenceVector:
    """各子系统相干矢量的张量积, 对应 rho_1 (x) ... (x) rho_n"""
    dims = tuple(d for v in vectors for d in v.dims)
    return ExpandedCoherenceVector(dims, kron_all([v.data for v in vectors]))
