"""复矩阵基础运算与多体密度矩阵类型

约定:
    - 复矩阵直接使用 numpy complex128 数组, 行优先
    - 计算基中子系统 1 (下标 0) 为最高位, 与 np.kron 的顺序一致
    - 子系统下标从 0 开始
"""

import os
import sys
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence, Tuple

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import TOL_EQ, TOL_HERM, TOL_PSD, TOL_TRACE
from utils.errors import DensityValidationError, DimensionError


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class Tolerances:
    """校验容差"""

    herm: float = TOL_HERM
    trace: float = TOL_TRACE
    psd: float = TOL_PSD
    eq: float = TOL_EQ

    def __post_init__(self):
        for name in ("herm", "trace", "psd", "eq"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"容差 {name} 必须为有限非负实数, 得到 {value}")

    @classmethod
    def default(cls):
        return cls()


@dataclass(frozen=True)
class DensityMatrix:
    """带子系统维数签名的密度矩阵

    直接构造不做校验, 外部输入请走 validate_density。
    """

    dims: Tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        matrix = np.array(self.matrix, dtype=np.complex128)
        matrix.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n(self):
        """子系统个数"""
        return len(self.dims)

    @property
    def size(self):
        return int(np.prod(self.dims))

    def is_all_qubits(self):
        return all(d == 2 for d in self.dims)


def check_dims(dims: Sequence[int]) -> Tuple[int, ...]:
    """检查子系统维数列表: 非空且每个维数 >= 2"""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("子系统维数列表不能为空")
    bad = [d for d in dims if d < 2]
    if bad:
        raise DimensionError(f"子系统维数必须 >= 2, 得到 {list(dims)}")
    return dims


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker 积, 维数相乘"""
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """按顺序对一组矩阵 (或向量) 做 Kronecker 积"""
    return reduce(np.kron, factors)


def projector(psi: np.ndarray) -> np.ndarray:
    """态矢 psi 对应的投影 |psi><psi|"""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return np.outer(psi, psi.conj())


def hermitian_defect(a: np.ndarray) -> float:
    """max |A_rs - conj(A_sr)|"""
    return float(np.max(np.abs(a - dagger(a))))


def validate_density(m, dims: Sequence[int], tol: Tolerances = None) -> DensityMatrix:
    """校验并返回 DensityMatrix

    每类问题单独报告: 维数不符 / 非厄米 / 迹不为 1 / 存在低于 -tol.psd 的本征值。
    正定性通过完整的厄米本征分解判断。
    """
    tol = tol or Tolerances.default()
    try:
        dims = check_dims(dims)
    except DimensionError as e:
        raise DensityValidationError("dimension", str(e))

    m = np.asarray(m, dtype=np.complex128)
    size = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (size, size):
        raise DensityValidationError(
            "dimension",
            f"矩阵形状 {m.shape} 与子系统维数 {list(dims)} 不符, 应为 ({size}, {size})",
        )

    herm = hermitian_defect(m)
    if herm > tol.herm:
        raise DensityValidationError(
            "hermitian", f"矩阵非厄米, 最大偏差 {herm:.3e} > {tol.herm:.1e}", herm
        )

    tr = np.trace(m)
    trace_defect = abs(tr - 1.0)
    if trace_defect > tol.trace:
        raise DensityValidationError(
            "trace", f"迹为 {tr.real:.12g}, 偏离 1 的量 {trace_defect:.3e}", trace_defect
        )

    lowest = float(np.linalg.eigvalsh((m + dagger(m)) / 2)[0])
    if lowest < -tol.psd:
        raise DensityValidationError(
            "positivity", f"存在负本征值 {lowest:.6e} < -{tol.psd:.1e}", -lowest
        )

    return DensityMatrix(dims, m)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """对 keep 以外的子系统求偏迹

    Args:
        rho: 多体密度矩阵
        keep: 保留的子系统下标 (从 0 开始), 非空

    Returns:
        DensityMatrix: 保留子系统上的约化密度矩阵, 子系统顺序与原顺序一致
    """
    n = rho.n
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("保留的子系统集合不能为空")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"子系统下标 {keep} 超出范围 [0, {n - 1}]")

    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    # 被求迹的子系统行列共用同一个指标
    col_labels = [n + k if k in keep else k for k in range(n)]
    out_labels = keep + [n + k for k in keep]
    reduced = np.einsum(tensor, list(range(n)) + col_labels, out_labels)

    kept_dims = tuple(rho.dims[k] for k in keep)
    size = int(np.prod(kept_dims))
    return DensityMatrix(kept_dims, reduced.reshape(size, size))


def purity(rho: DensityMatrix) -> float:
    """tr rho^2"""
    return float(np.linalg.norm(rho.matrix, "fro") ** 2)
