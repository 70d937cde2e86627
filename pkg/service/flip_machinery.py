"""flip / unflip 超算符

密度矩阵图景:
    F(rho)  = sum over pair tuples (x)sigma rho^* (x)sigma
    Fb(rho) = (x)_k Fb_k (rho), Fb_k(X) = (X + (N_k - 2)/N_k tr(X) I) / (N_k - 1)

相干矢量图景中两者都是对角的:
    S^(k)  = diag(1, -I/(N_k - 1)),  Sb^(k) = diag(1, I/(N_k - 1))
    G = S + Sb, 对角元由 g_weight 直接给出, 计算 f 时不需要构造 G。

印刷形式的 unflip 生成元 sigma_bar_ij = (E_ii + E_jj)/sqrt(N-1) 只在 N = 2 时
给出 Sb; N >= 3 时对角无迹元素的权重为 1 而不是 1/(N-1)。unflip_printed 按
印刷形式逐项求和, 仅用于对照。
"""

import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils.coherence_map import flatten_index
from utils.errors import DimensionError
from utils.gellmann_basis import level_pairs
from utils.state_core import DensityMatrix, check_dims, kron_all, partial_trace


@dataclass(frozen=True)
class FlipGeneratorIndex:
    dim: int
    i: int
    j: int
    kind: str = "flip"

    def __post_init__(self):
        if self.kind not in ("flip", "unflip"):
            raise ValueError(f"kind 必须为 flip 或 unflip, 得到 {self.kind!r}")
        if self.dim < 2 or not 1 <= self.i < self.j <= self.dim:
            raise DimensionError(
                f"生成元下标须满足 1 <= i < j <= N, 得到 i={self.i}, j={self.j}, N={self.dim}"
            )


def flip_generator(g: FlipGeneratorIndex) -> np.ndarray:
    """sigma_ij (flip) 或 sigma_bar_ij (unflip), 能级下标从 1 开始"""
    n = g.dim
    out = np.zeros((n, n), dtype=np.complex128)
    scale = 1 / np.sqrt(n - 1)
    i, j = g.i - 1, g.j - 1
    if g.kind == "flip":
        out[i, j] = -1j * scale
        out[j, i] = 1j * scale
    else:
        out[i, i] = scale
        out[j, j] = scale
    return out


@lru_cache(maxsize=None)
def _generators(dim, kind):
    gens = tuple(flip_generator(FlipGeneratorIndex(dim, i, j, kind)) for i, j in level_pairs(dim))
    for g in gens:
        g.setflags(write=False)
    return gens


def _pair_tuple_sum(matrix, dims, kind):
    """sum over pair tuples (x)s matrix (x)s, 按固定顺序逐项累加"""
    out = np.zeros_like(matrix)
    for tup in product(*[_generators(d, kind) for d in dims]):
        s = kron_all(tup)
        out += s @ matrix @ s
    return out


def flip(rho: DensityMatrix) -> np.ndarray:
    """F(rho), 逐对求和 (慢速可信实现)"""
    return _pair_tuple_sum(rho.matrix.conj(), rho.dims, "flip")


def unflip_printed(rho: DensityMatrix) -> np.ndarray:
    """按印刷的 sigma_bar 生成元逐对求和; 全部子系统为比特时与 unflip 相同"""
    return _pair_tuple_sum(rho.matrix, rho.dims, "unflip")


def _apply_local(matrix, dims, local_maps):
    """在每个子系统上依次作用单体线性映射 X -> local_maps[k](X)"""
    n = len(dims)
    tensor = matrix.reshape(dims + dims)
    for k, (d, fn) in enumerate(zip(dims, local_maps)):
        # 把第 k 个子系统的行列指标移到最后两维
        moved = np.moveaxis(tensor, (k, n + k), (-2, -1))
        moved = fn(moved, d)
        tensor = np.moveaxis(moved, (-2, -1), (k, n + k))
    size = int(np.prod(dims))
    return tensor.reshape(size, size)


def _local_unflip(block, d):
    tr = np.trace(block, axis1=-2, axis2=-1)[..., None, None]
    return (block + (d - 2) / d * tr * np.eye(d)) / (d - 1)


def _local_flip(block, d):
    # 作用于已取共轭的 rho^*: Y -> (tr(Y) I - Y^T) / (N - 1)
    tr = np.trace(block, axis1=-2, axis2=-1)[..., None, None]
    return (tr * np.eye(d) - np.swapaxes(block, -1, -2)) / (d - 1)


def unflip(rho: DensityMatrix) -> np.ndarray:
    """Fb(rho), 各子系统作用局域 unflip"""
    return _apply_local(rho.matrix, rho.dims, [_local_unflip] * rho.n)


def flip_local_closed_form(rho: DensityMatrix) -> np.ndarray:
    """F(rho) 的局域闭式, 与 flip 的逐对求和互为对照"""
    return _apply_local(rho.matrix.conj(), rho.dims, [_local_flip] * rho.n)


def g_weight(dims: Sequence[int], multi: Sequence[int]) -> float:
    """G = S + Sb 在乘积基下的对角元

    非零子系统下标个数为奇数时为 0; 为偶数时为 2 prod_{i_k != 0} 1/(N_k - 1)。
    """
    flatten_index(dims, multi)
    nonzero = [d for d, i in zip(dims, multi) if i != 0]
    if len(nonzero) % 2:
        return 0.0
    return 2.0 / float(np.prod([d - 1 for d in nonzero]))


def _local_diagonal(d, sign):
    diag = np.full(d * d, sign / (d - 1))
    diag[0] = 1.0
    return diag


def s_weights(dims: Sequence[int]) -> np.ndarray:
    """S = (x) S^(k) 的对角元"""
    return kron_all([_local_diagonal(d, -1.0) for d in check_dims(dims)])


def s_bar_weights(dims: Sequence[int]) -> np.ndarray:
    """Sb = (x) Sb^(k) 的对角元"""
    return kron_all([_local_diagonal(d, 1.0) for d in check_dims(dims)])


def g_weights(dims: Sequence[int]) -> np.ndarray:
    """全部 g_weight 组成的向量, 按相干矢量的平铺顺序"""
    dims = check_dims(dims)
    shape = tuple(d * d for d in dims)
    nonzero_count = np.zeros(shape, dtype=np.int64)
    scale = np.ones(shape)
    for k, d in enumerate(dims):
        local_nonzero = np.ones(d * d, dtype=np.int64)
        local_nonzero[0] = 0
        local_scale = np.full(d * d, 1.0 / (d - 1))
        local_scale[0] = 1.0
        view = [1] * len(dims)
        view[k] = d * d
        nonzero_count = nonzero_count + local_nonzero.reshape(view)
        scale = scale * local_scale.reshape(view)
    weights = np.where(nonzero_count % 2 == 0, 2.0 * scale, 0.0)
    return weights.reshape(-1)


def assemble_s(dims: Sequence[int]) -> np.ndarray:
    """显式构造 S = S^(1) (x) ... (x) S^(n) (稠密, 仅用于对照)"""
    return kron_all([np.diag(_local_diagonal(d, -1.0)) for d in check_dims(dims)])


def assemble_s_bar(dims: Sequence[int]) -> np.ndarray:
    return kron_all([np.diag(_local_diagonal(d, 1.0)) for d in check_dims(dims)])


def universal_inverter(rho: DensityMatrix) -> np.ndarray:
    """两体 flip 的闭式: (tr(rho) I (x) I - rho_1 (x) I - I (x) rho_2 + rho) / ((N1-1)(N2-1))"""
    if rho.n != 2:
        raise DimensionError(f"universal state inverter 只适用于两体系统, 得到 {rho.n} 体")
    n1, n2 = rho.dims
    rho1 = partial_trace(rho, [0]).matrix
    rho2 = partial_trace(rho, [1]).matrix
    i1, i2 = np.eye(n1), np.eye(n2)
    out = (
        np.trace(rho.matrix) * np.eye(n1 * n2)
        - np.kron(rho1, i2)
        - np.kron(i1, rho2)
        + rho.matrix
    )
    return out / ((n1 - 1) * (n2 - 1))


def superoperator_matrix(fn, dims: Sequence[int]) -> np.ndarray:
    """超算符在计算基上的稠密矩阵, 第 (a, b) 列为 fn(E_ab) 按行展开

    E_ab 为实矩阵, 因此对 flip 这类反线性映射, 得到的矩阵 M 满足
    vec(F(rho)) = M vec(rho^*)。
    """
    dims = check_dims(dims)
    size = int(np.prod(dims))
    out = np.zeros((size * size, size * size), dtype=np.complex128)
    for col in range(size * size):
        unit = np.zeros(size * size, dtype=np.complex128)
        unit[col] = 1.0
        out[:, col] = fn(DensityMatrix(dims, unit.reshape(size, size))).reshape(-1)
    return out
