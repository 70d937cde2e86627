"""N 能级系统的正交归一厄米算符基 (广义 Gell-Mann 基)

平铺下标约定 (P = N(N-1)/2):
    0               Omega_0 = I / sqrt(N)
    1 .. P          Omega^x_{ij}, (i, j) 按字典序 (1,2), (1,3), ..., (N-1,N)
    P+1 .. 2P       Omega^y_{ij}, 同上
    2P+1 .. N^2-1   Omega^z_p, p = flat - N(N-1) + 1, p = 2..N

能级下标 i, j, p 从 1 开始, 与公式一致。
"""

import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils.errors import DimensionError


@dataclass(frozen=True)
class BasisIndex:
    dim: int
    flat: int

    def __post_init__(self):
        if self.dim < 2:
            raise DimensionError(f"基的维数必须 >= 2, 得到 {self.dim}")
        if not 0 <= self.flat <= self.dim**2 - 1:
            raise DimensionError(
                f"平铺下标 {self.flat} 超出范围 [0, {self.dim ** 2 - 1}] (N={self.dim})"
            )

    @property
    def kind(self):
        """identity / x / y / z"""
        pairs = self.dim * (self.dim - 1) // 2
        if self.flat == 0:
            return "identity"
        if self.flat <= pairs:
            return "x"
        if self.flat <= 2 * pairs:
            return "y"
        return "z"

    @property
    def pair(self):
        """x / y 型元素的能级对 (i, j), i < j"""
        pairs = level_pairs(self.dim)
        if self.kind == "x":
            return pairs[self.flat - 1]
        if self.kind == "y":
            return pairs[self.flat - 1 - len(pairs)]
        return None

    @property
    def p(self):
        """z 型元素的 p"""
        if self.kind != "z":
            return None
        return self.flat - self.dim * (self.dim - 1) + 1

    @property
    def label(self):
        if self.kind == "identity":
            return "0"
        if self.kind == "z":
            return f"z{self.p}"
        i, j = self.pair
        return f"{self.kind}{i}{j}"


@lru_cache(maxsize=None)
def level_pairs(dim):
    """能级对 (i, j), 1 <= i < j <= dim, 字典序"""
    return tuple(combinations(range(1, dim + 1), 2))


def basis_element(idx: BasisIndex) -> np.ndarray:
    """按平铺下标生成单个基元素 (N x N)"""
    n = idx.dim
    element = np.zeros((n, n), dtype=np.complex128)
    kind = idx.kind

    if kind == "identity":
        element[np.diag_indices(n)] = 1 / np.sqrt(n)
    elif kind == "x":
        i, j = idx.pair
        element[i - 1, j - 1] = element[j - 1, i - 1] = 1 / np.sqrt(2)
    elif kind == "y":
        i, j = idx.pair
        element[i - 1, j - 1] = -1j / np.sqrt(2)
        element[j - 1, i - 1] = 1j / np.sqrt(2)
    else:
        p = idx.p
        for r in range(1, p):
            element[r - 1, r - 1] = 1 / np.sqrt(p * (p - 1))
        element[p - 1, p - 1] = -np.sqrt((p - 1) / p)

    return element


@lru_cache(maxsize=None)
def _basis_stack(dim):
    stack = np.array([basis_element(BasisIndex(dim, k)) for k in range(dim**2)])
    stack.setflags(write=False)
    return stack


def basis_stack(dim: int) -> np.ndarray:
    """全部基元素堆叠成 (N^2, N, N) 数组, 按平铺顺序; 结果只读且按 N 缓存"""
    if dim < 2:
        raise DimensionError(f"基的维数必须 >= 2, 得到 {dim}")
    return _basis_stack(int(dim))


def basis_list(dim: int):
    """全部 N^2 个基元素, 按平铺顺序"""
    return list(basis_stack(dim))


def basis_labels(dim: int):
    return [BasisIndex(dim, k).label for k in range(dim**2)]


def expand_operator(h: np.ndarray) -> np.ndarray:
    """单体算符在基下的展开系数 tr(Omega_i H)"""
    h = np.asarray(h, dtype=np.complex128)
    stack = basis_stack(h.shape[0])
    # Omega_i 厄米, tr(Omega_i^dagger H) = sum(conj(Omega_i) * H)
    return np.einsum("kab,ab->k", stack.conj(), h)


def main():
    import argparse

    parser = argparse.ArgumentParser(description="广义 Gell-Mann 基查看工具")
    parser.add_argument("--dim", type=int, required=True, help="子系统维数 N (>= 2)")
    args = parser.parse_args()

    try:
        stack = basis_stack(args.dim)
    except DimensionError as e:
        print(f"生成基失败: {str(e)}")
        sys.exit(1)

    np.set_printoptions(precision=4, suppress=True)
    for label, element in zip(basis_labels(args.dim), stack):
        print(f"\nOmega[{label}]:")
        print(element)

    gram = np.einsum("iab,jab->ij", stack.conj(), stack)
    print(f"\n正交归一偏差: {np.max(np.abs(gram - np.eye(args.dim ** 2))):.3e}")


if __name__ == "__main__":
    main()
