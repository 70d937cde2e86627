"""参考态与随机态生成

随机生成函数的 seed 可以是整数、整数序列 (例如 (主种子, 试验序号)) 或
numpy Generator; 相同的 (seed, 参数) 总是得到相同的输出。
"""

import os
import sys
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils.coherence_map import ExpandedCoherenceVector, encode, product_vector
from utils.errors import DensityValidationError, DimensionError
from utils.state_core import (
    PAULIS,
    DensityMatrix,
    check_dims,
    kron_all,
    projector,
    validate_density,
)


def make_rng(seed) -> np.random.Generator:
    """由种子构造独立的随机数流; 序列种子经 SeedSequence 混合, 与执行顺序无关"""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (list, tuple)):
        return np.random.default_rng([int(s) for s in seed])
    return np.random.default_rng(int(seed))


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """独立标准复高斯分量归一化得到的态矢"""
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


@dataclass(frozen=True)
class SeparableEnsemble:
    """可分态证书: rho = sum_i p_i |psi_i^1><psi_i^1| (x) ... (x) |psi_i^n><psi_i^n|"""

    dims: Tuple[int, ...]
    weights: np.ndarray = field(repr=False)
    factors: List[List[np.ndarray]] = field(repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        weights = np.asarray(self.weights, dtype=np.float64)
        if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
            raise ValueError(f"权重必须非负且和为 1, 得到和 {weights.sum():.15g}")
        if len(self.factors) != len(weights):
            raise ValueError("权重个数与项数不符")
        for term in self.factors:
            if [len(v) for v in term] != list(dims):
                raise DimensionError("因子态矢的维数与子系统维数不符")
            for v in term:
                if abs(np.linalg.norm(v) - 1) > 1e-12:
                    raise ValueError("因子态矢未归一化")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "weights", weights)

    def assemble(self) -> DensityMatrix:
        size = int(np.prod(self.dims))
        matrix = np.zeros((size, size), dtype=np.complex128)
        for p, term in zip(self.weights, self.factors):
            matrix += p * kron_all([projector(v) for v in term])
        return DensityMatrix(self.dims, matrix)

    def coherence_vector(self) -> ExpandedCoherenceVector:
        """sum_i p_i m_i^(1) (x) ... (x) m_i^(n)"""
        total = np.zeros(int(np.prod([d * d for d in self.dims])))
        for p, term in zip(self.weights, self.factors):
            local = [encode(DensityMatrix((len(v),), projector(v))) for v in term]
            total += p * product_vector(local).data
        return ExpandedCoherenceVector(self.dims, total)

    def to_dict(self):
        return {
            "dims": list(self.dims),
            "weights": [float(p) for p in self.weights],
            "factors": [
                [[[float(z.real), float(z.imag)] for z in v] for v in term]
                for term in self.factors
            ],
        }


def ghz(n: int) -> DensityMatrix:
    """(|0...0> + |1...1>)/sqrt(2) 的投影"""
    if n < 2:
        raise DimensionError(f"GHZ 态要求 n >= 2, 得到 {n}")
    psi = np.zeros(2**n, dtype=np.complex128)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return DensityMatrix((2,) * n, projector(psi))


def max_entangled(dim: int) -> DensityMatrix:
    """sum_k |kk> / sqrt(N)"""
    check_dims([dim])
    psi = np.eye(dim, dtype=np.complex128).reshape(-1) / np.sqrt(dim)
    return DensityMatrix((dim, dim), projector(psi))


def werner(phi: float) -> DensityMatrix:
    """两比特 Werner 态 w = I/4 - (2 phi + 1)/12 * sum_k sigma_k (x) sigma_k

    phi 超出 [-1, 1] 时 w 有负本征值, 不是量子态。
    """
    if not -1.0 <= phi <= 1.0:
        raise DensityValidationError(
            "positivity", f"Werner 参数 phi = {phi} 超出正定范围 [-1, 1]"
        )
    a = (2 * phi + 1) / 3
    matrix = np.eye(4, dtype=np.complex128) / 4
    for s in PAULIS:
        matrix -= a / 4 * np.kron(s, s)
    return validate_density(matrix, (2, 2))


def completely_mixed(dims: Sequence[int]) -> DensityMatrix:
    dims = check_dims(dims)
    size = int(np.prod(dims))
    return DensityMatrix(dims, np.eye(size, dtype=np.complex128) / size)


def random_pure(dims: Sequence[int], seed) -> DensityMatrix:
    dims = check_dims(dims)
    rng = make_rng(seed)
    return DensityMatrix(dims, projector(random_state_vector(int(np.prod(dims)), rng)))


def random_density(dims: Sequence[int], rank: int, seed) -> DensityMatrix:
    """rank 个随机高斯矢量的 Gram 矩阵归一化, 保证半正定且迹为 1"""
    dims = check_dims(dims)
    size = int(np.prod(dims))
    if not 1 <= rank <= size:
        raise DimensionError(f"rank 必须在 [1, {size}] 内, 得到 {rank}")
    rng = make_rng(seed)
    if rank == 1:
        return DensityMatrix(dims, projector(random_state_vector(size, rng)))
    g = rng.standard_normal((size, rank)) + 1j * rng.standard_normal((size, rank))
    matrix = g @ g.conj().T
    return DensityMatrix(dims, matrix / np.trace(matrix).real)


def random_pure_product(dims: Sequence[int], seed) -> DensityMatrix:
    """随机纯乘积态"""
    dims = check_dims(dims)
    rng = make_rng(seed)
    return DensityMatrix(dims, kron_all([projector(random_state_vector(d, rng)) for d in dims]))


def random_separable(dims: Sequence[int], terms: int, seed):
    """随机可分态及其证书

    权重由独立指数变量归一化得到 (单纯形上均匀), 每项每个子系统取随机纯态。

    Returns:
        (DensityMatrix, SeparableEnsemble)
    """
    dims = check_dims(dims)
    if terms < 1:
        raise ValueError(f"项数必须 >= 1, 得到 {terms}")
    rng = make_rng(seed)
    weights = rng.exponential(size=terms)
    weights = weights / weights.sum()
    factors = [[random_state_vector(d, rng) for d in dims] for _ in range(terms)]
    ensemble = SeparableEnsemble(dims, weights, factors)
    return ensemble.assemble(), ensemble


def parse_dims(text: str) -> Tuple[int, ...]:
    """'2,3' -> (2, 3)"""
    try:
        dims = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise DimensionError(f"无法解析维数列表: {text!r}, 格式应为 2,3")
    return check_dims(dims)


def main():
    import argparse

    parser = argparse.ArgumentParser(description="参考态生成工具")
    parser.add_argument("kind", choices=["ghz", "werner", "mixed", "pure", "separable"])
    parser.add_argument("--n", type=int, default=2, help="GHZ 态的比特数")
    parser.add_argument("--phi", type=float, default=0.0, help="Werner 参数")
    parser.add_argument("--dims", default="2,2", help="子系统维数 (格式: 2,3)")
    parser.add_argument("--terms", type=int, default=2, help="可分态的项数")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    try:
        if args.kind == "ghz":
            rho = ghz(args.n)
        elif args.kind == "werner":
            rho = werner(args.phi)
        elif args.kind == "mixed":
            rho = completely_mixed(parse_dims(args.dims))
        elif args.kind == "pure":
            rho = random_pure(parse_dims(args.dims), args.seed)
        else:
            rho, _ = random_separable(parse_dims(args.dims), args.terms, args.seed)
    except ValueError as e:
        print(f"生成失败: {str(e)}")
        sys.exit(1)

    np.set_printoptions(precision=4, suppress=True, linewidth=160)
    print(f"dims = {list(rho.dims)}")
    print(rho.matrix)


if __name__ == "__main__":
    main()
