"""局域酉变换与局域 Kraus / POVM 信道

密度矩阵图景下直接作用; 相干矢量图景下用列构造法提取超算符 Db:
把每个乘积基元素送进信道再重新展开, 得到 encode(apply(rho)) = Db encode(rho)。
对 POVM 信道, 单体 Db 呈 diag(1, D) 分块且 D 为压缩映射 (奇异值 <= 1),
这是被检验的性质而不是构造时的假设。

信道文件格式 (JSON):
    {"dims": [2, 2], "factors": [{"kraus": [rows, ...]}, {"kraus": [rows, ...]}]}
"""

import os
import sys
from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import qr, svdvals

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import TOL_IMAG
from generator.state_gallery import make_rng
from utils.coherence_map import decode_operator, encode_operator
from utils.errors import ChannelError, DimensionError, ImaginaryResidueError, StateFormatError
from utils.state_core import DensityMatrix, Tolerances, check_dims, dagger, kron_all, validate_density
from utils.state_io import matrix_to_rows, rows_to_matrix

UNITARITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
NORMALITY_TOL = 1e-9


def _as_matrices(mats, d, what):
    out = []
    for m in mats:
        m = np.array(m, dtype=np.complex128)
        if m.shape != (d, d):
            raise DimensionError(f"{what} 的形状 {m.shape} 与子系统维数 {d} 不符")
        m.setflags(write=False)
        out.append(m)
    return out


@dataclass(frozen=True)
class LocalUnitary:
    """U = U_1 (x) ... (x) U_n"""

    dims: Tuple[int, ...]
    factors: List[np.ndarray] = field(repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        if len(self.factors) != len(dims):
            raise DimensionError("酉因子个数与子系统个数不符")
        factors = [_as_matrices([u], d, "酉因子")[0] for u, d in zip(self.factors, dims)]
        for k, u in enumerate(factors):
            defect = unitarity_defect(u)
            if defect > UNITARITY_TOL:
                raise ChannelError(f"第 {k} 个因子不是酉矩阵, |U^dagger U - I|_max = {defect:.3e}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "factors", factors)

    def full(self) -> np.ndarray:
        return kron_all(self.factors)

    def as_channel(self) -> "LocalKrausChannel":
        return LocalKrausChannel(self.dims, [[u] for u in self.factors])

    def to_dict(self):
        return self.as_channel().to_dict()


@dataclass(frozen=True)
class LocalKrausChannel:
    """每个子系统一组 Kraus 算符 {L_j^(k)}; 构造时只检查形状, 完备性在作用时检查"""

    dims: Tuple[int, ...]
    kraus: List[List[np.ndarray]] = field(repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        if len(self.kraus) != len(dims):
            raise DimensionError("Kraus 列表个数与子系统个数不符")
        kraus = []
        for ops, d in zip(self.kraus, dims):
            if len(ops) == 0:
                raise ChannelError("每个子系统至少需要一个 Kraus 算符")
            kraus.append(_as_matrices(ops, d, "Kraus 算符"))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "kraus", kraus)

    @classmethod
    def from_local(cls, dims: Sequence[int], local: dict) -> "LocalKrausChannel":
        """只在部分子系统上作用的信道, 其余子系统为恒等"""
        dims = check_dims(dims)
        return cls(dims, [local.get(k, [np.eye(d)]) for k, d in enumerate(dims)])

    @property
    def is_povm(self) -> bool:
        return validate_povm(self).is_povm

    def to_dict(self):
        return {
            "dims": list(self.dims),
            "factors": [{"kraus": [matrix_to_rows(m) for m in ops]} for ops in self.kraus],
        }


@dataclass(frozen=True)
class PovmDiagnosis:
    completeness_defects: Tuple[float, ...]
    normality_defects: Tuple[Tuple[float, ...], ...]

    @property
    def is_complete(self) -> bool:
        return max(self.completeness_defects) <= COMPLETENESS_TOL

    @property
    def is_povm(self) -> bool:
        worst = max(max(d) for d in self.normality_defects)
        return self.is_complete and worst <= NORMALITY_TOL

    def to_dict(self):
        return {
            "completeness_defects": list(self.completeness_defects),
            "normality_defects": [list(d) for d in self.normality_defects],
            "is_complete": self.is_complete,
            "is_povm": self.is_povm,
        }


@dataclass(frozen=True)
class CoherenceSuperoperator:
    """作用在扩展相干矢量上的矩阵 Db"""

    dims: Tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def apply(self, data: np.ndarray) -> np.ndarray:
        return self.matrix @ data

    def coherence_block(self) -> np.ndarray:
        """单体情形 Db = [[a, h^T], [g, D]] 中的 D"""
        if len(self.dims) != 1:
            raise DimensionError("coherence_block 只对单体超算符有定义")
        return self.matrix[1:, 1:]

    def block_defect(self) -> float:
        """单体 Db 偏离 diag(1, D) 形式的程度: max(|a - 1|, |h|, |g|)"""
        if len(self.dims) != 1:
            raise DimensionError("block_defect 只对单体超算符有定义")
        m = self.matrix
        return float(max(abs(m[0, 0] - 1), np.max(np.abs(m[0, 1:])), np.max(np.abs(m[1:, 0]))))

    def max_singular_value(self) -> float:
        return float(svdvals(self.coherence_block())[0])

    def orthogonality_defect(self) -> float:
        block = self.coherence_block()
        return float(np.max(np.abs(block.T @ block - np.eye(block.shape[0]))))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def validate_povm(ch) -> PovmDiagnosis:
    """诊断完备性缺陷与每个 Kraus 算符的正规性缺陷 |[L, L^dagger]|_max

    ch 可以是 LocalKrausChannel, 也可以是单体的 Kraus 算符列表。
    """
    if not isinstance(ch, LocalKrausChannel):
        ops = [np.asarray(m, dtype=np.complex128) for m in ch]
        if not ops:
            raise ChannelError("Kraus 算符列表为空")
        ch = LocalKrausChannel((ops[0].shape[0],), [ops])

    completeness, normality = [], []
    for ops, d in zip(ch.kraus, ch.dims):
        total = sum(dagger(m) @ m for m in ops)
        completeness.append(float(np.max(np.abs(total - np.eye(d)))))
        normality.append(tuple(float(np.max(np.abs(m @ dagger(m) - dagger(m) @ m))) for m in ops))
    return PovmDiagnosis(tuple(completeness), tuple(normality))


def _apply_kraus_matrix(matrix: np.ndarray, ch: LocalKrausChannel) -> np.ndarray:
    """sum over Kraus tuples (x)L matrix (x)L^dagger"""
    out = np.zeros_like(matrix, dtype=np.complex128)
    for tup in product(*ch.kraus):
        op = kron_all(tup)
        out += op @ matrix @ dagger(op)
    return out


def apply_local_unitary(rho: DensityMatrix, u: LocalUnitary, tol: Tolerances = None) -> DensityMatrix:
    if tuple(u.dims) != tuple(rho.dims):
        raise DimensionError(f"酉变换维数 {list(u.dims)} 与态的维数 {list(rho.dims)} 不符")
    full = u.full()
    return validate_density(full @ rho.matrix @ dagger(full), rho.dims, tol)


def apply_local_kraus(rho: DensityMatrix, ch: LocalKrausChannel, tol: Tolerances = None) -> DensityMatrix:
    if tuple(ch.dims) != tuple(rho.dims):
        raise DimensionError(f"信道维数 {list(ch.dims)} 与态的维数 {list(rho.dims)} 不符")
    diagnosis = validate_povm(ch)
    if not diagnosis.is_complete:
        raise ChannelError(
            f"Kraus 算符不完备, |sum L^dagger L - I|_max = {max(diagnosis.completeness_defects):.3e}"
        )
    return validate_density(_apply_kraus_matrix(rho.matrix, ch), rho.dims, tol)


def coherence_superoperator(op) -> CoherenceSuperoperator:
    """列构造法: 第 c 列为乘积基元素 c 经过信道后的展开系数"""
    ch = op.as_channel() if isinstance(op, LocalUnitary) else op
    dims = ch.dims
    total = int(np.prod([d * d for d in dims]))
    out = np.zeros((total, total))
    for col in range(total):
        unit = np.zeros(total)
        unit[col] = 1.0
        image = _apply_kraus_matrix(decode_operator(unit, dims), ch)
        coeffs = encode_operator(image, dims)
        residue = float(np.max(np.abs(coeffs.imag)))
        if residue > TOL_IMAG:
            raise ImaginaryResidueError(f"超算符第 {col} 列虚部残差 {residue:.3e}")
        out[:, col] = coeffs.real
    return CoherenceSuperoperator(dims, out)


def local_superoperators(op) -> List[CoherenceSuperoperator]:
    """逐个子系统提取 Db^(k); 局域信道的 Db 等于它们的 Kronecker 积"""
    ch = op.as_channel() if isinstance(op, LocalUnitary) else op
    return [
        coherence_superoperator(LocalKrausChannel((d,), [ops]))
        for d, ops in zip(ch.dims, ch.kraus)
    ]


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """复高斯矩阵做 QR 分解, 再用 R 对角元的相位修正 Q, 得到旋转不变分布"""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_local_unitary(dims: Sequence[int], seed) -> LocalUnitary:
    dims = check_dims(dims)
    rng = make_rng(seed)
    return LocalUnitary(dims, [random_unitary(d, rng) for d in dims])


def random_povm(dim: int, seed, lam: Optional[float] = None, v: Optional[np.ndarray] = None) -> LocalKrausChannel:
    """{sqrt(lam) V P_i V^dagger} U {sqrt(1 - lam) I}

    P_i 为计算基的秩 1 投影; 所有算符厄米因而正规, 构造上完备。
    lam 与 V 缺省时随机抽取 (lam 在 [0, 1] 上均匀)。
    """
    check_dims([dim])
    rng = make_rng(seed)
    if v is None:
        v = random_unitary(dim, rng)
    if lam is None:
        lam = float(rng.uniform(0.0, 1.0))
    ops = []
    for i in range(dim):
        p = np.zeros((dim, dim), dtype=np.complex128)
        p[i, i] = 1.0
        ops.append(np.sqrt(lam) * v @ p @ dagger(v))
    ops.append(np.sqrt(1 - lam) * np.eye(dim, dtype=np.complex128))
    return LocalKrausChannel((dim,), [ops])


def channel_from_dict(payload) -> LocalKrausChannel:
    if not isinstance(payload, dict) or "dims" not in payload or "factors" not in payload:
        raise StateFormatError("信道文件必须是包含 dims 与 factors 字段的 JSON 对象")
    try:
        kraus = [[rows_to_matrix(rows) for rows in factor["kraus"]] for factor in payload["factors"]]
        dims = [int(d) for d in payload["dims"]]
    except StateFormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise StateFormatError(f"信道文件格式错误: {str(e)}")
    return LocalKrausChannel(tuple(dims), kraus)
