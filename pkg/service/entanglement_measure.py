"""
二次型准纠缠度量

    f(rho)   = tr[rho F(rho)] + tr[rho Fb(rho)] - 2^n / prod N_k
    E_q(rho) = max{f(rho), 0}

四种计算图景:
    density              flip / unflip 超算符直接求迹 (慢速, 作为对照)
    coherence            相干矢量分量平方按 g_weight 加权求和 (默认)
    qubit_fast           全比特系统: tr(rho sy^n rho^* sy^n) - (1 - tr rho^2)
    bipartite_mixedness  两体系统: 由约化态与整体态的混合度表示

负的 f 原样保留在报告中, eq 只做精确的 0 截断, 不设容差带。

使用示例:
----------
    >>> python service/entanglement_measure.py --state ghz4.json --picture density
"""

import os
import sys
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import TOL_IMAG
from service.flip_machinery import flip, g_weights, s_bar_weights, s_weights, unflip
from utils.coherence_map import ExpandedCoherenceVector, encode
from utils.errors import ImaginaryResidueError, PictureError
from utils.state_core import SIGMA_Y, DensityMatrix, kron_all, partial_trace, purity


class Picture(str, Enum):
    DENSITY = "density"
    COHERENCE = "coherence"
    QUBIT_FAST = "qubit_fast"
    BIPARTITE_MIXEDNESS = "bipartite_mixedness"

    @classmethod
    def parse(cls, text):
        """接受 qubit-fast 与 qubit_fast 两种写法"""
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).replace("-", "_"))
        except ValueError:
            raise PictureError(f"未知的计算图景: {text!r}")


@dataclass(frozen=True)
class MeasureReport:
    gross: float
    unflip_term: float
    offset: float
    f: float
    eq: float
    purity: float
    mixedness: float
    picture: str

    def to_dict(self):
        return asdict(self)


def offset(dims) -> float:
    """2^n / prod N_k"""
    return float(2 ** len(dims) / np.prod(dims))


def _real_trace_product(a, b, what):
    """tr(A B) 的实部, 虚部残差超过 TOL_IMAG 时报错"""
    value = np.sum(a * b.T)
    if abs(value.imag) > TOL_IMAG:
        raise ImaginaryResidueError(f"{what} 的虚部残差 {abs(value.imag):.3e} > {TOL_IMAG:.1e}")
    return float(value.real)


def _report(gross, unflip_term, off, f, pur, picture):
    return MeasureReport(
        gross=gross,
        unflip_term=unflip_term,
        offset=off,
        f=f,
        eq=max(f, 0.0),
        purity=pur,
        mixedness=1.0 - pur,
        picture=picture.value,
    )


def gross_entanglement(rho: DensityMatrix) -> float:
    """Jaeger 度量 tr[rho F(rho)]"""
    return _real_trace_product(rho.matrix, flip(rho), "tr rho F(rho)")


def mixedness(mu: DensityMatrix) -> float:
    """M(mu) = 1 - tr mu^2"""
    return 1.0 - purity(mu)


def f_density(rho: DensityMatrix) -> MeasureReport:
    gross = gross_entanglement(rho)
    unflip_term = _real_trace_product(rho.matrix, unflip(rho), "tr rho Fb(rho)")
    off = offset(rho.dims)
    return _report(gross, unflip_term, off, gross + unflip_term - off, purity(rho), Picture.DENSITY)


def f_coherence(v: ExpandedCoherenceVector, weights: Optional[np.ndarray] = None) -> MeasureReport:
    """相干矢量图景: f = sum g_weight * m^2 - 2^n / prod N_k

    weights 可替换 G 的对角元 (验证套件的变异测试用), 默认由 g_weights 给出。
    """
    squares = v.data * v.data
    if weights is None:
        weights = g_weights(v.dims)
    gross = float(s_weights(v.dims) @ squares)
    unflip_term = float(s_bar_weights(v.dims) @ squares)
    off = offset(v.dims)
    f = float(weights @ squares) - off
    return _report(gross, unflip_term, off, f, float(squares.sum()), Picture.COHERENCE)


def f_qubits_fast(rho: DensityMatrix) -> MeasureReport:
    if not rho.is_all_qubits():
        raise PictureError(f"qubit_fast 只适用于全比特系统, 得到维数 {list(rho.dims)}")
    sy = kron_all([SIGMA_Y] * rho.n)
    flipped = sy @ rho.matrix.conj() @ sy
    gross = _real_trace_product(rho.matrix, flipped, "tr rho F(rho)")
    pur = purity(rho)
    # 全比特时 Fb 为恒等映射, tr rho Fb(rho) = tr rho^2, 偏移量为 1
    return _report(gross, pur, 1.0, gross + pur - 1.0, pur, Picture.QUBIT_FAST)


def f_bipartite_mixedness(rho: DensityMatrix) -> MeasureReport:
    """f = 2 (N1 M(rho1) + N2 M(rho2) - N1 N2 M(rho)) / ((N1-1)(N2-1) N1 N2)"""
    if rho.n != 2:
        raise PictureError(f"bipartite_mixedness 只适用于两体系统, 得到 {rho.n} 体")
    n1, n2 = rho.dims
    p = purity(rho)
    p1 = purity(partial_trace(rho, [0]))
    p2 = purity(partial_trace(rho, [1]))

    f = (
        2
        * (n1 * (1 - p1) + n2 * (1 - p2) - n1 * n2 * (1 - p))
        / ((n1 - 1) * (n2 - 1) * n1 * n2)
    )

    # 由纯度还原单体与两体相干分量的平方和, 得到 tr rho F(rho)
    local1 = (p1 - 1 / n1) / n2
    local2 = (p2 - 1 / n2) / n1
    joint = p - 1 / (n1 * n2) - local1 - local2
    gross = 1 / (n1 * n2) - local1 / (n1 - 1) - local2 / (n2 - 1) + joint / ((n1 - 1) * (n2 - 1))

    off = offset(rho.dims)
    return _report(gross, f + off - gross, off, f, p, Picture.BIPARTITE_MIXEDNESS)


def applicable_pictures(rho: DensityMatrix):
    pictures = [Picture.COHERENCE, Picture.DENSITY]
    if rho.is_all_qubits():
        pictures.append(Picture.QUBIT_FAST)
    if rho.n == 2:
        pictures.append(Picture.BIPARTITE_MIXEDNESS)
    return pictures


def eq_measure(rho: DensityMatrix, picture=None) -> MeasureReport:
    """E_q(rho), 默认走相干矢量图景"""
    picture = Picture.COHERENCE if picture is None else Picture.parse(picture)
    if picture == Picture.COHERENCE:
        return f_coherence(encode(rho))
    if picture == Picture.DENSITY:
        return f_density(rho)
    if picture == Picture.QUBIT_FAST:
        return f_qubits_fast(rho)
    return f_bipartite_mixedness(rho)


def concurrence_sq_pure_two_qubit(psi) -> float:
    """|<psi| sy (x) sy |psi^*>|^2"""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.size != 4:
        raise ValueError(f"需要 4 分量态矢, 得到 {psi.size} 分量")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-9:
        raise ValueError(f"态矢未归一化, 模为 {norm:.12g}")
    return float(abs(psi.conj() @ np.kron(SIGMA_Y, SIGMA_Y) @ psi.conj()) ** 2)


def main():
    import argparse
    import json

    from utils.state_io import load_state

    parser = argparse.ArgumentParser(description="准纠缠度量计算工具")
    parser.add_argument("--state", required=True, help="态文件路径 (JSON)")
    parser.add_argument(
        "--picture",
        choices=[p.value for p in Picture],
        help="计算图景 (默认: coherence)",
    )
    args = parser.parse_args()

    try:
        rho = load_state(args.state)
        report = eq_measure(rho, args.picture)
        print(json.dumps(report.to_dict(), indent=2))
    except Exception as e:
        print(f"计算过程出错: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
