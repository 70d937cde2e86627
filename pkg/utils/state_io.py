"""态文件读写

态文件格式 (JSON):
    {"dims": [2, 2], "rows": [[[re, im], ...], ...]}

复数写成 [re, im] 数组; 浮点数用最短可精确还原的十进制表示输出,
读回后与原值逐位相同。
"""

import json
import os
import sys

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from utils.errors import StateFormatError
from utils.state_core import DensityMatrix, Tolerances, validate_density


def matrix_to_rows(matrix):
    matrix = np.asarray(matrix, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def rows_to_matrix(rows):
    try:
        matrix = np.array(
            [[complex(float(real), float(imag)) for real, imag in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, ValueError):
        raise StateFormatError("rows 必须是由 [re, im] 组成的二维嵌套列表")
    if matrix.ndim != 2:
        raise StateFormatError("rows 必须是二维嵌套列表")
    return matrix


def state_to_dict(rho: DensityMatrix):
    return {"dims": list(rho.dims), "rows": matrix_to_rows(rho.matrix)}


def parse_state(payload, validate=True, tol: Tolerances = None) -> DensityMatrix:
    """由已解析的 JSON 对象构造密度矩阵

    validate=False 时只检查形状, 不做厄米 / 迹 / 正定校验。
    """
    if not isinstance(payload, dict) or "dims" not in payload or "rows" not in payload:
        raise StateFormatError("态文件必须是包含 dims 与 rows 字段的 JSON 对象")
    try:
        dims = [int(d) for d in payload["dims"]]
    except (TypeError, ValueError):
        raise StateFormatError("dims 必须是整数列表")
    matrix = rows_to_matrix(payload["rows"])
    if validate:
        return validate_density(matrix, dims, tol)
    size = int(np.prod(dims)) if dims else 0
    if matrix.shape != (size, size):
        raise StateFormatError(f"矩阵形状 {matrix.shape} 与维数 {dims} 不符")
    return DensityMatrix(tuple(dims), matrix)


def read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fp:
            return json.load(fp)
    except json.JSONDecodeError as e:
        raise StateFormatError(f"JSON 解析失败: {str(e)}")
    except OSError as e:
        raise StateFormatError(f"无法读取文件 {path}: {str(e)}")


def load_state(path, validate=True, tol: Tolerances = None) -> DensityMatrix:
    return parse_state(read_json(path), validate, tol)


def dumps(obj, indent=None, sort_keys=False):
    """统一的 JSON 输出: 键顺序固定, 浮点数可精确还原"""
    return json.dumps(obj, indent=indent, sort_keys=sort_keys, ensure_ascii=False, allow_nan=False)


def write_text(text, path=None):
    """写到 path, path 为空时写到标准输出"""
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(text)
        if not text.endswith("\n"):
            fp.write("\n")
