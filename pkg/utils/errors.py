"""异常类型

命令行根据异常类型映射退出码:
    DensityValidationError -> 2, PictureError -> 3, 其余 -> 1
"""


class QuasiMeasureError(ValueError):
    """所有领域异常的基类"""


class DimensionError(QuasiMeasureError):
    """子系统维数、索引或保留集合不合法"""


class DensityValidationError(QuasiMeasureError):
    """密度矩阵校验失败

    kind 取值: dimension / hermitian / trace / positivity
    """

    def __init__(self, kind, message, defect=None):
        super().__init__(message)
        self.kind = kind
        self.defect = defect


class ImaginaryResidueError(QuasiMeasureError):
    """应为实数的量带有超出容差的虚部"""


class PictureError(QuasiMeasureError):
    """请求的计算图景与子系统维数不兼容"""


class ChannelError(QuasiMeasureError):
    """酉因子或 Kraus 算符集合不合法"""


class ConfigError(QuasiMeasureError):
    """验证套件或扫描参数不合法"""


class StateFormatError(QuasiMeasureError):
    """态文件 / 信道文件无法解析"""
