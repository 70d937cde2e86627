# 数值容差
TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-9
TOL_EQ = 1e-9
# 迹 / 相干矢量允许的虚部残差
TOL_IMAG = 1e-10

# 验证套件默认参数
DEFAULT_SEED = 42
DEFAULT_TRIALS = 200
DEFAULT_DIMS = [[2, 2], [2, 3], [3, 3], [2, 2, 2]]

# Werner 扫描
WERNER_SWEEP_FROM = -1.0
WERNER_SWEEP_TO = 1.0
WERNER_SWEEP_STEPS = 401

# 性质失败时反例的默认输出文件
COUNTEREXAMPLE_PATH = "counterexamples.json"
# 可分态证书的默认输出文件 (gen separable 输出到标准输出时使用)
CERTIFICATE_PATH = "separable_certificate.json"
