"""
准纠缠度量命令行工具

子命令:
    measure        计算态文件的 E_q (可选先作用局域信道)
    sweep-werner   扫描 Werner 族的 f(phi) 并报告零点
    verify         运行性质验证套件
    gen            生成参考态 / 随机态的态文件
    basis          输出广义 Gell-Mann 基

退出码:
    0 成功; 1 用法或解析错误; 2 校验失败; 3 计算图景与维数不兼容; 4 性质验证失败

使用示例:
----------
    >>> python main.py gen ghz --n 4 --output ghz4.json
    >>> python main.py measure ghz4.json --picture density
    >>> python main.py sweep-werner --from -1 --to 1 --steps 401 --out csv
    >>> python main.py verify --seed 42 --trials 200
"""

import argparse
import os
import sys

import numpy as np
import pandas as pd

from config import (
    CERTIFICATE_PATH,
    COUNTEREXAMPLE_PATH,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    WERNER_SWEEP_FROM,
    WERNER_SWEEP_STEPS,
    WERNER_SWEEP_TO,
)
from generator.state_gallery import (
    completely_mixed,
    ghz,
    max_entangled,
    parse_dims,
    random_density,
    random_pure,
    random_pure_product,
    random_separable,
    werner,
)
from service.entanglement_measure import Picture, eq_measure
from service.local_channels import apply_local_kraus, channel_from_dict
from service.verification_harness import SuiteConfig, parse_dims_list, run_suite, werner_sweep
from utils.errors import (
    ChannelError,
    DensityValidationError,
    PictureError,
    QuasiMeasureError,
)
from utils.gellmann_basis import basis_stack
from utils.state_core import Tolerances
from utils.state_io import dumps, load_state, matrix_to_rows, read_json, state_to_dict, write_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_PICTURE = 3
EXIT_PROPERTY = 4


class CliArgumentParser(argparse.ArgumentParser):
    """用法错误统一以退出码 1 结束 (argparse 默认为 2, 与校验失败冲突)"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: 错误: {message}\n")


def validate_dim(text):
    """基的维数必须 >= 2"""
    try:
        dim = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"无效的维数: {text}")
    if dim < 2:
        raise argparse.ArgumentTypeError(f"维数必须 >= 2, 得到 {dim}")
    return dim


def validate_steps(text):
    try:
        steps = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"无效的步数: {text}")
    if steps < 2:
        raise argparse.ArgumentTypeError(f"steps 必须 >= 2, 得到 {steps}")
    return steps


def validate_trials(text):
    try:
        trials = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"无效的试验次数: {text}")
    if trials < 1:
        raise argparse.ArgumentTypeError(f"trials 必须 >= 1, 得到 {trials}")
    return trials


def validate_tol(text):
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"无效的容差: {text}")
    if not np.isfinite(tol) or tol < 0:
        raise argparse.ArgumentTypeError(f"容差必须为有限非负实数, 得到 {text}")
    return tol


def cmd_measure(args):
    tol = None if args.tol is None else Tolerances(herm=args.tol, trace=args.tol, psd=args.tol)
    rho = load_state(args.state, validate=not args.no_validate, tol=tol)
    if args.channel:
        rho = apply_local_kraus(rho, channel_from_dict(read_json(args.channel)), tol)
    report = eq_measure(rho, args.picture)
    write_text(dumps(report.to_dict(), indent=2), args.output)
    return EXIT_OK


def cmd_sweep_werner(args):
    sweep = werner_sweep(args.phi_from, args.phi_to, args.steps)
    if args.out == "csv":
        write_text(sweep.to_csv(), args.output)
    else:
        write_text(dumps(sweep.to_dict(), indent=2), args.output)
    print(f"Werner 扫描: {sweep.note()}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    dims = parse_dims_list(args.dims) if args.dims else SuiteConfig().dims
    cfg = SuiteConfig(
        seed=args.seed,
        trials=args.trials,
        dims=dims,
        mutate_g_weight=args.mutate_g_weight,
    )
    if not args.quiet:
        print(f"开始验证: seed={cfg.seed}, trials={cfg.trials}, dims={[list(d) for d in cfg.dims]}", file=sys.stderr)

    report = run_suite(cfg, progress=not args.quiet)
    write_text(dumps(report.to_dict(), indent=2, sort_keys=True), args.output)

    if not args.quiet:
        pd.set_option("display.max_rows", None)
        pd.set_option("display.width", None)
        print(report.to_frame().to_string(index=False), file=sys.stderr)
        print(f"Werner: {report.werner['note']}", file=sys.stderr)

    if report.passed:
        return EXIT_OK

    failures = report.failures()
    counterexamples = [p.counterexample for p in failures]
    write_text(dumps(counterexamples, indent=2), args.counterexample_out)
    print(
        f"性质验证失败: {', '.join(p.name for p in failures)}; 反例已写入 {args.counterexample_out}",
        file=sys.stderr,
    )
    return EXIT_PROPERTY


def _certificate_path(args):
    if args.certificate:
        return args.certificate
    if args.output:
        root, _ = os.path.splitext(args.output)
        return f"{root}.certificate.json"
    return CERTIFICATE_PATH


def cmd_gen(args):
    certificate = None
    if args.kind == "ghz":
        rho = ghz(args.n)
    elif args.kind == "werner":
        rho = werner(args.phi)
    elif args.kind == "mixed":
        rho = completely_mixed(parse_dims(args.dims))
    elif args.kind == "maxent":
        rho = max_entangled(args.dim)
    elif args.kind == "pure":
        rho = random_pure(parse_dims(args.dims), args.seed)
    elif args.kind == "product":
        rho = random_pure_product(parse_dims(args.dims), args.seed)
    elif args.kind == "density":
        dims = parse_dims(args.dims)
        rank = args.rank if args.rank is not None else int(np.prod(dims))
        rho = random_density(dims, rank, args.seed)
    else:
        rho, certificate = random_separable(parse_dims(args.dims), args.terms, args.seed)

    write_text(dumps(state_to_dict(rho)), args.output)
    if certificate is not None:
        path = _certificate_path(args)
        write_text(dumps(certificate.to_dict(), indent=2), path)
        print(f"可分态证书已写入 {path}", file=sys.stderr)
    return EXIT_OK


def cmd_basis(args):
    stack = basis_stack(args.dim)
    write_text(dumps([matrix_to_rows(m) for m in stack]), args.output)
    return EXIT_OK


def build_parser():
    parser = CliArgumentParser(prog="main.py", description="二次型准纠缠度量计算与验证工具")
    sub = parser.add_subparsers(dest="command", parser_class=CliArgumentParser)
    sub.required = True

    p = sub.add_parser("measure", help="计算态文件的 E_q")
    p.add_argument("state", help="态文件路径 (JSON)")
    p.add_argument(
        "--picture",
        choices=[pic.value for pic in Picture] + [pic.value.replace("_", "-") for pic in Picture if "_" in pic.value],
        help="计算图景 (默认: coherence)",
    )
    p.add_argument("--no-validate", action="store_true", help="跳过厄米 / 迹 / 正定校验")
    p.add_argument("--tol", type=validate_tol, help="校验容差 (默认: 1e-9)")
    p.add_argument("--channel", help="先作用的局域信道文件 (JSON)")
    p.add_argument("--output", help="输出文件路径 (默认: 标准输出)")
    p.set_defaults(handler=cmd_measure)

    p = sub.add_parser("sweep-werner", help="扫描 Werner 族")
    p.add_argument("--from", dest="phi_from", type=float, default=WERNER_SWEEP_FROM, help="起点 (默认: -1)")
    p.add_argument("--to", dest="phi_to", type=float, default=WERNER_SWEEP_TO, help="终点 (默认: 1)")
    p.add_argument("--steps", type=validate_steps, default=WERNER_SWEEP_STEPS, help="网格点数 (>= 2)")
    p.add_argument("--out", choices=["json", "csv"], default="json", help="输出格式 (默认: json)")
    p.add_argument("--output", help="输出文件路径 (默认: 标准输出)")
    p.set_defaults(handler=cmd_sweep_werner)

    p = sub.add_parser("verify", help="运行性质验证套件")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="主种子 (默认: 42)")
    p.add_argument("--trials", type=validate_trials, default=DEFAULT_TRIALS, help="每个维数的试验次数")
    p.add_argument("--dims", help="维数列表 (格式: 2,2;2,3;3,3;2,2,2)")
    p.add_argument("--quiet", action="store_true", help="不显示进度条与汇总表")
    p.add_argument("--output", help="报告输出路径 (默认: 标准输出)")
    p.add_argument("--counterexample-out", default=COUNTEREXAMPLE_PATH, help="反例输出路径")
    # 变异测试开关, 不在帮助中显示
    p.add_argument("--mutate-g-weight", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", help="生成态文件")
    p.add_argument("kind", choices=["ghz", "werner", "mixed", "maxent", "pure", "product", "density", "separable"])
    p.add_argument("--n", type=int, default=2, help="GHZ 态的比特数")
    p.add_argument("--phi", type=float, default=0.0, help="Werner 参数")
    p.add_argument("--dim", type=validate_dim, default=2, help="最大纠缠态的单体维数")
    p.add_argument("--dims", default="2,2", help="子系统维数 (格式: 2,3)")
    p.add_argument("--rank", type=int, help="随机密度矩阵的秩 (默认: 满秩)")
    p.add_argument("--terms", type=int, default=2, help="可分态的项数")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output", help="输出文件路径 (默认: 标准输出)")
    p.add_argument("--certificate", help="可分态证书输出路径")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("basis", help="输出广义 Gell-Mann 基")
    p.add_argument("--dim", type=validate_dim, required=True, help="子系统维数 N (>= 2)")
    p.add_argument("--output", help="输出文件路径 (默认: 标准输出)")
    p.set_defaults(handler=cmd_basis)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        return args.handler(args)
    except (DensityValidationError, ChannelError) as e:
        print(f"校验失败: {str(e)}", file=sys.stderr)
        return EXIT_VALIDATION
    except PictureError as e:
        print(f"计算图景不可用: {str(e)}", file=sys.stderr)
        return EXIT_PICTURE
    except (QuasiMeasureError, ValueError) as e:
        print(f"输入错误: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"文件读写失败: {str(e)}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
