"""
symchain 命令行入口
子命令：gen-sym, gen-power, verify, identities, curve；结果以 JSON（或 CSV）写到标准输出
"""
import argparse
import asyncio
import csv
import functools
import io
import json
import logging
import logging.handlers
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import aiofiles

from core.codec import (INFINITY_TEXT, encode_curve, encode_point, field_name, format_value,
                        parse_rational, parse_rational_list, parse_value)
from core.config_manager import ConfigManager
from core.curves import (CurvePoint, INFINITY, QuarticModel, WeierstrassCurve, ec_mul,
                         j_invariant, mazur_check, quartic_to_weierstrass, specialize,
                         torsion_certificate)
from core.error_handler import (ErrorType, ParseError, SymchainError, UsageError, get_error_handler,
                                safe_execute)
from core.families import (generate, is_positive, lift_to_n, make_integer_family,
                           positivity_window, verify_solution)
from core.identities import group_tasks
from core.models import IdentityReport, SolutionTuple
from core.pipeline import (build_pipeline, certify_infinite_order, chain_multiples,
                           collect_chain, gen_symmetric_chain, pull_back)
from core.runner import run_ordered

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

_installed_handlers: List[logging.Handler] = []


class SymchainArgumentParser(argparse.ArgumentParser):
    """参数错误抛出 UsageError，由统一的错误处理输出 JSON"""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.yaml", help="YAML 配置文件")
    common.add_argument("--log-level", default=None,
                        help="日志级别（覆盖配置和 SYMCHAIN_LOG_LEVEL）")
    common.add_argument("--output", default=None, help="输出文件，缺省写到标准输出")

    generator = argparse.ArgumentParser(add_help=False)
    generator.add_argument("--csv", action="store_true", help="每行一组解，只输出值")
    generator.add_argument("--integerize", action="store_true", help="缩放为本原整数解")
    generator.add_argument("--divisible-by", type=int, default=None,
                           help="整数化时要求第一个约束的值被 N 整除")

    parser = SymchainArgumentParser(prog="symchain",
                                    description="对称多项式与幂和方程组的精确解族")
    sub = parser.add_subparsers(dest="command", parser_class=SymchainArgumentParser)
    sub.required = True

    p = sub.add_parser("gen-sym", parents=[common, generator], help="椭圆曲线点链生成对称方程组的解")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", default="", help="t_1..t_{n-2}，逗号分隔")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True, help='有理数或 "symbolic"')
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--force", action="store_true", help="允许超过 chain.limit 的 --count")

    p = sub.add_parser("gen-power", parents=[common, generator], help="幂和方程组的闭式参数族")
    p.add_argument("--triple", required=True, choices=["123", "124", "m112", "24"])
    p.add_argument("--a", default=None)
    p.add_argument("--b", default=None)
    p.add_argument("--d", default=None)
    p.add_argument("--t", default="", help="参数 t 的列表，逗号分隔")
    p.add_argument("--lift", default="", help="追加的分量 x_5..x_n，逗号分隔")
    p.add_argument("--positive", action="store_true", help="只保留全部分量为正的解")
    p.add_argument("--window", action="store_true", help="输出 family 123 的正解区间")

    p = sub.add_parser("verify", parents=[common], help="校验 JSON 解文件")
    p.add_argument("--file", required=True)

    p = sub.add_parser("identities", parents=[common], help="运行恒等式检查")
    p.add_argument("--only", action="append", default=None,
                   help="只运行指定分组，可重复或逗号分隔")

    p = sub.add_parser("curve", parents=[common], help="曲线工具")
    p.add_argument("--quartic", default=None, help="h4,h3,h2,h1,h0")
    p.add_argument("--base", default=None, help="p0,s0")
    p.add_argument("--field", choices=["q"], default=None, help="系数在 Q(q) 中")
    p.add_argument("--A", dest="A", default=None)
    p.add_argument("--B", dest="B", default=None)
    p.add_argument("--point", default=None, help='X,Y 或 "infinity"')
    p.add_argument("--mul", type=int, default=None)
    p.add_argument("--specialize", default=None, help="把 q 代成有理数")
    p.add_argument("--certify", action="store_true", help="判定点的阶")
    return parser


def setup_logging(config_manager: ConfigManager, level_override: Optional[str] = None):
    """标准错误输出日志；配置了文件时再加一个滚动文件日志"""
    logging_config = config_manager.get_logging_config()
    level = (level_override or logging_config.get('level', 'INFO')).upper()
    if level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        raise UsageError(f"unknown log level {level_override!r}")

    root = logging.getLogger()
    # 重复调用 main() 时先撤掉上一次装的 handler
    while _installed_handlers:
        handler = _installed_handlers.pop()
        root.removeHandler(handler)
        handler.close()

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = logging_config.get('file')
    if log_file:
        handlers.append(logging.handlers.RotatingFileHandler(
            log_file, maxBytes=logging_config.get('max_size', 10485760),
            backupCount=logging_config.get('backup_count', 5), encoding='utf-8'))
    formatter = logging.Formatter(LOG_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
        _installed_handlers.append(handler)
    root.setLevel(level)


def _split_pair(text: str, what: str) -> Tuple[str, str]:
    parts = [s.strip() for s in str(text).split(",")]
    if len(parts) != 2:
        raise ParseError(f"{what} must be two comma-separated values, got {text!r}")
    return parts[0], parts[1]


def _write_error(payload: Dict[str, Any]) -> None:
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + "\n")
    sys.stderr.flush()


def _csv_rows(solutions: Sequence[SolutionTuple]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for sol in solutions:
        writer.writerow([format_value(v) for v in sol.values])
    return buffer.getvalue()


class SymchainCLI:
    """命令分发与输出"""

    def __init__(self, config_manager: ConfigManager):
        self.config = config_manager
        self.error_handler = get_error_handler()
        self.max_workers = config_manager.get_max_workers()

    async def run(self, args: argparse.Namespace) -> int:
        handlers = {
            'gen-sym': self.gen_sym_command,
            'gen-power': self.gen_power_command,
            'verify': self.verify_command,
            'identities': self.identities_command,
            'curve': self.curve_command,
        }
        result, success = await safe_execute(handlers[args.command], args,
                                             error_type=ErrorType.MATH_ERROR,
                                             context={'command': args.command})
        if success:
            return result
        _write_error(self.error_handler.last_payload)
        return self.error_handler.last_exit_code

    # ---- 输出 ----

    async def emit(self, args: argparse.Namespace, payload: Any = None, text: str = None):
        if text is None:
            text = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
        if args.output:
            async with aiofiles.open(args.output, 'w', encoding='utf-8') as f:
                await f.write(text)
            logger.info(f"Wrote {args.command} output to {args.output}")
        else:
            sys.stdout.write(text)
            sys.stdout.flush()

    async def emit_solutions(self, args: argparse.Namespace, solutions: List[SolutionTuple]):
        if getattr(args, 'csv', False):
            await self.emit(args, text=_csv_rows(solutions))
        else:
            await self.emit(args, [s.to_dict() for s in solutions])

    def integerize(self, args: argparse.Namespace, solutions: List[SolutionTuple]) -> List[SolutionTuple]:
        if args.divisible_by is not None and not args.integerize:
            raise UsageError("--divisible-by requires --integerize")
        if not args.integerize or not solutions:
            return solutions
        family = make_integer_family(solutions, args.divisible_by)
        logger.info(f"Integer family: scale {format_value(family.scale)}, "
                    f"primitive={family.primitive}")
        return family.solutions

    # ---- gen-sym ----

    async def gen_sym_command(self, args: argparse.Namespace) -> int:
        limit = self.config.get_chain_limit()
        if args.count < 0:
            raise UsageError("--count must be non-negative")
        if args.count > limit and not args.force:
            raise UsageError(f"--count {args.count} exceeds chain.limit {limit}; pass --force")
        t = parse_rational_list(args.t)
        p = parse_rational(args.p)
        symbolic = args.q.strip().lower() == "symbolic"
        q0 = None if symbolic else parse_rational(args.q)
        state = build_pipeline(args.i, args.n, t, p, symbolic_q=symbolic, q0=q0)
        logger.info(f"Pipeline: {json.dumps(state.describe(), ensure_ascii=False)}")
        if symbolic and args.integerize:
            raise UsageError("--integerize needs a rational --q")

        if args.count == 0:
            chain: List[SolutionTuple] = []
        elif state.degenerate:
            chain = gen_symmetric_chain(state, args.count)
        else:
            probes = self.config.get_specialization_probes()
            certify_infinite_order(state, probes, self.config.get_mazur_bound())
            multiples = chain_multiples(state, args.count)
            tasks = [functools.partial(pull_back, state, j, point) for j, point in multiples]
            chain = collect_chain(state, await run_ordered(tasks, self.max_workers))
            logger.info(f"Symmetric chain: {len(chain)} of {args.count} indices produced solutions")

        await self.emit_solutions(args, self.integerize(args, chain))
        return 0

    # ---- gen-power ----

    async def gen_power_command(self, args: argparse.Namespace) -> int:
        if args.window:
            if args.triple != "123":
                raise UsageError("--window is only defined for --triple 123")
            if args.a is None or args.d is None:
                raise UsageError("--window needs --a and --d")
            samples = self.config.get('symchain.verify.positivity_samples', 50)
            windows = positivity_window(parse_rational(args.a), parse_rational(args.d), samples)
            await self.emit(args, {
                'triple': args.triple,
                'windows': [[format_value(lo), format_value(hi)] for lo, hi in windows],
                'samples': samples
            })
            return 0

        ts = parse_rational_list(args.t)
        if not ts:
            raise UsageError("--t needs at least one value")
        params = {k: parse_rational(v) for k, v in (('a', args.a), ('b', args.b), ('d', args.d))
                  if v is not None}
        padding = parse_rational_list(args.lift)

        def build(t: Fraction) -> SolutionTuple:
            sol = generate(args.triple, params, t)
            return lift_to_n(sol, padding) if padding else sol

        solutions = await run_ordered([functools.partial(build, t) for t in ts], self.max_workers)
        if args.positive:
            solutions = [s for s in solutions if is_positive(s)]
            logger.info(f"{len(solutions)} of {len(ts)} tuples are positive")
        await self.emit_solutions(args, self.integerize(args, solutions))
        return 0

    # ---- verify ----

    async def verify_command(self, args: argparse.Namespace) -> int:
        try:
            async with aiofiles.open(args.file, 'r', encoding='utf-8') as f:
                content = await f.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.file}: {e}")
        try:
            data = json.loads(content)
        except json.JSONDecodeError as e:
            raise ParseError(f"{args.file} is not valid JSON: {e}")
        if isinstance(data, dict):
            data = data.get('solutions', [data])
        if not isinstance(data, list):
            raise ParseError("expected a JSON list of solution tuples")
        solutions = [SolutionTuple.from_dict(item) for item in data]

        tasks = [functools.partial(verify_solution, sol, k) for k, sol in enumerate(solutions)]
        reports = await run_ordered(tasks, self.max_workers)
        passed = all(r.passed for r in reports)
        await self.emit(args, {'passed': passed, 'reports': [r.to_dict() for r in reports]})
        if not passed:
            failed = [f"#{r.index}: {', '.join(c.name for c in r.failures())}"
                      for r in reports if not r.passed]
            logger.warning(f"Verification failed for {len(failed)} tuple(s): {'; '.join(failed)}")
        return 0 if passed else 1

    # ---- identities ----

    async def identities_command(self, args: argparse.Namespace) -> int:
        only = None
        if args.only:
            only = [name.strip() for item in args.only for name in item.split(",") if name.strip()]
        settings = self.config.get_identities_config()
        tasks = group_tasks(only, random_tuples=settings.get('random_tuples', 100),
                            max_n=settings.get('max_n', 6), seed=settings.get('seed', 20240601))
        report = IdentityReport()
        for results in await run_ordered(tasks, self.max_workers):
            report.results.extend(results)
        logger.info(f"Identity checks: {len(report.results)} run, "
                    f"{sum(1 for r in report.results if not r.passed)} failed")
        await self.emit(args, report.to_dict())
        return 0 if report.passed else 1

    # ---- curve ----

    async def curve_command(self, args: argparse.Namespace) -> int:
        symbolic = args.field == "q"
        q0 = parse_rational(args.specialize) if args.specialize is not None else None
        if q0 is not None and not symbolic:
            raise UsageError("--specialize needs --field q")
        if args.quartic is not None:
            payload = self._quartic_payload(args, symbolic, q0)
        elif args.A is not None and args.B is not None:
            payload = self._weierstrass_payload(args, symbolic, q0)
        else:
            raise UsageError("curve needs --quartic with --base, or --A and --B")
        await self.emit(args, payload)
        return 0

    def _quartic_payload(self, args: argparse.Namespace, symbolic: bool,
                         q0: Optional[Fraction]) -> Dict[str, Any]:
        if args.base is None:
            raise UsageError("--quartic needs --base p0,s0")
        coeffs = [parse_value(c.strip(), symbolic) for c in args.quartic.split(",")]
        if len(coeffs) != 5:
            raise ParseError("--quartic needs five coefficients h4,h3,h2,h1,h0")
        base = tuple(parse_value(c, symbolic) for c in _split_pair(args.base, "--base"))
        quartic = QuarticModel.from_coeffs(coeffs, base)
        if q0 is not None:
            quartic = specialize(quartic, q0)
        curve, phi = quartic_to_weierstrass(quartic)
        payload = {
            'curve': encode_curve(curve),
            'j_invariant': format_value(j_invariant(curve)),
            'transform': {k: ([format_value(c) for c in v] if k == 'base' else v)
                          for k, v in phi.describe().items()}
        }
        return payload

    def _weierstrass_payload(self, args: argparse.Namespace, symbolic: bool,
                             q0: Optional[Fraction]) -> Dict[str, Any]:
        curve = WeierstrassCurve(parse_value(args.A, symbolic), parse_value(args.B, symbolic))
        point = self._parse_point(args.point, symbolic) if args.point is not None else None
        if q0 is not None:
            curve = specialize(curve, q0)
            point = specialize(point, q0) if point is not None else None
        payload: Dict[str, Any] = {
            'curve': encode_curve(curve),
            'j_invariant': format_value(j_invariant(curve)),
            'discriminant': format_value(curve.discriminant())
        }
        if point is None:
            if args.mul is not None or args.certify:
                raise UsageError("--mul and --certify need --point")
            return payload
        curve.require(point)
        if args.mul is not None:
            payload['result'] = encode_point(ec_mul(curve, args.mul, point))
            payload['k'] = args.mul
        if args.certify:
            if curve.is_symbolic():
                verdict = torsion_certificate(curve, point)
            else:
                verdict = mazur_check(curve, point, self.config.get_mazur_bound())
            payload['certificate'] = verdict.to_dict()
        payload['point'] = encode_point(point)
        payload['curve']['field'] = field_name(curve.A, curve.B,
                                               *(() if point.is_infinity else (point.X, point.Y)))
        return payload

    @staticmethod
    def _parse_point(text: str, symbolic: bool) -> CurvePoint:
        if text.strip().lower() == INFINITY_TEXT:
            return INFINITY
        X, Y = _split_pair(text, "--point")
        return CurvePoint(parse_value(X, symbolic), parse_value(Y, symbolic))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行主函数，返回退出码"""
    error_handler = get_error_handler()
    try:
        args = build_parser().parse_args(argv)
        config_manager = ConfigManager(args.config)
        setup_logging(config_manager, args.log_level)
        return asyncio.run(SymchainCLI(config_manager).run(args))
    except (SymchainError, ZeroDivisionError, ArithmeticError, ValueError) as e:
        payload = error_handler.handle_error(e, {'argv': list(argv) if argv is not None else sys.argv[1:]})
        _write_error(payload)
        return error_handler.exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
