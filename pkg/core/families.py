"""
幂和方程组的参数族
四个闭式参数族、正解区间、向 n >= 5 的提升、整数化，以及与存储证书无关的解校验
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .error_handler import FamilyParameterError, MathError, SymchainError, UsageError, VerificationFailure
from .models import ConstraintResult, SolutionTuple, SystemKind, SystemSpec, VerificationReport
from .mpoly import MPoly, symbols
from .symfun import power_sum, scale_tuple

logger = logging.getLogger(__name__)

Parts = Tuple[List[Any], Any]


# ---- 校验 ----

def verify_solution(sol: SolutionTuple, index: int = 0) -> VerificationReport:
    """从原始值重新计算每个约束，不使用存储的证书"""
    report = VerificationReport(index=index)
    for constraint in sol.spec.constraints():
        result = ConstraintResult(constraint.name, constraint.target)
        try:
            result.computed = constraint.evaluate(sol.values)
            result.passed = not (result.computed - constraint.target)
            if not result.passed:
                result.message = "computed value differs from target"
        except (SymchainError, ArithmeticError) as e:
            result.message = str(e)
        report.results.append(result)
    return report


def _self_check(sol: SolutionTuple) -> SolutionTuple:
    report = verify_solution(sol)
    if not report.passed:
        names = ", ".join(r.name for r in report.failures())
        raise VerificationFailure(f"{sol.provenance.get('method')} output fails {names}")
    return sol


# ---- 参数族的公式 ----
# 每个族给出分子列表与公分母；参数可以是 Fraction，也可以是 MPoly（符号证书用）

def _parts_123(a: Any, d: Any, t: Any) -> Parts:
    den = 4 * (t * t + 16)
    nums = [
        8 * (4 * a - d * t),
        2 * t * (a * t + 4 * d),
        (t + 4) * ((a - d) * t + 4 * (a + d)),
        (t - 4) * ((a + d) * t + 4 * (d - a)),
    ]
    return nums, den


def _targets_123(a: Any, d: Any) -> List[Tuple[Any, Any]]:
    return [(a, 1), (3 * a * a + d * d, 8), (a * (5 * a * a + 3 * d * d), 32)]


def _parts_124(a: Any, d: Any, t: Any) -> Parts:
    den = 2 * (t * t + 3)
    n1 = -4 * d * t
    n2 = d * (t - 1) * (t + 3)
    return [n1, n2, -n1 - n2, 2 * a * (t * t + 3)], den


def _targets_124(a: Any, d: Any) -> List[Tuple[Any, Any]]:
    return [(a, 1), (2 * a * a + d * d, 2), (8 * a ** 4 + d ** 4, 8)]


def _parts_m112(a: Any, b: Any, t: Any) -> Parts:
    w = t * t + t + 1
    den = a * w
    n1 = (t + 1) * (a * b - 1)
    return [n1, t * n1, (1 - a * b) * t, w], den


def _targets_m112(a: Any, b: Any) -> List[Tuple[Any, Any]]:
    return [(a, 1), (b, 1), (2 - 2 * a * b + a * a * b * b, a * a)]


def _parts_24(d: Any, t: Any) -> Parts:
    den = t * t - t + 1
    nums = [
        t * t + 2 * d * t - d - 1,
        d * t * t - 2 * (d + 1) * t + 1,
        (d + 1) * t * t - 2 * t - d,
    ]
    return nums, den


def _targets_24(d: Any) -> List[Tuple[Any, Any]]:
    w = d * d + d + 1
    return [(2 * w, 1), (2 * w * w, 1)]


@dataclass(frozen=True)
class ParametricFamily:
    """一个闭式参数族"""
    name: str                      # 命令行名，例如 "123"
    params: Tuple[str, ...]        # 参数名，最后一个是 t
    n: int                         # 元组长度
    exponents: Tuple[int, ...]     # 幂和指数
    parts: Callable[..., Parts]    # 参数 -> (分子, 公分母)
    targets: Callable[..., List[Tuple[Any, Any]]]  # 参数（不含 t） -> [(分子, 分母)]

    @property
    def method(self) -> str:
        return f"family_{self.name}"


FAMILIES: Dict[str, ParametricFamily] = {
    '123': ParametricFamily('123', ('a', 'd', 't'), 4, (1, 2, 3), _parts_123, _targets_123),
    '124': ParametricFamily('124', ('a', 'd', 't'), 4, (1, 2, 4), _parts_124, _targets_124),
    'm112': ParametricFamily('m112', ('a', 'b', 't'), 4, (-1, 1, 2), _parts_m112, _targets_m112),
    '24': ParametricFamily('24', ('d', 't'), 3, (2, 4), _parts_24, _targets_24),
}


def get_family(name: str) -> ParametricFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UsageError(f"unknown family {name!r}; choose one of {', '.join(FAMILIES)}")


def _evaluate(family: ParametricFamily, args: Sequence[Fraction]) -> SolutionTuple:
    nums, den = family.parts(*args)
    if not den:
        raise FamilyParameterError(f"common denominator of family {family.name} vanishes")
    values = tuple(Fraction(x) / den for x in nums)
    targets = tuple(Fraction(num) / Fraction(tden) for num, tden in family.targets(*args[:-1]))
    spec = SystemSpec.power(family.n, family.exponents, targets)
    params = {name: _fmt(value) for name, value in zip(family.params, args)}
    sol = SolutionTuple(values, spec, provenance={'method': family.method, 'params': params})
    return _self_check(sol.certify())


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def family_123(a: Any, d: Any, t: Any) -> SolutionTuple:
    """s_1 = a, s_2 = (3a^2+d^2)/8, s_3 = a(5a^2+3d^2)/32"""
    a, d, t = Fraction(a), Fraction(d), Fraction(t)
    if not a:
        raise FamilyParameterError("family 123 needs a != 0")
    return _evaluate(FAMILIES['123'], (a, d, t))


def family_124(a: Any, d: Any, t: Any) -> SolutionTuple:
    """s_1 = a, s_2 = (2a^2+d^2)/2, s_4 = (8a^4+d^4)/8"""
    a, d, t = Fraction(a), Fraction(d), Fraction(t)
    if not a:
        raise FamilyParameterError("family 124 needs a != 0")
    return _evaluate(FAMILIES['124'], (a, d, t))


def family_m112(a: Any, b: Any, t: Any) -> SolutionTuple:
    """s_-1 = a, s_1 = b, s_2 = (2-2ab+a^2b^2)/a^2"""
    a, b, t = Fraction(a), Fraction(b), Fraction(t)
    if not a:
        raise FamilyParameterError("family m112 needs a != 0 (x4 = 1/a)")
    if not b:
        raise FamilyParameterError("family m112 needs b != 0")
    if a * b == 1:
        raise FamilyParameterError("ab = 1 makes x1, x2 and x3 zero")
    if not t:
        raise FamilyParameterError("t = 0 makes x2 and x3 zero")
    if t == -1:
        raise FamilyParameterError("t = -1 makes x1 and x2 zero")
    return _evaluate(FAMILIES['m112'], (a, b, t))


def family_24(d: Any, t: Any) -> SolutionTuple:
    """s_2 = 2(d^2+d+1), s_4 = 2(d^2+d+1)^2"""
    return _evaluate(FAMILIES['24'], (Fraction(d), Fraction(t)))


def generate(name: str, params: Dict[str, Any], t: Any) -> SolutionTuple:
    """按族名生成；params 中缺少的参数报错"""
    family = get_family(name)
    missing = [p for p in family.params[:-1] if params.get(p) is None]
    if missing:
        raise UsageError(f"family {name} needs --{' --'.join(missing)}")
    args = [params[p] for p in family.params[:-1]] + [t]
    builder = {'123': family_123, '124': family_124, 'm112': family_m112, '24': family_24}[name]
    return builder(*args)


# ---- 符号证书 ----

def symbolic_certificate(name: str) -> Dict[str, MPoly]:
    """把参数当作变量，返回每个约束去分母后的残差；全为零即恒等式成立

    e > 0: sum N_i^e * T_den - T_num * D^e；
    e < 0: sum_i D^m prod_{j != i} N_j^m * T_den - T_num * prod N_j^m（m = -e）。
    """
    family = get_family(name)
    variables = symbols(*family.params)
    nums, den = family.parts(*variables)
    targets = family.targets(*variables[:-1])
    residuals: Dict[str, MPoly] = {}
    for e, (t_num, t_den) in zip(family.exponents, targets):
        if e > 0:
            total = sum((x ** e for x in nums), MPoly.zero(variables[0].vars))
            residual = total * t_den - t_num * den ** e
        else:
            m = -e
            prod_all = MPoly.constant(1, variables[0].vars)
            for x in nums:
                prod_all = prod_all * x ** m
            total = MPoly.zero(variables[0].vars)
            for k in range(len(nums)):
                others = MPoly.constant(1, variables[0].vars)
                for j, x in enumerate(nums):
                    if j != k:
                        others = others * x ** m
                total = total + den ** m * others
            residual = total * t_den - t_num * prod_all
        residuals[f"s_{e}"] = residual
    return residuals


# ---- 正解区间 ----

def positivity_window(a: Any, d: Any, samples: int = 50) -> List[Tuple[Fraction, Fraction]]:
    """0 < d < a 时 family_123 四个坐标都为正的 t 区间

    (0, 4(a-d)/(a+d)) 与 (4, 4a/d)；在每个区间内取 samples 个等距有理点检查。
    """
    a, d = Fraction(a), Fraction(d)
    if not 0 < d < a:
        raise FamilyParameterError(f"positivity window needs 0 < d < a (got a={a}, d={d})")
    windows = [(Fraction(0), 4 * (a - d) / (a + d)), (Fraction(4), 4 * a / d)]
    for lo, hi in windows:
        for t in sample_open_interval(lo, hi, samples):
            values = family_123(a, d, t).values
            if any(x <= 0 for x in values):
                raise MathError(f"non-positive coordinate at t = {t} inside ({lo}, {hi})")
    return windows


def sample_open_interval(lo: Fraction, hi: Fraction, count: int) -> List[Fraction]:
    return [lo + (hi - lo) * Fraction(k, count + 1) for k in range(1, count + 1)]


def is_positive(sol: SolutionTuple) -> bool:
    return all(isinstance(x, Fraction) and x > 0 for x in sol.values)


# ---- 提升到 n >= 5 ----

def lift_to_n(sol: SolutionTuple, padding: Sequence[Any]) -> SolutionTuple:
    """追加 padding，目标值加上 padding 的相应幂和"""
    if sol.spec.kind != SystemKind.POWER:
        raise UsageError("only power-sum systems can be lifted")
    padding = tuple(Fraction(x) for x in padding)
    if not padding:
        return sol
    shifts = []
    for e in sol.spec.exponents:
        if e < 0 and any(not x for x in padding):
            raise FamilyParameterError(f"zero padding entry with negative exponent {e}")
        shifts.append(power_sum(e, padding))
    targets = tuple(t + s for t, s in zip(sol.spec.targets, shifts))
    spec = SystemSpec.power(sol.spec.n + len(padding), sol.spec.exponents, targets)
    provenance = dict(sol.provenance)
    provenance['lift'] = [_fmt(x) for x in padding]
    lifted = SolutionTuple(sol.values + padding, spec, provenance=provenance)
    return _self_check(lifted.certify())


# ---- 整数化 ----

@dataclass
class IntegerFamily:
    """共享同一方程组的整数解集合"""
    solutions: List[SolutionTuple] = field(default_factory=list)  # 整数解
    spec: Optional[SystemSpec] = None     # 缩放后的方程组
    scale: Fraction = Fraction(1)         # 缩放因子
    primitive: bool = True                # 全部分量的 gcd 是否为 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scale': _fmt(self.scale),
            'primitive': self.primitive,
            'spec': self.spec.to_dict() if self.spec else None,
            'solutions': [s.to_dict() for s in self.solutions]
        }


def make_integer_family(sols: Sequence[SolutionTuple],
                        divisible_by: Optional[int] = None) -> IntegerFamily:
    """缩放为整数解：lambda = 所有分母的 lcm，再除以全部分量的 gcd

    要求第一个约束的值被 divisible_by 整除时，再乘上 m = N / gcd(N, 当前值)，
    此时结果一般不再是本原的。
    """
    if not sols:
        raise UsageError("make_integer_family needs at least one solution")
    spec = sols[0].spec
    for sol in sols[1:]:
        if not sol.spec.same_as(spec):
            raise UsageError("all solutions must share one system")
    if any(sol.is_symbolic() for sol in sols) or spec.is_symbolic():
        raise UsageError("integer scaling needs rational solutions")
    values = [Fraction(x) for sol in sols for x in sol.values]
    lam = lcm(*(x.denominator for x in values))
    g = gcd(*(int(x * lam) for x in values)) or 1
    scale = Fraction(lam, g)

    primitive = True
    if divisible_by:
        N = int(divisible_by)
        if N <= 0:
            raise UsageError("--divisible-by must be positive")
        first = spec.constraints()[0]
        if first.degree <= 0:
            raise UsageError(f"{first.name} is not a polynomial in the values; "
                             "divisibility cannot be imposed")
        current = Fraction(first.target) * scale ** first.degree
        if current.denominator != 1:
            raise MathError(f"{first.name} of the scaled tuples is not an integer")
        m = N // gcd(N, current.numerator)
        scale *= m
        primitive = m == 1

    scaled_spec = spec.scaled(scale)
    out = []
    for sol in sols:
        provenance = dict(sol.provenance)
        provenance['scale'] = _fmt(scale)
        scaled = SolutionTuple(scale_tuple(sol.values, scale), scaled_spec, provenance=provenance)
        out.append(_self_check(scaled.certify()))
    logger.info("Scaled %d solutions by %s", len(out), scale)
    return IntegerFamily(out, scaled_spec, scale, primitive)
