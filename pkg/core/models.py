"""
symchain 数据模型定义
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .codec import format_value, parse_value
from .error_handler import MathError, ParseError, UsageError
from .ratfun import RatFun
from .symfun import power_sum, sigma


class SystemKind(Enum):
    """方程组类型枚举"""
    SYMMETRIC = "symmetric"        # sigma_i, sigma_{2n-i}, sigma_{2n}
    POWER = "power"                # 幂和 s_e1, s_e2, ...


class ConstraintKind(Enum):
    """约束类型枚举"""
    SIGMA = "sigma"                # 初等对称多项式
    POWER_SUM = "power_sum"        # 幂和


class CertificateKind(Enum):
    """挠点判定结果"""
    INFINITE_ORDER = "infinite_order"        # 无限阶
    TORSION_CANDIDATE = "torsion_candidate"  # 判别法无法排除
    TWO_TORSION = "two_torsion"              # Y = 0
    FINITE_ORDER = "finite_order"            # 找到了阶


@dataclass(frozen=True)
class Constraint:
    """单个约束：sigma_k(X) = target 或 s_k(X) = target"""
    kind: ConstraintKind           # 约束类型
    index: int                     # sigma 的下标或幂和的指数
    target: Any                    # 目标值（Fraction 或 RatFun）

    @property
    def name(self) -> str:
        prefix = "sigma" if self.kind == ConstraintKind.SIGMA else "s"
        return f"{prefix}_{self.index}"

    @property
    def degree(self) -> int:
        """齐次次数：值按 lambda 缩放时约束值按 lambda^degree 缩放"""
        return self.index

    def evaluate(self, values: Sequence[Any]) -> Any:
        if self.kind == ConstraintKind.SIGMA:
            return sigma(self.index, values)
        return power_sum(self.index, values)


@dataclass
class SystemSpec:
    """目标方程组的声明式描述"""
    kind: SystemKind               # 方程组类型
    n: int                         # 对称型为半长 n（元组长 2n），幂和型为元组长度
    i: int = 0                     # 对称型的下标 i
    exponents: Tuple[int, ...] = ()  # 幂和型的指数
    targets: Tuple[Any, ...] = ()  # 目标值

    def __post_init__(self):
        self.exponents = tuple(self.exponents)
        self.targets = tuple(self.targets)
        self.validate()

    @classmethod
    def symmetric(cls, n: int, i: int, a: Any, b: Any = None, c: Any = 1) -> 'SystemSpec':
        return cls(SystemKind.SYMMETRIC, n, i=i, targets=(a, a if b is None else b, c))

    @classmethod
    def power(cls, n: int, exponents: Sequence[int], targets: Sequence[Any]) -> 'SystemSpec':
        return cls(SystemKind.POWER, n, exponents=tuple(exponents), targets=tuple(targets))

    def validate(self):
        if self.kind == SystemKind.SYMMETRIC:
            if not 1 <= self.i <= self.n:
                raise UsageError(f"symmetric system needs 1 <= i <= n (got i={self.i}, n={self.n})")
            if len(self.targets) != 3:
                raise UsageError("symmetric system needs three targets")
            if not self.targets[2]:
                raise UsageError("the target of sigma_2n must be nonzero")
        else:
            if len(self.exponents) != len(self.targets):
                raise UsageError("one target per exponent is required")
            if len(set(self.exponents)) != len(self.exponents) or 0 in self.exponents:
                raise UsageError(f"exponents must be distinct and nonzero: {self.exponents}")

    @property
    def length(self) -> int:
        """元组长度"""
        return 2 * self.n if self.kind == SystemKind.SYMMETRIC else self.n

    def constraints(self) -> List[Constraint]:
        if self.kind == SystemKind.SYMMETRIC:
            indices = (self.i, 2 * self.n - self.i, 2 * self.n)
            return [Constraint(ConstraintKind.SIGMA, k, t) for k, t in zip(indices, self.targets)]
        return [Constraint(ConstraintKind.POWER_SUM, e, t)
                for e, t in zip(self.exponents, self.targets)]

    def scaled(self, lam: Any) -> 'SystemSpec':
        """所有值乘以 lam 后的方程组"""
        targets = tuple(c.target * Fraction(lam) ** c.degree for c in self.constraints())
        return SystemSpec(self.kind, self.n, i=self.i, exponents=self.exponents, targets=targets)

    def is_symbolic(self) -> bool:
        return any(isinstance(t, RatFun) and not t.is_constant() for t in self.targets)

    def same_as(self, other: 'SystemSpec') -> bool:
        return (self.kind == other.kind and self.n == other.n and self.i == other.i
                and self.exponents == other.exponents
                and all(a == b for a, b in zip(self.targets, other.targets)))

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        data: Dict[str, Any] = {'kind': self.kind.value, 'n': self.n}
        if self.kind == SystemKind.SYMMETRIC:
            data['i'] = self.i
        else:
            data['exponents'] = list(self.exponents)
        data['targets'] = [format_value(t) for t in self.targets]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SystemSpec':
        """从字典创建实例"""
        try:
            kind = SystemKind(data['kind'])
            targets = tuple(_decode(t) for t in data['targets'])
            return cls(kind, int(data['n']), i=int(data.get('i', 0)),
                       exponents=tuple(int(e) for e in data.get('exponents', ())),
                       targets=targets)
        except (KeyError, ValueError, TypeError, AttributeError) as e:
            raise ParseError(f"malformed system spec: {e}")


def _decode(text: Any) -> Any:
    value = parse_value(text, symbolic='q' in str(text))
    if isinstance(value, RatFun) and value.is_constant():
        return value.constant_value()
    return value


@dataclass
class SolutionTuple:
    """一组解及其证书"""
    values: Tuple[Any, ...]        # 元组的值
    spec: SystemSpec               # 目标方程组
    certificate: Dict[str, Any] = field(default_factory=dict)  # 各约束的计算值
    provenance: Dict[str, Any] = field(default_factory=dict)   # 生成方式与参数

    def __post_init__(self):
        self.values = tuple(self.values)
        if len(self.values) != self.spec.length:
            raise MathError(f"tuple of length {len(self.values)} does not fit a system "
                            f"of length {self.spec.length}")

    def certify(self) -> 'SolutionTuple':
        """从原始值重新计算证书"""
        self.certificate = {c.name: c.evaluate(self.values) for c in self.spec.constraints()}
        return self

    def is_symbolic(self) -> bool:
        return any(isinstance(v, RatFun) and not v.is_constant() for v in self.values)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            'spec': self.spec.to_dict(),
            'values': [format_value(v) for v in self.values],
            'certificate': {k: format_value(v) for k, v in self.certificate.items()},
            'provenance': dict(self.provenance)
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SolutionTuple':
        """从字典创建实例；证书原样读入，校验时不会使用它"""
        if not isinstance(data, dict):
            raise ParseError(f"solution tuple must be a JSON object, got {type(data).__name__}")
        raw_values = data.get('values', [])
        if not isinstance(raw_values, list):
            raise ParseError("'values' must be a JSON array")
        spec = SystemSpec.from_dict(data.get('spec', {}))
        try:
            values = tuple(_decode(v) for v in raw_values)
            certificate = {k: _decode(v) for k, v in data.get('certificate', {}).items()}
            provenance = dict(data.get('provenance', {}))
        except (TypeError, ValueError, AttributeError) as e:
            raise ParseError(f"malformed solution tuple: {e}")
        return cls(values, spec, certificate, provenance)


@dataclass
class ConstraintResult:
    """单个约束的校验结果"""
    name: str                      # 约束名，例如 sigma_1
    target: Any                    # 目标值
    computed: Any = None           # 计算值
    passed: bool = False           # 是否通过
    message: str = ""              # 失败原因

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'constraint': self.name,
            'target': format_value(self.target),
            'computed': None if self.computed is None else format_value(self.computed),
            'passed': self.passed
        }
        if self.message:
            data['message'] = self.message
        return data


@dataclass
class VerificationReport:
    """一组解的校验报告"""
    index: int = 0                 # 在输入中的位置
    results: List[ConstraintResult] = field(default_factory=list)  # 各约束结果

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def failures(self) -> List[ConstraintResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'index': self.index,
            'passed': self.passed,
            'constraints': [r.to_dict() for r in self.results]
        }


@dataclass
class IdentityResult:
    """单个恒等式的检查结果"""
    group: str                     # 所属分组
    name: str                      # 恒等式名称
    passed: bool                   # 是否成立
    residual: str = "0"            # 残差多项式（成立时为 0）
    detail: str = ""               # 附加说明
    variables: List[str] = field(default_factory=list)  # 残差多项式的变量表
    terms: Optional[List[Any]] = None                   # 残差多项式的 JSON 形式

    def to_dict(self) -> Dict[str, Any]:
        data = {'group': self.group, 'name': self.name, 'passed': self.passed}
        if not self.passed:
            data['residual'] = self.residual
            if self.terms is not None:
                data['variables'] = list(self.variables)
                data['terms'] = self.terms
        if self.detail:
            data['detail'] = self.detail
        return data


@dataclass
class IdentityReport:
    """恒等式检查汇总"""
    results: List[IdentityResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def groups(self) -> List[str]:
        seen: List[str] = []
        for r in self.results:
            if r.group not in seen:
                seen.append(r.group)
        return seen

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'total': len(self.results),
            'failed': sum(1 for r in self.results if not r.passed),
            'results': [r.to_dict() for r in self.results]
        }


@dataclass(frozen=True)
class TorsionVerdict:
    """挠点判定"""
    kind: CertificateKind          # 判定类型
    reason: str = ""               # 无限阶的理由
    order: Optional[int] = None    # 有限阶时的阶

    @property
    def infinite(self) -> bool:
        return self.kind == CertificateKind.INFINITE_ORDER

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'verdict': self.kind.value}
        if self.reason:
            data['reason'] = self.reason
        if self.order is not None:
            data['order'] = self.order
        return data
