"""
稀疏多元多项式
项以指数向量为键、Fraction 为值；单项式按分次字典序排列；变量按名字对齐
"""
import itertools
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .error_handler import MathError
from .linalg import bareiss_det, solve_linear

logger = logging.getLogger(__name__)

Exps = Tuple[int, ...]


def _grlex_key(exps: Exps) -> Tuple[int, Exps]:
    return sum(exps), exps


class MPoly:
    """有理系数多元多项式（不可变）"""

    __slots__ = ('vars', 'terms')

    def __init__(self, terms: Optional[Mapping[Exps, Any]] = None,
                 variables: Sequence[str] = ()):
        self.vars: Tuple[str, ...] = tuple(variables)
        clean: Dict[Exps, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise ValueError(f"exponent vector {exps} does not match variables {self.vars}")
            c = Fraction(c)
            if c:
                clean[exps] = c
        self.terms: Dict[Exps, Fraction] = clean

    # ---- 构造 ----

    @classmethod
    def constant(cls, c: Any, variables: Sequence[str] = ()) -> 'MPoly':
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name: str, variables: Optional[Sequence[str]] = None) -> 'MPoly':
        variables = tuple(variables) if variables else (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"{name} is not one of {variables}")
        return cls({exps: 1}, variables)

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> 'MPoly':
        return cls({}, variables)

    def _new(self, terms: Mapping[Exps, Any]) -> 'MPoly':
        return MPoly(terms, self.vars)

    # ---- 变量对齐 ----

    def with_vars(self, variables: Sequence[str]) -> 'MPoly':
        """换到新的变量表；被丢弃的变量必须不出现"""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        index = {v: k for k, v in enumerate(variables)}
        out: Dict[Exps, Fraction] = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.vars, exps):
                if e:
                    if v not in index:
                        raise ValueError(f"variable {v} occurs in {self} and cannot be dropped")
                    new[index[v]] = e
            out[tuple(new)] = c
        return MPoly(out, variables)

    def _align(self, other: 'MPoly') -> Tuple['MPoly', 'MPoly']:
        if self.vars == other.vars:
            return self, other
        variables = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(variables), other.with_vars(variables)

    def _lift(self, other: Any) -> 'MPoly':
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(other, self.vars)
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    def used_vars(self) -> Tuple[str, ...]:
        return tuple(v for k, v in enumerate(self.vars)
                     if any(exps[k] for exps in self.terms))

    def trim(self) -> 'MPoly':
        return self.with_vars(self.used_vars())

    # ---- 属性 ----

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(exps) for exps in self.terms), default=-1)

    def degree(self, name: str) -> int:
        if name not in self.vars:
            return 0 if self.terms else -1
        k = self.vars.index(name)
        return max((exps[k] for exps in self.terms), default=-1)

    def leading_term(self) -> Tuple[Exps, Fraction]:
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def sorted_terms(self) -> List[Tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.constant(other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    __hash__ = None

    # ---- 环运算 ----

    def __add__(self, other: Any) -> 'MPoly':
        a, b = self._align(self._lift(other))
        out = dict(a.terms)
        for exps, c in b.terms.items():
            out[exps] = out.get(exps, 0) + c
        return MPoly(out, a.vars)

    __radd__ = __add__

    def __neg__(self) -> 'MPoly':
        return self._new({exps: -c for exps, c in self.terms.items()})

    def __sub__(self, other: Any) -> 'MPoly':
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> 'MPoly':
        return (-self) + other

    def __mul__(self, other: Any) -> 'MPoly':
        if isinstance(other, (int, Fraction)):
            return self._new({exps: c * other for exps, c in self.terms.items()})
        a, b = self._align(self._lift(other))
        out: Dict[Exps, Fraction] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        return MPoly(out, a.vars)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Any) -> 'MPoly':
        if not isinstance(scalar, (int, Fraction)):
            raise TypeError("MPoly can only be divided by a rational scalar; use exact_div")
        if not scalar:
            raise ZeroDivisionError("MPoly division by zero")
        return self._new({exps: c / scalar for exps, c in self.terms.items()})

    def __pow__(self, e: int) -> 'MPoly':
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.constant(1, self.vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, other: Any) -> 'MPoly':
        """按首项做多元除法；不能整除时抛出 ArithmeticError"""
        if isinstance(other, (int, Fraction)):
            return self / other
        f, g = self._align(other)
        if g.is_zero():
            raise ZeroDivisionError("MPoly division by zero")
        lead_exps, lead_c = g.leading_term()
        quot: Dict[Exps, Fraction] = {}
        rem = dict(f.terms)
        while rem:
            exps = max(rem, key=_grlex_key)
            shift = tuple(x - y for x, y in zip(exps, lead_exps))
            if any(s < 0 for s in shift):
                raise ArithmeticError(f"{g} does not divide {f}")
            c = rem[exps] / lead_c
            quot[shift] = quot.get(shift, 0) + c
            for ge, gc in g.terms.items():
                key = tuple(x + y for x, y in zip(ge, shift))
                value = rem.get(key, 0) - c * gc
                if value:
                    rem[key] = value
                else:
                    rem.pop(key, None)
        return MPoly(quot, f.vars)

    # ---- 求导、代入、求值 ----

    def diff(self, name: str) -> 'MPoly':
        if name not in self.vars:
            return MPoly.zero(self.vars)
        k = self.vars.index(name)
        out: Dict[Exps, Fraction] = {}
        for exps, c in self.terms.items():
            if exps[k]:
                new = list(exps)
                new[k] -= 1
                out[tuple(new)] = c * exps[k]
        return self._new(out)

    def subs(self, mapping: Mapping[str, Any]) -> 'MPoly':
        """把变量替换成多项式或有理数；结果的变量表自动对齐"""
        replace = {k: v for k, v in mapping.items() if k in self.vars}
        keep = tuple(v for v in self.vars if v not in replace)
        variables = keep
        for value in replace.values():
            if isinstance(value, MPoly):
                variables = variables + tuple(v for v in value.vars if v not in variables)
        images = {}
        for name, value in replace.items():
            images[name] = (value.with_vars(variables) if isinstance(value, MPoly)
                            else MPoly.constant(value, variables))
        powers: Dict[Tuple[str, int], MPoly] = {}

        def power(name: str, e: int) -> MPoly:
            key = (name, e)
            if key not in powers:
                powers[key] = images[name] ** e
            return powers[key]

        result = MPoly.zero(variables)
        keep_index = {v: variables.index(v) for v in keep}
        for exps, c in self.terms.items():
            mono = [0] * len(variables)
            term = MPoly.constant(c, variables)
            for v, e in zip(self.vars, exps):
                if not e:
                    continue
                if v in replace:
                    term = term * power(v, e)
                else:
                    mono[keep_index[v]] = e
            term = term * MPoly({tuple(mono): 1}, variables)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Any]) -> Any:
        """全代入求值；值可以是 Fraction 或 RatFun"""
        missing = [v for v in self.used_vars() if v not in point]
        if missing:
            raise ValueError(f"no value given for {missing}")
        total: Any = Fraction(0)
        for exps, c in self.terms.items():
            term: Any = c
            for v, e in zip(self.vars, exps):
                if e:
                    term = term * point[v] ** e
            total = total + term
        return total

    def coefficients_in(self, name: str) -> Dict[int, 'MPoly']:
        """把多项式看作 name 的一元多项式，系数仍保留原变量表（name 次数为 0）"""
        k = self.vars.index(name)
        out: Dict[int, Dict[Exps, Fraction]] = {}
        for exps, c in self.terms.items():
            e = exps[k]
            rest = exps[:k] + (0,) + exps[k + 1:]
            out.setdefault(e, {})[rest] = c
        return {e: MPoly(t, self.vars) for e, t in out.items()}

    # ---- 输出 ----

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts).replace("+-", "-")

    def __repr__(self) -> str:
        return f"MPoly({self}; vars={list(self.vars)})"


def symbols(*names: str) -> Tuple[MPoly, ...]:
    """在同一变量表上生成若干变量"""
    return tuple(MPoly.var(n, names) for n in names)


def resultant(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Sylvester 矩阵 + Bareiss 求结式，结果不再含变量 name"""
    f, g = f._align(g)
    if name not in f.vars:
        raise MathError(f"{name} does not occur in the polynomials")
    m, n = f.degree(name), g.degree(name)
    if m < 1 or n < 1:
        raise MathError(f"resultant needs positive degree in {name} (got {m} and {n})")
    cf = f.coefficients_in(name)
    cg = g.coefficients_in(name)
    zero = MPoly.zero(f.vars)
    size = m + n
    rows: List[List[MPoly]] = []
    top = [cf.get(e, zero) for e in range(m, -1, -1)]
    bottom = [cg.get(e, zero) for e in range(n, -1, -1)]
    for k in range(n):
        rows.append([zero] * k + top + [zero] * (size - k - len(top)))
    for k in range(m):
        rows.append([zero] * k + bottom + [zero] * (size - k - len(bottom)))
    logger.debug("Sylvester matrix of size %d in %s", size, name)
    det = bareiss_det(rows, exact_div=lambda a, b: a.exact_div(b),
                      one=MPoly.constant(1, f.vars))
    return det.with_vars(tuple(v for v in f.vars if v != name))


def monomials_up_to(variables: Sequence[str], degree: int) -> List[Exps]:
    n = len(variables)
    out: List[Exps] = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            exps = [0] * n
            for k in combo:
                exps[k] += 1
            out.append(tuple(exps))
    return out


def find_cofactor(target: MPoly, modulus: MPoly) -> Optional[MPoly]:
    """求 C 使 target = C * modulus

    C 的次数不超过 deg(target) - deg(modulus)，未知系数用有理数线性方程组求解；
    无解时返回 None。
    """
    target, modulus = target._align(modulus)
    variables = target.vars
    if target.is_zero():
        return MPoly.zero(variables)
    k = target.total_degree() - modulus.total_degree()
    if k < 0:
        return None
    unknowns = monomials_up_to(variables, k)
    products = [modulus * MPoly({m: 1}, variables) for m in unknowns]
    rows_index: Dict[Exps, int] = {}
    for p in products + [target]:
        for exps in p.terms:
            rows_index.setdefault(exps, len(rows_index))
    matrix = [[Fraction(0)] * len(unknowns) for _ in rows_index]
    rhs = [Fraction(0)] * len(rows_index)
    for col, p in enumerate(products):
        for exps, c in p.terms.items():
            matrix[rows_index[exps]][col] = c
    for exps, c in target.terms.items():
        rhs[rows_index[exps]] = c
    solution = solve_linear(matrix, rhs)
    if solution is None:
        return None
    return MPoly({m: c for m, c in zip(unknowns, solution)}, variables)


def reduce_mod_square(f: MPoly, name: str, square: MPoly) -> MPoly:
    """在关系 name^2 = square 下化为 name 的一次式（square 不含 name）

    关系对 name 首一，所以余式唯一；余式为零当且仅当 f 属于该理想。
    """
    f, square = f._align(square)
    if square.degree(name) > 0:
        raise MathError(f"{name} must not occur in the reducing polynomial")
    if name not in f.vars:
        return f
    powers: Dict[int, MPoly] = {0: MPoly.constant(1, f.vars)}

    def power(k: int) -> MPoly:
        if k not in powers:
            powers[k] = power(k - 1) * square
        return powers[k]

    result = MPoly.zero(f.vars)
    v = MPoly.var(name, f.vars)
    for e, coeff in sorted(f.coefficients_in(name).items()):
        term = coeff * power(e // 2)
        result = result + (term * v if e % 2 else term)
    return result


def from_terms(pairs: Iterable[Tuple[Any, Sequence[int]]], variables: Sequence[str]) -> MPoly:
    out: Dict[Exps, Fraction] = {}
    for c, exps in pairs:
        key = tuple(exps)
        out[key] = out.get(key, 0) + Fraction(c)
    return MPoly(out, variables)
