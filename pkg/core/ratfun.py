"""
Q(q) 中的有理函数
规范形式：分子分母互素，分母首一；规范形式相同当且仅当两个元素相等
"""
import logging
from fractions import Fraction
from typing import Any, Union

from .error_handler import SpecializationError
from .upoly import UPoly, upoly_gcd

logger = logging.getLogger(__name__)

VAR = 'q'


def _as_upoly(x: Any) -> UPoly:
    if isinstance(x, UPoly):
        return UPoly(x.coeffs, VAR)
    return UPoly.constant(x, VAR)


class RatFun:
    """有理函数 num(q) / den(q)（不可变）"""

    __slots__ = ('num', 'den')

    def __init__(self, num: Any, den: Any = None, _reduced: bool = False):
        num = _as_upoly(num)
        den = UPoly.constant(1, VAR) if den is None else _as_upoly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = UPoly.constant(1, VAR)
        elif not _reduced:
            g = upoly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.leading
            if lead != 1:
                num = num / lead
                den = den / lead
        self.num = num
        self.den = den

    @classmethod
    def q(cls) -> 'RatFun':
        """生成元 q"""
        return cls(UPoly.x(VAR), _reduced=True)

    @classmethod
    def lift(cls, x: Any) -> 'RatFun':
        if isinstance(x, RatFun):
            return x
        return cls(x, _reduced=True)

    # ---- 属性 ----

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.coeff(0)

    @property
    def height(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.num.coeff(0) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.num.coeff(0))
        return hash((self.num.coeffs, self.den.coeffs))

    # ---- 域运算 ----

    def _coerce(self, other: Any) -> Union['RatFun', None]:
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFun(other, _reduced=True)
        return None

    def __add__(self, other: Any) -> 'RatFun':
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.den == self.den:
            return RatFun(self.num + o.num, self.den)
        if o.is_constant():
            # 加常数不会引入新的公因子
            return RatFun(self.num + self.den * o.num.coeff(0), self.den, _reduced=True)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> 'RatFun':
        return RatFun(-self.num, self.den, _reduced=True)

    def __sub__(self, other: Any) -> 'RatFun':
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> 'RatFun':
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> 'RatFun':
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_constant():
            c = o.num.coeff(0)
            return RatFun(self.num * c, self.den, _reduced=True)
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> 'RatFun':
        if not self:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other: Any) -> 'RatFun':
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> 'RatFun':
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> 'RatFun':
        if e < 0:
            return self.inverse() ** (-e)
        # 互素的分子分母各自乘方后仍互素
        return RatFun(self.num ** e, self.den ** e, _reduced=True)

    # ---- 特殊化 ----

    def __call__(self, q0: Any) -> Fraction:
        return self.evaluate(q0)

    def evaluate(self, q0: Any) -> Fraction:
        """代入 q = q0；分母在 q0 处为零时报错"""
        d = self.den(Fraction(q0))
        if not d:
            raise SpecializationError(f"denominator {self.den} vanishes at q = {q0}")
        return self.num(Fraction(q0)) / d

    # ---- 输出 ----

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if _term_count(self.num) > 1 or "/" in num or num.startswith("-"):
            num = f"({num})"
        if _term_count(self.den) > 1 or "/" in den or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFun({self})"


def _term_count(p: UPoly) -> int:
    return sum(1 for c in p.coeffs if c)
