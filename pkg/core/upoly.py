"""
一元多项式
稠密表示，系数按升幂存放；系数可以是 Fraction，也可以是 RatFun（Q(q) 上的多项式）
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Any, List, Optional, Sequence, Tuple

from .linalg import bareiss_det

logger = logging.getLogger(__name__)


def _coerce(c: Any) -> Any:
    """整数统一转为 Fraction"""
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    return c


def _is_scalar(x: Any) -> bool:
    return not isinstance(x, UPoly)


class UPoly:
    """一元多项式（不可变）"""

    __slots__ = ('coeffs', 'var')

    def __init__(self, coeffs: Sequence[Any] = (), var: str = 'q'):
        cs = [_coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: Tuple[Any, ...] = tuple(cs)
        self.var = var

    # ---- 构造 ----

    @classmethod
    def constant(cls, c: Any, var: str = 'q') -> 'UPoly':
        return cls([c], var)

    @classmethod
    def monomial(cls, c: Any, k: int, var: str = 'q') -> 'UPoly':
        return cls([Fraction(0)] * k + [c], var)

    @classmethod
    def x(cls, var: str = 'q') -> 'UPoly':
        return cls([0, 1], var)

    def _like(self, coeffs: Sequence[Any]) -> 'UPoly':
        return UPoly(coeffs, self.var)

    # ---- 基本属性 ----

    @property
    def degree(self) -> int:
        """零多项式的次数记为 -1"""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Any:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, k: int) -> Any:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, UPoly):
            return len(self.coeffs) == len(other.coeffs) and all(
                a == b for a, b in zip(self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction)):
            return self == UPoly.constant(other, self.var)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.coeffs, self.var))

    # ---- 环运算 ----

    def __add__(self, other: Any) -> 'UPoly':
        if _is_scalar(other):
            other = UPoly.constant(other, self.var)
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self) -> 'UPoly':
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other: Any) -> 'UPoly':
        return self + (-other)

    def __rsub__(self, other: Any) -> 'UPoly':
        return (-self) + other

    def __mul__(self, other: Any) -> 'UPoly':
        if _is_scalar(other):
            return self._like([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return self._like([])
        out: List[Any] = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return self._like(out)

    def __rmul__(self, other: Any) -> 'UPoly':
        return self._like([other * c for c in self.coeffs])

    def __truediv__(self, scalar: Any) -> 'UPoly':
        """只支持除以系数域中的非零元素"""
        if isinstance(scalar, UPoly):
            raise TypeError("use divmod() or exact_div() for polynomial division")
        if not scalar:
            raise ZeroDivisionError("polynomial division by zero scalar")
        return self._like([c / scalar for c in self.coeffs])

    def __pow__(self, e: int) -> 'UPoly':
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = UPoly.constant(1, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: 'UPoly') -> Tuple['UPoly', 'UPoly']:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return self._like([]), self
        quot: List[Any] = [Fraction(0)] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1]
            if not c:
                continue
            c = c / lead
            quot[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return self._like(quot), self._like(rem[:len(other.coeffs) - 1])

    def __floordiv__(self, other: 'UPoly') -> 'UPoly':
        return divmod(self, other)[0]

    def __mod__(self, other: 'UPoly') -> 'UPoly':
        return divmod(self, other)[1]

    def exact_div(self, other: 'UPoly') -> 'UPoly':
        quot, rem = divmod(self, other)
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quot

    def divides(self, other: 'UPoly') -> bool:
        return not (other % self)

    def monic(self) -> 'UPoly':
        if self.is_zero():
            return self
        return self / self.leading

    # ---- 分析 ----

    def derivative(self) -> 'UPoly':
        return self._like([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Any) -> Any:
        """Horner 求值，x 可以是任意支持环运算的对象"""
        result: Any = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def compose(self, inner: 'UPoly') -> 'UPoly':
        result = UPoly([], inner.var)
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def shift(self, c: Any) -> 'UPoly':
        """返回 f(x + c)"""
        return self.compose(UPoly([c, 1], self.var))

    def content_and_primitive(self) -> Tuple[Fraction, List[int]]:
        """有理系数多项式写成 content * (本原整系数多项式)"""
        if self.is_zero():
            return Fraction(0), []
        den = lcm(*(Fraction(c).denominator for c in self.coeffs))
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [v // g for v in ints]

    def has_integer_coeffs(self) -> bool:
        return all(isinstance(c, Fraction) and c.denominator == 1 for c in self.coeffs)

    # ---- 消元 ----

    def sylvester(self, other: 'UPoly') -> List[List[Any]]:
        m, n = self.degree, other.degree
        size = m + n
        zero = Fraction(0)
        rows: List[List[Any]] = []
        top = list(reversed(self.coeffs))
        bottom = list(reversed(other.coeffs))
        for k in range(n):
            rows.append([zero] * k + top + [zero] * (size - k - len(top)))
        for k in range(m):
            rows.append([zero] * k + bottom + [zero] * (size - k - len(bottom)))
        return rows

    def resultant(self, other: 'UPoly') -> Any:
        if self.degree < 1 or other.degree < 1:
            raise ValueError("resultant needs two polynomials of positive degree")
        return bareiss_det(self.sylvester(other))

    def discriminant(self) -> Any:
        n = self.degree
        if n < 1:
            raise ValueError("discriminant of a constant")
        if n == 1:
            return Fraction(1)
        res = self.resultant(self.derivative())
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * res / self.leading

    # ---- 输出 ----

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: List[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            parts.append(_format_term(c, self.var, k))
        text = "+".join(parts)
        return text.replace("+-", "-")


def _format_term(c: Any, var: str, k: int) -> str:
    if k == 0:
        mono = ""
    elif k == 1:
        mono = var
    else:
        mono = f"{var}^{k}"
    if isinstance(c, Fraction):
        if not mono:
            return str(c)
        if c == 1:
            return mono
        if c == -1:
            return "-" + mono
        return f"{c}*{mono}"
    text = f"({c})"
    return f"{text}*{mono}" if mono else text


def _prem(a: List[int], b: List[int]) -> List[int]:
    """整系数伪余式 lc(b)^(deg a - deg b + 1) * a mod b"""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        lr = r[-1]
        r = [lb * c for c in r]
        for i, bc in enumerate(b):
            r[i + k] -= lr * bc
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    return [lb ** e * c for c in r]


def _primitive(a: List[int]) -> List[int]:
    g = gcd(*a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _subresultant_gcd(a: List[int], b: List[int]) -> List[int]:
    """子结式 PRS，返回本原 gcd（整系数，首项为正）"""
    if len(a) < len(b):
        a, b = b, a
    a, b = _primitive(a), _primitive(b)
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            return _primitive(b)
        if len(r) == 1:
            return [1]
        a = b
        divisor = g * h ** delta
        b = [c // divisor for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)


def _euclid_gcd(f: UPoly, g: UPoly) -> UPoly:
    while g:
        f, g = g, f % g
    return f.monic()


def upoly_gcd(f: UPoly, g: UPoly) -> UPoly:
    """首一最大公因式；gcd(f, 0) = monic(f)，gcd(0, 0) = 0"""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.degree == 0 or g.degree == 0:
        return UPoly.constant(1, f.var)
    rational = all(isinstance(c, Fraction) for c in f.coeffs + g.coeffs)
    if not rational:
        return _euclid_gcd(f, g)
    _, fa = f.content_and_primitive()
    _, ga = g.content_and_primitive()
    return UPoly(_subresultant_gcd(fa, ga), f.var).monic()


def upoly_lcm(f: UPoly, g: UPoly) -> UPoly:
    if f.is_zero() or g.is_zero():
        return UPoly([], f.var)
    return (f * g).exact_div(upoly_gcd(f, g)).monic()
