"""
初等对称多项式与幂和
在任意支持的系数域（Fraction 或 RatFun）上求值，并提供倒数扩展恒等式的检查
"""
import itertools
import logging
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

from .error_handler import MathError

logger = logging.getLogger(__name__)

ValueTuple = Sequence[Any]


def sigma(i: int, xs: ValueTuple) -> Any:
    """第 i 个初等对称多项式

    取 prod(1 + x_j z) 中 z^i 的系数；i = 0 时为 1，i < 0 或 i > n 时为 0。
    """
    n = len(xs)
    if i < 0 or i > n:
        return Fraction(0)
    if i == 0:
        return Fraction(1)
    # e[k] 是前若干个元素的 sigma_k，只需保留到 i
    e: List[Any] = [Fraction(1)] + [Fraction(0)] * i
    for count, x in enumerate(xs, start=1):
        for k in range(min(count, i), 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e[i]


def sigma_all(xs: ValueTuple) -> List[Any]:
    """sigma_0 .. sigma_n 一次算完"""
    e: List[Any] = [Fraction(1)]
    for x in xs:
        e.append(Fraction(0))
        for k in range(len(e) - 1, 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e


def sigma_bruteforce(i: int, xs: ValueTuple) -> Any:
    """按全部 i 元子集求和（测试用的对照实现）"""
    if i < 0 or i > len(xs):
        return Fraction(0)
    total: Any = Fraction(0)
    for subset in itertools.combinations(xs, i):
        term: Any = Fraction(1)
        for x in subset:
            term = term * x
        total = total + term
    return total


def power_sum(e: int, xs: ValueTuple) -> Any:
    """幂和 s_e = sum x_j^e，e 为非零整数"""
    if e == 0:
        raise MathError("power_sum needs a nonzero exponent")
    total: Any = Fraction(0)
    for x in xs:
        if e < 0 and not x:
            raise MathError(f"zero entry with negative exponent {e}")
        if isinstance(x, int):
            x = Fraction(x)
        total = total + x ** e
    return total


def reciprocal_extend(xs: ValueTuple) -> Tuple[Any, ...]:
    """(x_1..x_n) -> (x_1..x_n, 1/x_1..1/x_n)"""
    inverses = []
    for k, x in enumerate(xs):
        if not x:
            raise MathError(f"entry {k} is zero and has no reciprocal")
        inverses.append(Fraction(1) / x)
    return tuple(xs) + tuple(inverses)


def check_reciprocal_identity(i: int, xs: ValueTuple) -> dict:
    """sigma_i 与 sigma_{2n-i} 在倒数扩展上相等"""
    n = len(xs)
    if not 0 <= i <= n:
        raise MathError(f"index {i} outside 0..{n}")
    ext = reciprocal_extend(xs)
    lhs = sigma(i, ext)
    rhs = sigma(2 * n - i, ext)
    return {'lhs': lhs, 'rhs': rhs, 'equal': lhs == rhs}


def expansion_coeffs(i: int, base: ValueTuple, extras: ValueTuple) -> Any:
    """sum_k sigma_{i-k}(base) * sigma_k(extras)，并核对它等于 sigma_i(base || extras)"""
    if i > len(base) + len(extras):
        raise MathError(f"index {i} exceeds the combined length {len(base) + len(extras)}")
    total: Any = Fraction(0)
    for k in range(0, i + 1):
        total = total + sigma(i - k, base) * sigma(k, extras)
    direct = sigma(i, tuple(base) + tuple(extras))
    if total != direct:
        raise MathError(f"expansion identity failed for i={i}: {total} != {direct}")
    return total


def u_coeffs(i: int, ts: ValueTuple) -> Tuple[Any, ...]:
    """u_k = sigma_{i-k}(T, 1/T)，k = 0..4；空元组上 sigma_0 = 1，其余为 0"""
    e = sigma_all(reciprocal_extend(ts))
    return tuple(e[i - k] if 0 <= i - k < len(e) else Fraction(0) for k in range(5))


def scale_tuple(xs: ValueTuple, lam: Any) -> Tuple[Any, ...]:
    return tuple(lam * x for x in xs)
