"""
椭圆曲线
短 Weierstrass 模型上的群运算（系数域为 Q 或 Q(q)）、四次模型 S^2 = H(P)、
到 Weierstrass 模型的双有理变换、Euler 切抛物线法、挠点判定与特殊化
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .error_handler import (BranchPointError, DegenerateCurveError, ExceptionalPointError,
                            MathError, PointNotOnCurveError, SingularCurveError,
                            SpecializationError, UsageError)
from .models import CertificateKind, TorsionVerdict
from .mpoly import MPoly, reduce_mod_square, symbols
from .ratfun import RatFun
from .upoly import UPoly, upoly_lcm

logger = logging.getLogger(__name__)

Point2 = Tuple[Any, Any]


def _coerce(x: Any) -> Any:
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def _is_symbolic(*values: Any) -> bool:
    return any(isinstance(v, RatFun) and not v.is_constant() for v in values)


def _height(x: Any) -> int:
    return x.height if isinstance(x, RatFun) else 0


# ---- 点与曲线 ----

@dataclass(frozen=True)
class CurvePoint:
    """仿射点 (X, Y)；X 为 None 表示无穷远点"""
    X: Any = None
    Y: Any = None

    def __post_init__(self):
        object.__setattr__(self, 'X', _coerce(self.X))
        object.__setattr__(self, 'Y', _coerce(self.Y))

    @property
    def is_infinity(self) -> bool:
        return self.X is None

    def __neg__(self) -> 'CurvePoint':
        if self.is_infinity:
            return self
        return CurvePoint(self.X, -self.Y)

    def __str__(self) -> str:
        return "infinity" if self.is_infinity else f"({self.X}, {self.Y})"


INFINITY = CurvePoint()


@dataclass(frozen=True)
class WeierstrassCurve:
    """Y^2 = X^3 + A X + B"""
    A: Any
    B: Any

    def __post_init__(self):
        object.__setattr__(self, 'A', _coerce(self.A))
        object.__setattr__(self, 'B', _coerce(self.B))
        if not self.discriminant():
            raise SingularCurveError(f"singular curve: 4A^3 + 27B^2 = 0 for A = {self.A}, B = {self.B}")

    def discriminant(self) -> Any:
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    def j_invariant(self) -> Any:
        four_a3 = 4 * self.A ** 3
        return Fraction(1728) * four_a3 / (four_a3 + 27 * self.B ** 2)

    def is_symbolic(self) -> bool:
        return _is_symbolic(self.A, self.B)

    def contains(self, point: CurvePoint) -> bool:
        if point.is_infinity:
            return True
        X, Y = point.X, point.Y
        return not (Y * Y - (X * X * X + self.A * X + self.B))

    def require(self, point: CurvePoint) -> CurvePoint:
        if not self.contains(point):
            raise PointNotOnCurveError(f"point {point} is not on {self}")
        return point

    def __str__(self) -> str:
        return f"Y^2 = X^3 + ({self.A})*X + ({self.B})"


def j_invariant(curve: WeierstrassCurve) -> Any:
    return curve.j_invariant()


# ---- 群运算 ----

def _add(curve: WeierstrassCurve, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    if not (p1.X - p2.X):
        if not (p1.Y + p2.Y):
            return INFINITY
        lam = (3 * p1.X * p1.X + curve.A) / (2 * p1.Y)
    else:
        lam = (p2.Y - p1.Y) / (p2.X - p1.X)
    x3 = lam * lam - p1.X - p2.X
    y3 = lam * (p1.X - x3) - p1.Y
    return CurvePoint(x3, y3)


def _checked(curve: WeierstrassCurve, point: CurvePoint) -> CurvePoint:
    if not curve.contains(point):
        raise MathError(f"group law produced a point off the curve: {point}")
    return point


def ec_add(curve: WeierstrassCurve, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
    """弦切法加法"""
    curve.require(p1)
    curve.require(p2)
    return _checked(curve, _add(curve, p1, p2))


def ec_mul(curve: WeierstrassCurve, k: int, point: CurvePoint) -> CurvePoint:
    """倍加法求 [k]P；[0]P 为无穷远点，[-k]P = -[k]P"""
    curve.require(point)
    if k < 0:
        k, point = -k, -point
    result = INFINITY
    addend = point
    while k:
        if k & 1:
            result = _add(curve, result, addend)
        addend = _add(curve, addend, addend)
        k >>= 1
    return _checked(curve, result)


def ec_multiples(curve: WeierstrassCurve, point: CurvePoint, count: int) -> List[CurvePoint]:
    """[1]P, [2]P, ..., [count]P，逐个相加"""
    curve.require(point)
    out: List[CurvePoint] = []
    current = INFINITY
    for k in range(1, count + 1):
        current = _checked(curve, _add(curve, current, point))
        out.append(current)
        if not current.is_infinity:
            logger.debug("Multiple %d has X of height %d", k, _height(current.X))
    return out


# ---- 长 Weierstrass 模型 ----

@dataclass(frozen=True)
class LongWeierstrass:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6"""
    a1: Any
    a2: Any
    a3: Any
    a4: Any
    a6: Any

    @property
    def b2(self) -> Any:
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self) -> Any:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Any:
        return self.a3 ** 2 + 4 * self.a6

    @property
    def c4(self) -> Any:
        return self.b2 ** 2 - 24 * self.b4

    @property
    def c6(self) -> Any:
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    def contains(self, x: Any, y: Any) -> bool:
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return not (lhs - rhs)

    def short(self) -> WeierstrassCurve:
        return WeierstrassCurve(-self.c4 / 48, -self.c6 / 864)

    def to_short(self, x: Any, y: Any) -> CurvePoint:
        return CurvePoint(x + self.b2 / 12, y + (self.a1 * x + self.a3) / 2)

    def from_short(self, point: CurvePoint) -> Point2:
        x = point.X - self.b2 / 12
        return x, point.Y - (self.a1 * x + self.a3) / 2


# ---- 四次模型 ----

@dataclass(frozen=True)
class QuarticModel:
    """S^2 = H(P)，H 的次数为 3 或 4，带一个有理基点"""
    H: UPoly
    base: Point2

    def __post_init__(self):
        object.__setattr__(self, 'base', tuple(_coerce(c) for c in self.base))
        if self.H.degree < 3:
            raise DegenerateCurveError(f"H has degree {self.H.degree}; the curve has genus 0")
        if self.H.degree > 4:
            raise UsageError(f"H has degree {self.H.degree}; only quartic models are supported")
        if not self.H.discriminant():
            raise SingularCurveError(f"singular quartic: disc(H) = 0 for H = {self.H}")
        if not self.contains(self.base):
            raise PointNotOnCurveError(f"base point {self.base} is not on S^2 = {self.H}")

    @classmethod
    def from_coeffs(cls, coeffs_high_first: Sequence[Any], base: Point2) -> 'QuarticModel':
        """系数按 h4, h3, h2, h1, h0 的顺序给出"""
        return cls(UPoly(list(reversed(list(coeffs_high_first))), 'P'), base)

    @property
    def degree(self) -> int:
        return self.H.degree

    def coeff(self, k: int) -> Any:
        return self.H.coeff(k)

    def contains(self, pt: Point2) -> bool:
        p, s = pt
        return not (s * s - self.H(p))

    def require(self, pt: Point2) -> Point2:
        if not self.contains(pt):
            raise PointNotOnCurveError(f"point {pt} is not on S^2 = {self.H}")
        return pt

    def with_base(self, base: Point2) -> 'QuarticModel':
        return QuarticModel(self.H, base)

    def is_symbolic(self) -> bool:
        return _is_symbolic(*self.H.coeffs)


def iota(pt: Point2) -> Point2:
    """(P, S) -> (P, -S)"""
    return pt[0], -pt[1]


# ---- 双有理变换 ----

class BirationalPair:
    """四次模型与短 Weierstrass 模型之间的双有理映射

    kind = "square": 基点 S != 0，平移到 P = 0 后常数项为平方 e^2，使用经典的
    平方常数项变换，经过一个长 Weierstrass 模型；
    kind = "branch": 三次 H 且基点是分支点，用 x = d/u, y = dS/u^2。
    """

    def __init__(self, quartic: QuarticModel, curve: WeierstrassCurve, kind: str,
                 shifted: UPoly, e: Any, long_model: LongWeierstrass):
        self.quartic = quartic
        self.curve = curve
        self.kind = kind
        self.p0 = quartic.base[0]
        self.e = e
        self.b = shifted.coeff(3)
        self.c = shifted.coeff(2)
        self.d = shifted.coeff(1)
        self.long_model = long_model

    @property
    def exceptional(self) -> Dict[str, str]:
        """例外集合：拉回失败的点以及它们的含义"""
        if self.kind == "square":
            return {
                "y=0": "points with y = 0 on the intermediate model come from the points "
                       "of C above P = infinity",
            }
        return {"x=0": "the point (0, 0) comes from the point of C above P = infinity"}

    def forward(self, pt: Point2) -> CurvePoint:
        self.quartic.require(pt)
        u = pt[0] - self.p0
        v = pt[1]
        if self.kind == "square":
            return self._forward_square(u, v)
        if not u:
            return INFINITY
        x = self.d / u
        y = self.d * v / (u * u)
        return self._short(x, y)

    def _forward_square(self, u: Any, v: Any) -> CurvePoint:
        e, c, d = self.e, self.c, self.d
        lm = self.long_model
        if not u:
            if not (v - e):
                return INFINITY
            return self._short(-lm.a2, lm.a1 * lm.a2 - lm.a3)
        x = (2 * e * (v + e) + d * u) / (u * u)
        y = (8 * e ** 3 * (v + e) + 4 * e * e * (d * u + c * u * u) - d * d * u * u) / (2 * e * u ** 3)
        return self._short(x, y)

    def _short(self, x: Any, y: Any) -> CurvePoint:
        if not self.long_model.contains(x, y):
            raise MathError(f"transformed point ({x}, {y}) is off the intermediate model")
        return self.curve.require(self.long_model.to_short(x, y))

    def backward(self, point: CurvePoint) -> Point2:
        if point.is_infinity:
            return self.quartic.base
        self.curve.require(point)
        x, y = self.long_model.from_short(point)
        if self.kind == "square":
            lm = self.long_model
            e, c, d = self.e, self.c, self.d
            if not y:
                if not (x + lm.a2):
                    return self.p0, -e
                raise ExceptionalPointError(f"point {point} pulls back to infinity on C",
                                            member="y=0")
            u = (2 * e * (x + c) - d * d / (2 * e)) / y
            v = -e + u * (u * x - d) / (2 * e)
        else:
            if not x:
                raise ExceptionalPointError(f"point {point} pulls back to infinity on C",
                                            member="x=0")
            u = self.d / x
            v = y * self.d / (x * x)
        pt = (u + self.p0, v)
        if not self.quartic.contains(pt):
            raise MathError(f"pull-back {pt} is off the quartic")
        return pt

    def describe(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'base': list(self.quartic.base),
            'exceptional': dict(self.exceptional)
        }


def quartic_to_weierstrass(quartic: QuarticModel) -> Tuple[WeierstrassCurve, BirationalPair]:
    """把基点送到无穷远，得到短 Weierstrass 模型和双有理映射"""
    p0, s0 = quartic.base
    shifted = quartic.H.shift(p0)
    if s0:
        e = s0
        a, b, c, d = (shifted.coeff(k) for k in (4, 3, 2, 1))
        a2 = c - d * d / (4 * e * e)
        a4 = -4 * e * e * a
        long_model = LongWeierstrass(d / e, a2, 2 * e * b, a4, a2 * a4)
        kind = "square"
    elif quartic.degree == 3:
        e = Fraction(0)
        b, c, d = (shifted.coeff(k) for k in (3, 2, 1))
        long_model = LongWeierstrass(Fraction(0), c, Fraction(0), b * d, Fraction(0))
        kind = "branch"
    else:
        raise BranchPointError(f"base point {quartic.base} is a branch point")
    curve = long_model.short()
    logger.debug("Weierstrass model via %s transformation: A of height %d, B of height %d",
                 kind, _height(curve.A), _height(curve.B))
    return curve, BirationalPair(quartic, curve, kind, shifted, e, long_model)


# ---- 四次模型上的点运算 ----

def euler_double(quartic: QuarticModel, pt: Point2) -> Point2:
    """Euler 切抛物线法

    拟合 S = alpha P^2 + beta P + gamma 使其在 p 处与曲线三阶相切，
    (alpha P^2 + beta P + gamma)^2 - H(P) 的第四个根即新点的 P 坐标；
    三次 H 时用切线，取第三个根。
    """
    quartic.require(pt)
    p, s = pt
    if not s:
        raise BranchPointError(f"point {pt} has S = 0; the tangent is vertical")
    H = quartic.H
    d1 = H.derivative()
    s1 = d1(p) / (2 * s)
    if quartic.degree == 4:
        s2 = (d1.derivative()(p) - 2 * s1 * s1) / (2 * s)
        alpha = s2 / 2
        beta = s1 - 2 * alpha * p
        gamma = s - alpha * p * p - beta * p
        denom = alpha * alpha - H.coeff(4)
        if not denom:
            raise MathError("point at infinity: the fourth intersection lies above P = infinity")
        p_new = -(2 * alpha * beta - H.coeff(3)) / denom - 3 * p
        order = 3
    else:
        alpha = Fraction(0)
        beta = s1
        gamma = s - beta * p
        p_new = (beta * beta - H.coeff(2)) / H.coeff(3) - 2 * p
        order = 2
    s_new = alpha * p_new * p_new + beta * p_new + gamma

    contact = UPoly([gamma, beta, alpha], H.var) ** 2 - H
    poly = contact
    for _ in range(order):
        if poly(p):
            raise MathError(f"tangent curve does not meet C to order {order} at P = {p}")
        poly = poly.derivative()
    if contact(p_new):
        raise MathError(f"P = {p_new} is not an intersection of the tangent curve with C")
    return quartic.require((p_new, s_new))


def quartic_group_op(quartic: QuarticModel, pt1: Point2, pt2: Optional[Point2] = None,
                     k: int = 1, base: Optional[Point2] = None) -> Point2:
    """在群 (C, base) 中计算 k*pt1，给出 pt2 时再加上 pt2"""
    model = quartic.with_base(base) if base is not None else quartic
    curve, phi = quartic_to_weierstrass(model)
    result = ec_mul(curve, k, phi.forward(pt1))
    if pt2 is not None:
        result = ec_add(curve, result, phi.forward(pt2))
    return phi.backward(result)


# ---- 挠点判定 ----

def _integral_poly(x: RatFun) -> bool:
    return x.is_polynomial() and x.num.has_integer_coeffs()


def integral_scaling(curve: WeierstrassCurve) -> Any:
    """找 u 使 u^4 A, u^6 B 都是整系数多项式"""
    A, B = RatFun.lift(curve.A), RatFun.lift(curve.B)
    _, prim = upoly_lcm(A.den, B.den).content_and_primitive()
    dp = RatFun(UPoly(prim, 'q'))
    a1 = A * dp ** 4
    b1 = B * dp ** 6
    if not (a1.is_polynomial() and b1.is_polynomial()):
        raise MathError("cannot scale the model to integral form")
    m = lcm(1, *(c.denominator for c in a1.num.coeffs + b1.num.coeffs))
    return dp * m


def torsion_certificate(curve: WeierstrassCurve, point: CurvePoint) -> TorsionVerdict:
    """函数域上的 Nagell-Lutz 判别

    先把模型缩放为整系数模型 (u^4 A, u^6 B)，点相应变为 (u^2 X, u^3 Y)。
    挠点的坐标必须是整系数多项式，且 Y = 0 或 Y^2 整除判别式。
    """
    curve.require(point)
    if point.is_infinity:
        return TorsionVerdict(CertificateKind.TORSION_CANDIDATE, reason="point at infinity")
    u = integral_scaling(curve)
    A = u ** 4 * RatFun.lift(curve.A)
    B = u ** 6 * RatFun.lift(curve.B)
    X = u ** 2 * RatFun.lift(point.X)
    Y = u ** 3 * RatFun.lift(point.Y)
    if not (_integral_poly(A) and _integral_poly(B)):
        raise MathError("scaled model is not integral")
    if not (_integral_poly(X) and _integral_poly(Y)):
        return TorsionVerdict(CertificateKind.INFINITE_ORDER, reason="non-polynomial coordinate")
    if not Y:
        return TorsionVerdict(CertificateKind.TWO_TORSION)
    delta = (A.num ** 3 * 4 + B.num ** 2 * 27) * (-16)
    quot, rem = divmod(delta, Y.num ** 2)
    if rem or not quot.has_integer_coeffs():
        return TorsionVerdict(CertificateKind.INFINITE_ORDER, reason="Y² does not divide Δ")
    return TorsionVerdict(CertificateKind.TORSION_CANDIDATE)


def mazur_check(curve: WeierstrassCurve, point: CurvePoint, bound: int = 12) -> TorsionVerdict:
    """有理数域上挠点的阶不超过 12：逐个计算 [k]P，k = 2..bound"""
    if curve.is_symbolic():
        raise UsageError("mazur_check needs a curve over Q; specialize it first")
    curve.require(point)
    if point.is_infinity:
        raise UsageError("mazur_check needs an affine point")
    current = point
    for k in range(2, bound + 1):
        current = _add(curve, current, point)
        if current.is_infinity:
            return TorsionVerdict(CertificateKind.FINITE_ORDER, order=k)
    return TorsionVerdict(CertificateKind.INFINITE_ORDER,
                          reason=f"no multiple up to {bound} is the identity")


# ---- 特殊化 ----

def specialize(obj: Any, q0: Any) -> Any:
    """q := q0；分母为零或判别式为零时报错"""
    q0 = Fraction(q0)
    if isinstance(obj, RatFun):
        return obj.evaluate(q0)
    if isinstance(obj, (int, Fraction)):
        return Fraction(obj)
    if isinstance(obj, CurvePoint):
        if obj.is_infinity:
            return obj
        return CurvePoint(specialize(obj.X, q0), specialize(obj.Y, q0))
    if isinstance(obj, WeierstrassCurve):
        A, B = specialize(obj.A, q0), specialize(obj.B, q0)
        if not (4 * A ** 3 + 27 * B ** 2):
            raise SpecializationError(f"singular specialization at q = {q0}")
        return WeierstrassCurve(A, B)
    if isinstance(obj, UPoly):
        return UPoly([specialize(c, q0) for c in obj.coeffs], obj.var)
    if isinstance(obj, QuarticModel):
        H = specialize(obj.H, q0)
        if H.degree < 3 or not H.discriminant():
            raise SpecializationError(f"singular specialization at q = {q0}")
        return QuarticModel(H, specialize(obj.base, q0))
    if isinstance(obj, (tuple, list)):
        return type(obj)(specialize(x, q0) for x in obj)
    raise TypeError(f"cannot specialize {type(obj).__name__}")


# ---- 双有理变换的符号检查 ----

def transform_identity_residuals() -> Dict[str, MPoly]:
    """双有理变换在一般系数上的恒等式，残差全为零时映射正确

    square 变换以 u, v 与 H(u) = a u^4 + b u^3 + c u^2 + d u + e^2 为一般系数；
    曲线方程的残差先乘以 4 e^2 u^6 去分母，再对 v^2 = H(u) 约化。
    """
    u, v, a, b, c, d, e = symbols('u', 'v', 'a', 'b', 'c', 'd', 'e')
    H = a * u ** 4 + b * u ** 3 + c * u ** 2 + d * u + e ** 2
    x_num = 2 * e * (v + e) + d * u
    y_num = 8 * e ** 3 * (v + e) + 4 * e ** 2 * (d * u + c * u ** 2) - d ** 2 * u ** 2
    curve_eq = (y_num ** 2 + 2 * d * u * x_num * y_num + 4 * e ** 2 * b * u ** 3 * y_num
                - 4 * e ** 2 * x_num ** 3 - (4 * e ** 2 * c - d ** 2) * u ** 2 * x_num ** 2
                + 16 * e ** 4 * a * u ** 4 * x_num
                + 4 * e ** 2 * a * (4 * e ** 2 * c - d ** 2) * u ** 6)
    residuals = {
        'square_curve': reduce_mod_square(curve_eq, 'v', H),
        'square_inverse_u': y_num - 4 * e ** 2 * (x_num + c * u ** 2) + d ** 2 * u ** 2,
        'square_inverse_v': 2 * e * (v + e) - x_num + d * u,
    }

    # 分支点情形：u^4 (y^2 - x^3 - c x^2 - b d x)，x = d/u, y = dS/u^2
    u, s, b, c, d = symbols('u', 'S', 'b', 'c', 'd')
    branch_eq = d ** 2 * s ** 2 - d ** 3 * u - c * d ** 2 * u ** 2 - b * d ** 2 * u ** 3
    residuals['branch_curve'] = reduce_mod_square(branch_eq, 'S', b * u ** 3 + c * u ** 2 + d * u)

    x, y, a1, a2, a3, a4, a6 = symbols('x', 'y', 'a1', 'a2', 'a3', 'a4', 'a6')
    b2 = a1 ** 2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 ** 2 + 4 * a6
    c4 = b2 ** 2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    X = x + b2 / 12
    Y = y + (a1 * x + a3) / 2
    long_eq = y ** 2 + a1 * x * y + a3 * y - x ** 3 - a2 * x ** 2 - a4 * x - a6
    short_eq = Y ** 2 - X ** 3 + c4 / 48 * X + c6 / 864
    residuals['long_to_short'] = short_eq - long_eq
    return residuals
