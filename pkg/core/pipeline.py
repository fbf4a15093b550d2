"""
对称方程组的构造流水线
倒数扩展 -> 关于 Q 的二次方程 -> 四次曲线 S^2 = H(P) -> Q(q) 或 Q 上的椭圆曲线 -> 点链
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .codec import format_value, parse_qexpr
from .curves import (INFINITY, BirationalPair, CurvePoint, QuarticModel, WeierstrassCurve,
                     ec_multiples, iota, mazur_check, quartic_to_weierstrass, specialize,
                     torsion_certificate)
from .error_handler import (CertificationError, ChainError, DegenerateCurveError,
                            ExceptionalPointError, MathError, SingularCurveError,
                            SpecializationError, UsageError, VerificationFailure)
from .families import verify_solution
from .models import CertificateKind, SolutionTuple, SystemSpec, TorsionVerdict
from .ratfun import RatFun
from .symfun import reciprocal_extend, sigma, u_coeffs
from .upoly import UPoly

logger = logging.getLogger(__name__)

Point2 = Tuple[Any, Any]


@dataclass
class PipelineState:
    """流水线的全部中间量"""
    i: int                         # 对称多项式下标
    n: int                         # 半长，元组长 2n
    t: Tuple[Fraction, ...]        # 固定参数 t_1..t_{n-2}
    p: Fraction                    # 已知解的 P
    q: Any                         # 已知解的 Q（Fraction 或生成元 q）
    symbolic: bool                 # q 是否为符号
    u: Tuple[Any, ...]             # u_0..u_4
    a0: UPoly                      # F_P(Q) 的系数
    a1: UPoly
    a2: UPoly
    target: Any                    # a = sigma_i(T, p, q, 1/T, 1/p, 1/q)
    degenerate: bool = False       # a0 恒为零
    quartic: Optional[QuarticModel] = None
    curve: Optional[WeierstrassCurve] = None
    phi: Optional[BirationalPair] = None
    U: Optional[Point2] = None     # 已知解 (p, q) 对应的点
    V: Optional[Point2] = None     # 倒数解 (1/p, 1/q) 对应的点
    start: Optional[Point2] = None  # 生成点链的点
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def H(self) -> UPoly:
        return self.a1 * self.a1 - self.a0 * self.a0 * 4

    @property
    def base(self) -> Optional[Point2]:
        return self.quartic.base if self.quartic else None

    @property
    def spec(self) -> SystemSpec:
        return SystemSpec.symmetric(self.n, self.i, self.target)

    def params(self) -> Dict[str, Any]:
        return {
            'i': self.i,
            'n': self.n,
            't': [format_value(x) for x in self.t],
            'p': format_value(self.p),
            'q': "symbolic" if self.symbolic else format_value(self.q)
        }

    def describe(self) -> Dict[str, Any]:
        data: Dict[str, Any] = dict(self.params())
        data['target'] = format_value(self.target)
        data['degenerate'] = self.degenerate
        if not self.degenerate:
            data['H'] = str(self.H)
            data['base'] = [format_value(c) for c in self.base]
            data['U'] = [format_value(c) for c in self.U]
            data['start'] = [format_value(c) for c in self.start]
            data['A'] = format_value(self.curve.A)
            data['B'] = format_value(self.curve.B)
        return data


def build_pipeline(i: int, n: int, t: Sequence[Any], p: Any,
                   symbolic_q: bool = False, q0: Any = None) -> PipelineState:
    """从已知解 (P, Q) = (p, q) 出发构造四次曲线和 Weierstrass 模型"""
    t = tuple(Fraction(x) for x in t)
    p = Fraction(p)
    if n < 2 or not 1 <= i <= n:
        raise UsageError(f"need n >= 2 and 1 <= i <= n (got i={i}, n={n})")
    if len(t) != n - 2:
        raise UsageError(f"expected {n - 2} values of t, got {len(t)}")
    if any(not x for x in t):
        raise UsageError("all t values must be nonzero")
    if p in (0, 1, -1):
        raise UsageError("p must not be 0, 1 or -1")
    if symbolic_q:
        q: Any = RatFun.q()
    else:
        if q0 is None:
            raise UsageError("a rational q is required unless q is symbolic")
        q = Fraction(q0)
        if not q:
            raise UsageError("q must be nonzero")

    u = u_coeffs(i, t)
    u1u3 = u[1] + u[3]
    pq = p * q
    a0 = UPoly([u[2], u1u3, u[2]], 'P') * pq
    k = (p * p * q * q + p * p + q * q + 1) * u[2] + u1u3 * (p + q) * (p * q + 1)
    a1 = UPoly([1, 0, 1], 'P') * (pq * u1u3) - UPoly.x('P') * k
    target = sigma(i, reciprocal_extend(t + (p, q)))
    if isinstance(target, RatFun) and target.is_constant():
        target = target.constant_value()

    state = PipelineState(i, n, t, p, q, symbolic_q, u, a0, a1, a0, target)
    if a0.is_zero():
        state.degenerate = True
        logger.warning("Quadratic in Q degenerates (a0 = 0); every (P, Q) solves it")
        return state

    H = state.H
    U = (p, 2 * a0(p) * q + a1(p))
    inv_p = 1 / p
    V = (inv_p, 2 * a0(inv_p) / q + a1(inv_p))
    # 以 V 为基点时 U 是 2 阶点，点链从 iota(U) 出发
    start = U
    if not u[2]:
        base = (Fraction(0), pq * u1u3)
    elif V[1]:
        base, start = V, iota(U)
    else:
        base = iota(U)
    try:
        quartic = QuarticModel(H, base)
    except (SingularCurveError, DegenerateCurveError) as e:
        raise DegenerateCurveError(f"degenerate curve, choose different parameters ({e})")
    curve, phi = quartic_to_weierstrass(quartic)
    state.quartic, state.curve, state.phi = quartic, curve, phi
    state.U, state.V, state.start = U, V, start
    logger.info("Built pipeline i=%d n=%d p=%s q=%s: H of degree %d, base %s",
                i, n, p, "symbolic" if symbolic_q else q, H.degree,
                tuple(format_value(c) for c in base))
    return state


def quadratic_value(state: PipelineState, P: Any, Q: Any) -> Any:
    """F_P(Q) = a0(P) Q^2 + a1(P) Q + a2(P)"""
    return state.a0(P) * Q * Q + state.a1(P) * Q + state.a2(P)


def solve_Q(state: PipelineState, P: Any, S: Any) -> Any:
    """Q = (S - a1(P)) / (2 a0(P))；S 取两个符号分别得到两个根"""
    if state.degenerate:
        raise MathError("the quadratic in Q is degenerate for these parameters")
    a0 = state.a0(P)
    if not a0:
        raise MathError(f"a0(P) vanishes at P = {P}")
    Q = (S - state.a1(P)) / (2 * a0)
    if quadratic_value(state, P, Q):
        raise MathError(f"(P, S) = ({P}, {S}) is not on the curve of the pipeline")
    return Q


# ---- 点链 ----

def working_point(state: PipelineState) -> CurvePoint:
    return state.phi.forward(state.start)


def certify_infinite_order(state: PipelineState, probes: Sequence[Any] = (),
                           bound: int = 12) -> TorsionVerdict:
    """证明点链起点的像是无限阶点

    Q 上用 Mazur 界；Q(q) 上先用 Nagell-Lutz 判别，判别法无法排除时在探测值处特殊化，
    只要某个好的特殊化是无限阶，原来的点就是无限阶。
    """
    point = working_point(state)
    if point.is_infinity:
        raise CertificationError("cannot certify infinite order; supply different parameters "
                                 "(the known solution is the base point)")
    if not state.symbolic:
        verdict = mazur_check(state.curve, point, bound)
    else:
        verdict = torsion_certificate(state.curve, point)
        if verdict.kind == CertificateKind.TORSION_CANDIDATE:
            verdict = _certify_by_probes(state.curve, point, probes, bound) or verdict
    if not verdict.infinite:
        raise CertificationError("cannot certify infinite order; supply different parameters "
                                 f"({verdict.kind.value})")
    logger.info("Working point certified of infinite order: %s", verdict.reason)
    return verdict


def _certify_by_probes(curve: WeierstrassCurve, point: CurvePoint, probes: Sequence[Any],
                       bound: int) -> Optional[TorsionVerdict]:
    for q0 in probes:
        try:
            verdict = mazur_check(specialize(curve, q0), specialize(point, q0), bound)
        except (SpecializationError, SingularCurveError, ZeroDivisionError):
            logger.debug("Probe q = %s is a bad specialization", q0)
            continue
        if verdict.infinite:
            return TorsionVerdict(CertificateKind.INFINITE_ORDER,
                                  reason=f"infinite order at q = {format_value(Fraction(q0))}")
    return None


def chain_multiples(state: PipelineState, count: int) -> List[Tuple[int, CurvePoint]]:
    """j = 2..count+1 的 [j]W（顺序计算，后一个依赖前一个）"""
    if count <= 0:
        return []
    multiples = ec_multiples(state.curve, working_point(state), count + 1)
    return [(j, multiples[j - 1]) for j in range(2, count + 2)]


def assemble_chain_tuple(state: PipelineState, P: Any, Q: Any, j: int) -> SolutionTuple:
    """(t, P, Q, 1/t, 1/P, 1/Q) 并自检"""
    values = reciprocal_extend(state.t + (P, Q))
    params = state.params()
    params['j'] = j
    sol = SolutionTuple(values, state.spec, provenance={'method': 'chain', 'params': params})
    sol.certify()
    report = verify_solution(sol)
    if not report.passed:
        names = ", ".join(r.name for r in report.failures())
        raise VerificationFailure(f"chain tuple j={j} fails {names}")
    return sol


def pull_back(state: PipelineState, j: int, point: CurvePoint) -> Optional[SolutionTuple]:
    """把 [j]W 拉回到 C 上并解出 Q；落入例外集合或出现零分量时返回 None"""
    try:
        P, S = state.phi.backward(point)
        Q = solve_Q(state, P, S)
        if not P or not Q:
            logger.warning("Chain index %d gives a zero coordinate; skipped", j)
            return None
        return assemble_chain_tuple(state, P, Q, j)
    except ExceptionalPointError as e:
        logger.warning("Chain index %d hits the exceptional set (%s); skipped", j, e.member)
    except (MathError, ZeroDivisionError) as e:
        logger.warning("Chain index %d cannot be pulled back: %s", j, e)
    return None


def _degenerate_chain(state: PipelineState, count: int) -> List[SolutionTuple]:
    # a0 = a1 = 0 时 F_P(Q) 恒为零
    return [assemble_chain_tuple(state, j * state.p, state.q, j) for j in range(2, count + 2)]


def collect_chain(state: PipelineState, tuples: Sequence[Optional[SolutionTuple]]) -> List[SolutionTuple]:
    """去掉跳过的下标，并检查各组解两两不同"""
    out: List[SolutionTuple] = []
    seen = set()
    for sol in tuples:
        if sol is None:
            continue
        key = sol.values
        if key in seen:
            raise ChainError(f"chain produced a repeated tuple at j={sol.provenance['params']['j']}")
        seen.add(key)
        out.append(sol)
    return out


def gen_symmetric_chain(state: PipelineState, count: int, probes: Sequence[Any] = (),
                        mazur_bound: int = 12) -> List[SolutionTuple]:
    """j = 2..count+1 的点链对应的解"""
    if count <= 0:
        return []
    if state.degenerate:
        return collect_chain(state, _degenerate_chain(state, count))
    certify_infinite_order(state, probes, mazur_bound)
    tuples = [pull_back(state, j, point) for j, point in chain_multiples(state, count)]
    chain = collect_chain(state, tuples)
    logger.info("Symmetric chain: %d of %d indices produced solutions", len(chain), count)
    return chain


# ---- 算例：i = 1, n = 3, t = (1), p = 2 的 q 族 ----

def example_pipeline(q0: Any = None) -> PipelineState:
    """i=1, n=3, t=(1), p=2；q0 为 None 时 q 为符号"""
    return build_pipeline(1, 3, [1], 2, symbolic_q=q0 is None, q0=q0)


def example_H() -> UPoly:
    """4q^2(P^4+1) - 4q(q+2)(2q+1)P(P^2+1) + (4q^4+20q^3+25q^2+20q+4)P^2"""
    q = RatFun.q()
    c4 = 4 * q ** 2
    c3 = -4 * q * (q + 2) * (2 * q + 1)
    c2 = parse_qexpr("4q^4+20q^3+25q^2+20q+4")
    return UPoly([c4, c3, c2, c3, c4], 'P')


def example_reference_curve() -> WeierstrassCurve:
    """Y^2 = X^3 - 27 A X + 54 B"""
    A = parse_qexpr("16q^8+160q^7+408q^6+200q^5+65q^4+200q^3+408q^2+160q+16")
    B = parse_qexpr("4q^4+20q^3+q^2+20q+4") * (A - 384 * RatFun.q() ** 4)
    return WeierstrassCurve(-27 * A, 54 * B)


def example_reference_points() -> Tuple[CurvePoint, CurvePoint]:
    """二阶点 T 与无限阶点 W"""
    T = CurvePoint(parse_qexpr("3(4q^4+20q^3+q^2+20q+4)"), Fraction(0))
    W = CurvePoint(parse_qexpr("3(4q^4+20q^3+q^2-4q+4)"), parse_qexpr("-216(q-2)q(2q+1)"))
    return T, W


def example_discriminant() -> RatFun:
    """-(4A^3 + 27B^2) 的因式分解形式"""
    return parse_qexpr("2^16*3^12*q^8(q+2)^2(2q+1)^2(2q^2-3q+2)(2q^2+13q+2)")


def example_expected_chain() -> Dict[int, Tuple[RatFun, RatFun]]:
    """j = 2, 3 时已知的 (P, Q)"""
    return {
        2: (parse_qexpr("3(q-2)q/(2(q-1)(q+1)(2q-1))"),
            parse_qexpr("-3q(2q-1)/(2(q-2)(q-1)(q+1))")),
        3: (parse_qexpr("(4q^3-2q^2-7q+8)(8q^3-7q^2-2q+4)/(2(q^3+4q^2-4q+2)(2q^3-4q^2+4q+1))"),
            parse_qexpr("(q^3+4q^2-4q+2)(8q^3-7q^2-2q+4)/(q(2q^3-4q^2+4q+1)(4q^3-2q^2-7q+8))")),
    }


def reciprocal_orbit(P: Any, Q: Any) -> List[Any]:
    """{P, Q, 1/P, 1/Q}：交换 P、Q 或同时取倒数后不变，用排序后的字符串比较"""
    return sorted((format_value(x) for x in (P, Q, 1 / P, 1 / Q)))
