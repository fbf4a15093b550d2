"""
恒等式检查
按分组组织的精确多项式恒等式：倒数扩展、展开式、四次曲线电池、结式、奇异轨迹、
约化、双有理变换、参数族证书以及 q 族点链回归。每个分组返回 IdentityResult 列表。
"""
import functools
import logging
import random
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from .codec import encode_mpoly
from .curves import (euler_double, iota, j_invariant, quartic_group_op,
                     specialize, torsion_certificate, transform_identity_residuals)
from .error_handler import SymchainError, UsageError
from .families import FAMILIES, symbolic_certificate
from .models import CertificateKind, IdentityReport, IdentityResult
from .mpoly import MPoly, find_cofactor, resultant, symbols
from .pipeline import (chain_multiples, example_discriminant, example_expected_chain,
                       example_H, example_pipeline, example_reference_curve,
                       example_reference_points, pull_back, reciprocal_orbit)
from .ratfun import RatFun
from .symfun import (check_reciprocal_identity, expansion_coeffs, sigma, sigma_bruteforce)

logger = logging.getLogger(__name__)

GroupFn = Callable[..., List[IdentityResult]]

# q 族上 Euler 点交叉检查的特殊化取值（避开 0, ±1, ±2, ±1/2）
SWEEP_VALUES = ('3', '4', '5', '6', '7', '8', '9', '10', '1/3', '2/3', '3/2', '5/2',
                '-3', '-4', '-5', '-1/3', '-3/2', '-2/3', '4/3', '7/2')


def _poly_result(group: str, name: str, residual: MPoly, detail: str = "") -> IdentityResult:
    return IdentityResult(group, name, residual.is_zero(), str(residual), detail,
                          variables=list(residual.vars), terms=encode_mpoly(residual))


def _value_result(group: str, name: str, lhs: Any, rhs: Any, detail: str = "") -> IdentityResult:
    passed = lhs == rhs
    residual = "0" if passed else f"{lhs} != {rhs}"
    return IdentityResult(group, name, passed, residual, detail)


def _random_rational(rng: random.Random) -> Fraction:
    num = 0
    while not num:
        num = rng.randint(-20, 20)
    return Fraction(num, rng.randint(1, 12))


def _symbolic_tuples() -> List[List[RatFun]]:
    q = RatFun.q()
    return [
        [q],
        [q, q + 1],
        [q, 2 * q - 1, (q - 1) / (q + 2)],
        [1, 1, q],
    ]


# ---- 倒数扩展与展开式 ----

def check_reciprocal_group(random_tuples: int = 100, max_n: int = 6, seed: int = 20240601,
                           **_: Any) -> List[IdentityResult]:
    """sigma_i = sigma_{2n-i} 在 (X, 1/X) 上成立：随机有理元组与 Q(q) 上的元组"""
    rng = random.Random(seed)
    results: List[IdentityResult] = []
    for n in range(1, max_n + 1):
        failures = []
        for _ in range(random_tuples):
            xs = [_random_rational(rng) for _ in range(n)]
            for i in range(n + 1):
                report = check_reciprocal_identity(i, xs)
                if not report['equal']:
                    failures.append(f"i={i} X={[str(x) for x in xs]}")
        results.append(IdentityResult(
            'reciprocal', f"sigma_i = sigma_2n-i, n={n}", not failures,
            "; ".join(failures[:3]) or "0", f"{random_tuples} random tuples"))

    for xs in _symbolic_tuples():
        n = len(xs)
        for i in range(n + 1):
            report = check_reciprocal_identity(i, xs)
            results.append(_value_result(
                'reciprocal', f"sigma_{i} = sigma_{2 * n - i} over Q(q), X={[str(x) for x in xs]}",
                report['lhs'], report['rhs']))
    return results


def check_expansion_group(random_tuples: int = 100, max_n: int = 6, seed: int = 20240601,
                          **_: Any) -> List[IdentityResult]:
    """sigma_i(X || Y) = sum_k sigma_{i-k}(X) sigma_k(Y)，以及与子集求和的对照"""
    rng = random.Random(seed + 1)
    results: List[IdentityResult] = []
    failures = []
    mismatches = []
    for _ in range(random_tuples):
        n = rng.randint(2, max_n)
        xs = [_random_rational(rng) for _ in range(n)]
        cut = rng.randint(0, n)
        for i in range(n + 1):
            try:
                expansion_coeffs(i, xs[:cut], xs[cut:])
            except SymchainError as e:
                failures.append(str(e))
            if sigma(i, xs) != sigma_bruteforce(i, xs):
                mismatches.append(f"i={i} X={[str(x) for x in xs]}")
    results.append(IdentityResult('expansion', "sigma_i of a concatenation", not failures,
                                  "; ".join(failures[:3]) or "0",
                                  f"{random_tuples} random splits"))
    results.append(IdentityResult('expansion', "sigma_i equals the subset sum", not mismatches,
                                  "; ".join(mismatches[:3]) or "0"))

    q = RatFun.q()
    base, extras = [q, 1 / q], [q + 1, Fraction(2)]
    for i in range(5):
        lhs = sum((sigma(i - k, base) * sigma(k, extras) for k in range(i + 1)), Fraction(0))
        results.append(_value_result('expansion', f"sigma_{i} of a concatenation over Q(q)",
                                     lhs, sigma(i, base + extras)))
    return results


# ---- 四次曲线相关的八个恒等式 ----

def _cubic_system():
    a, b, c, x1, x2, x3 = symbols('a', 'b', 'c', 'x1', 'x2', 'x3')
    x4 = a - x1 - x2 - x3
    F1 = x1 ** 2 + x2 ** 2 + x3 ** 2 + x4 ** 2 - b
    F2 = x1 ** 3 + x2 ** 3 + x3 ** 3 + x4 ** 3 - c
    s1, s2 = x1 + x2, x1 * x2
    F = (a ** 3 + s1 * (3 * b - 3 * a ** 2) - 3 * a * b + 6 * a * s1 ** 2 - 6 * a * s2
         + 2 * c - 6 * s1 ** 3 + 12 * s1 * s2)
    return (a, b, c, x1, x2, x3), F1, F2, F


def singular_c(a: MPoly, b: MPoly) -> MPoly:
    """f1 = 0 时的 c = a(6b - a^2)/8"""
    return a * (6 * b - a ** 2) / 8


def factorization_residual(c_value: Any = None) -> MPoly:
    """F - 3/4 (a - 2(x1+x2)) (a^2 - 2b - 2a(x1+x2) + 4(x1^2+x2^2))，c 取 c_value

    c_value 缺省为奇异轨迹上的值，此时残差为零；其它 c 会留下非零残差。
    """
    (a, b, c, x1, x2, _), _, _, F = _cubic_system()
    if c_value is None:
        c_value = singular_c(a, b)
    s1 = x1 + x2
    product = Fraction(3, 4) * (a - 2 * s1) * (a ** 2 - 2 * b - 2 * a * s1 + 4 * (x1 ** 2 + x2 ** 2))
    return (F.subs({'c': c_value}) - product).trim()


def _quartic_form():
    x, y, z = symbols('x', 'y', 'z')
    F = Fraction(27, 2) * (x ** 4 + y ** 4 + z ** 4) - Fraction(1, 2) * (x + y + z) ** 4
    return (x, y, z), F


def psi_components():
    """psi 的分量 p, q, r（x, y, z 的齐次多项式，次数 1, 3, 1）"""
    (x, y, z), _ = _quartic_form()
    p = -(x - 2 * y + z) / 3
    r = (x + y - 2 * z) / 3
    q = -(x ** 3 + y ** 3 + z ** 3) + (x + y + z) ** 3 / 9
    return p, q, r


def check_quartic_group(**_: Any) -> List[IdentityResult]:
    """四次曲线 C_{1,1/27} 与三次方程组的八个恒等式"""
    group = 'quartic'
    results: List[IdentityResult] = []

    (a, b, c, x1, x2, x3), F1, F2, F = _cubic_system()
    res = resultant(F1, F2, 'x3')
    results.append(_poly_result(group, "Res_x3(F1, F2) = F^2", res - F ** 2))

    results.append(_poly_result(group, "F factors on c = a(6b - a^2)/8",
                                factorization_residual()))

    cs = singular_c(a, b)
    conic = a ** 2 - 2 * b - 2 * a * (x1 + x3) + 4 * x1 ** 2 + 4 * x3 ** 2
    on_line = {'x2': a / 2 - x1, 'c': cs}
    results.append(_poly_result(group, "F1 restricted to x2 = a/2 - x1",
                                F1.subs(on_line) - conic / 2))
    results.append(_poly_result(group, "F2 restricted to x2 = a/2 - x1",
                                F2.subs(on_line) - Fraction(3, 8) * a * conic))

    (x, y, z), Fq = _quartic_form()
    one = {'x': 1, 'y': 1, 'z': 1}
    values = [Fq.evaluate(one)] + [Fq.diff(v).evaluate(one) for v in ('x', 'y', 'z')]
    results.append(IdentityResult(group, "[1:1:1] is a singular point of C_{1,1/27}",
                                  all(not v for v in values),
                                  ", ".join(str(v) for v in values)))

    p, q, r = psi_components()
    denom = q + r * (9 * p ** 2 - 9 * p * r + 6 * r ** 2)
    num_x = q + 3 * (p - r) * (2 * p ** 2 - p * r + 2 * r ** 2)
    num_y = q - 3 * p * (2 * p ** 2 - 3 * p * r + 3 * r ** 2)
    for name, target in (("x", x * denom - z * num_x), ("y", y * denom - z * num_y)):
        cofactor = find_cofactor(target, Fq)
        results.append(IdentityResult(
            group, f"psi^-1 o psi = id modulo F ({name}/z)", cofactor is not None,
            "0" if cofactor is not None else str(target),
            f"cofactor {cofactor}" if cofactor is not None else "no cofactor"))

    rhs = 9 * p ** 2 * r ** 2 * (p - r) ** 2 - 6 * (p ** 2 - p * r + r ** 2) ** 3
    image = q ** 2 - rhs
    cofactor = find_cofactor(image, Fq)
    results.append(IdentityResult(
        group, "psi maps C_{1,1/27} into C'", cofactor is not None,
        "0" if cofactor is not None else str(image),
        f"cofactor {cofactor}" if cofactor is not None else "no cofactor"))

    restricted = Fq.subs({'z': (x + y) / 2})
    expected = Fraction(27, 16) * (x - y) ** 2 * (7 * x ** 2 + 10 * x * y + 7 * y ** 2)
    results.append(_poly_result(group, "F on x + y = 2z", restricted - expected))

    u, v = symbols('x', 'y')
    results.append(_poly_result(group, "x^4 + y^4 + (x+y)^4 = 2(x^2+xy+y^2)^2",
                                u ** 4 + v ** 4 + (u + v) ** 4 - 2 * (u ** 2 + u * v + v ** 2) ** 2))
    return results


def verify_quartic_identities() -> IdentityReport:
    """八个恒等式的完整报告"""
    return IdentityReport(check_quartic_group())


# ---- 其它分组 ----

def check_resultant_group(**_: Any) -> List[IdentityResult]:
    group = 'resultant'
    results: List[IdentityResult] = []
    x, = symbols('x')
    res = resultant(x ** 2 - 1, x - 2, 'x')
    results.append(_poly_result(group, "Res_x(x^2 - 1, x - 2) = 3", res - 3))

    a, b, c, x1, x2 = symbols('a', 'b', 'c', 'x1', 'x2')
    w = x1 ** 2 + x1 * x2 + x2 ** 2
    s2 = a ** 2 + 2 * w
    s4 = a ** 4 + 2 * w ** 2
    x3 = -x1 - x2
    results.append(_poly_result(group, "s2 with x4 = a, x3 = -x1 - x2",
                                x1 ** 2 + x2 ** 2 + x3 ** 2 + a ** 2 - s2))
    results.append(_poly_result(group, "s4 with x4 = a, x3 = -x1 - x2",
                                x1 ** 4 + x2 ** 4 + x3 ** 4 + a ** 4 - s4))
    res = resultant(s2 - b, s4 - c, 'x2')
    results.append(_poly_result(group, "Res_x2(s2 - b, s4 - c) = 4(3a^4 - 2a^2 b + b^2 - 2c)^2",
                                res - 4 * (3 * a ** 4 - 2 * a ** 2 * b + b ** 2 - 2 * c) ** 2))
    return results


def check_singular_locus_group(**_: Any) -> List[IdentityResult]:
    group = 'singular_locus'
    a, b, c, d = symbols('a', 'b', 'c', 'd')
    f1 = a ** 3 - 6 * a * b + 8 * c
    f2 = (a ** 6 - 12 * a ** 4 * b + 39 * a ** 2 * b ** 2 - 16 * b ** 3
          + 12 * (a ** 2 - 6 * b) * a * c + 48 * c ** 2)
    locus = {'b': (3 * a ** 2 + d ** 2) / 12, 'c': (9 * a ** 3 + 9 * a * d ** 2 - 2 * d ** 3) / 144}
    return [
        _poly_result(group, "f1 vanishes on c = a(6b - a^2)/8", f1.subs({'c': singular_c(a, b)})),
        _poly_result(group, "f2 vanishes on its rational parametrization", f2.subs(locus)),
    ]


def check_reduction_group(**_: Any) -> List[IdentityResult]:
    """(-1, 1, 2) 情形：x4 = 1/a 后倒数和的约化，以及参数族分子的 sigma_2"""
    group = 'reduction'
    a, b, x1, x2 = symbols('a', 'b', 'x1', 'x2')
    s = x1 + x2
    M = 1 - a * b + a * s
    N = (1 - a * b) * s + a * (x1 ** 2 + x1 * x2 + x2 ** 2)
    # a x3 = -M，所以 1/x1 + 1/x2 + 1/x3 = N / (x1 x2 M) 去分母后为下式
    results = [
        _poly_result(group, "reciprocal sum with x4 = 1/a", s * M - a * x1 * x2 - N),
        _poly_result(group, "x1 + x2 + x3 + x4 = b with x4 = 1/a", a * s - M + 1 - a * b),
    ]
    family = FAMILIES['m112']
    nums, _ = family.parts(*symbols(*family.params))
    n1, n2, n3 = nums[:3]
    results.append(_poly_result(group, "sigma_2 of the family numerators vanishes",
                                n1 * n2 + n1 * n3 + n2 * n3))
    return results


def check_birational_group(**_: Any) -> List[IdentityResult]:
    """变换公式的符号残差，以及算例曲线上逐点往返"""
    group = 'birational'
    results = [_poly_result(group, f"transformation identity {name}", residual)
               for name, residual in transform_identity_residuals().items()]

    state = example_pipeline(Fraction(3))
    phi = state.phi
    points = [state.U, iota(state.U), state.base, iota(state.base), state.V]
    for k, pt in enumerate(points):
        image = phi.forward(pt)
        back = phi.backward(image)
        results.append(_value_result(group, f"backward o forward on point {k} at q = 3",
                                     back, pt, f"image {image}"))
    return results


def check_families_group(**_: Any) -> List[IdentityResult]:
    results = []
    for name in FAMILIES:
        for key, residual in symbolic_certificate(name).items():
            results.append(_poly_result('families', f"family_{name} {key}", residual))
    return results


def check_chain_regression_group(sweep: Sequence[Any] = SWEEP_VALUES,
                                 **_: Any) -> List[IdentityResult]:
    """i = 1, n = 3, t = (1), p = 2 的 q 族：曲线、判别式、挠点、点链与 Euler 点"""
    group = 'chain_regression'
    results: List[IdentityResult] = []
    state = example_pipeline()
    results.append(_value_result(group, "H(P) of the q-family", state.H, example_H()))

    ref = example_reference_curve()
    results.append(_value_result(group, "j-invariant matches the reference model",
                                 j_invariant(state.curve), j_invariant(ref)))
    results.append(_value_result(group, "reference discriminant factorization",
                                 -(4 * ref.A ** 3 + 27 * ref.B ** 2), example_discriminant()))

    T, W = example_reference_points()
    results.append(IdentityResult(group, "T and W lie on the reference model",
                                  ref.contains(T) and ref.contains(W)))
    verdict_t = torsion_certificate(ref, T)
    verdict_w = torsion_certificate(ref, W)
    results.append(_value_result(group, "T is 2-torsion", verdict_t.kind, CertificateKind.TWO_TORSION))
    results.append(_value_result(group, "W has infinite order", verdict_w.reason,
                                 "Y² does not divide Δ"))

    q = RatFun.q()
    a_q = (2 * q ** 2 + 9 * q + 2) / (2 * q)
    results.append(_value_result(group, "target sigma_1 of the q-family", state.target, a_q))

    expected = example_expected_chain()
    for j, point in chain_multiples(state, 2):
        sol = pull_back(state, j, point)
        if sol is None:
            results.append(IdentityResult(group, f"chain index {j}", False, "skipped"))
            continue
        P, Q = sol.values[1], sol.values[2]
        results.append(_value_result(group, f"chain index {j} matches the known pair",
                                     reciprocal_orbit(P, Q), reciprocal_orbit(*expected[j])))
        results.append(_value_result(group, f"sigma_1 identity at chain index {j}",
                                     sigma(1, (1, 1, P, Q, 1 / P, 1 / Q)), a_q))

    euler = euler_double(state.quartic, state.U)
    route = iota(quartic_group_op(state.quartic, state.U, k=2, base=iota(state.U)))
    results.append(_value_result(group, "Euler point equals the Weierstrass route", euler, route))

    for q0 in sweep:
        q0 = Fraction(q0)
        try:
            special = example_pipeline(q0)
            expected_point = specialize(euler, q0)
        except (SymchainError, ZeroDivisionError) as e:
            logger.debug("Skipping q = %s in the Euler cross-check: %s", q0, e)
            continue
        try:
            local = euler_double(special.quartic, special.U)
            route = iota(quartic_group_op(special.quartic, special.U, k=2, base=iota(special.U)))
        except SymchainError as e:
            results.append(IdentityResult(group, f"Euler point at q = {q0}", False, str(e)))
            continue
        results.append(_value_result(group, f"Euler point at q = {q0}", local, route))
        results.append(_value_result(group, f"Euler point specializes at q = {q0}",
                                     local, expected_point))
    return results


# ---- 分组注册 ----

GROUPS: Dict[str, GroupFn] = {
    'reciprocal': check_reciprocal_group,
    'expansion': check_expansion_group,
    'quartic': check_quartic_group,
    'resultant': check_resultant_group,
    'singular_locus': check_singular_locus_group,
    'reduction': check_reduction_group,
    'birational': check_birational_group,
    'families': check_families_group,
    'chain_regression': check_chain_regression_group,
}


# --only 接受的别名
ALIASES = {'theorem45': 'quartic'}


def resolve_groups(only: Optional[Sequence[str]] = None) -> List[str]:
    """把 --only 的名字解析为分组名，保持输入顺序并去重"""
    if not only:
        return list(GROUPS)
    names: List[str] = []
    for raw in only:
        name = ALIASES.get(raw, raw)
        if name not in GROUPS:
            known = ", ".join(list(GROUPS) + list(ALIASES))
            raise UsageError(f"unknown identity group '{raw}' (known: {known})")
        if name not in names:
            names.append(name)
    return names


def group_tasks(only: Optional[Sequence[str]] = None,
                **settings: Any) -> List[Callable[[], List[IdentityResult]]]:
    """每个分组一个无参任务，供并发执行器使用"""
    return [functools.partial(GROUPS[name], **settings) for name in resolve_groups(only)]


def run_identities(only: Optional[Sequence[str]] = None, **settings: Any) -> IdentityReport:
    """顺序运行所选分组"""
    report = IdentityReport()
    for task in group_tasks(only, **settings):
        report.results.extend(task())
    logger.info("Identity checks: %d run, %d failed", len(report.results),
                sum(1 for r in report.results if not r.passed))
    return report
