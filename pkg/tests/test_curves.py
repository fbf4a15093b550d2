from fractions import Fraction

import pytest

from core.curves import (
    INFINITY,
    CurvePoint,
    LongWeierstrass,
    QuarticModel,
    WeierstrassCurve,
    ec_add,
    ec_mul,
    ec_multiples,
    euler_double,
    integral_scaling,
    iota,
    j_invariant,
    mazur_check,
    quartic_group_op,
    quartic_to_weierstrass,
    specialize,
    torsion_certificate,
    transform_identity_residuals,
)
from core.error_handler import (
    BranchPointError,
    DegenerateCurveError,
    ExceptionalPointError,
    PointNotOnCurveError,
    SingularCurveError,
    SpecializationError,
    UsageError,
)
from core.models import CertificateKind
from core.pipeline import example_H
from core.ratfun import RatFun
from core.upoly import UPoly

MORDELL = WeierstrassCurve(0, -2)          # Y^2 = X^3 - 2，(3, 5) 为无限阶点
MORDELL_POINT = CurvePoint(3, 5)


# ---- 短 Weierstrass 模型 ----

def test_doubling_on_y2_x3_plus_1():
    curve = WeierstrassCurve(0, 1)
    assert ec_mul(curve, 2, CurvePoint(2, 3)) == CurvePoint(0, 1)
    assert ec_mul(curve, 0, CurvePoint(2, 3)) == INFINITY
    assert ec_mul(curve, -1, CurvePoint(2, 3)) == CurvePoint(2, -3)


def test_finite_order_by_mazur():
    curve = WeierstrassCurve(0, 1)
    verdict = mazur_check(curve, CurvePoint(2, 3))
    assert verdict.kind == CertificateKind.FINITE_ORDER
    assert verdict.order == 6
    assert ec_mul(curve, 6, CurvePoint(2, 3)) == INFINITY


def test_infinite_order_by_mazur():
    verdict = mazur_check(MORDELL, MORDELL_POINT)
    assert verdict.infinite


def test_group_law_identities():
    P = MORDELL_POINT
    P2 = ec_add(MORDELL, P, P)
    P3 = ec_add(MORDELL, P2, P)
    assert ec_add(MORDELL, ec_add(MORDELL, P, P2), P3) == ec_add(MORDELL, P, ec_add(MORDELL, P2, P3))
    assert ec_add(MORDELL, P, INFINITY) == P
    assert ec_add(MORDELL, P, -P) == INFINITY
    assert ec_mul(MORDELL, 5, P) == ec_add(MORDELL, ec_mul(MORDELL, 2, P), P3)
    assert ec_multiples(MORDELL, P, 3) == [P, P2, P3]


def test_singular_and_off_curve():
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(0, 0)
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(-3, 2)
    with pytest.raises(PointNotOnCurveError):
        ec_add(MORDELL, CurvePoint(1, 1), MORDELL_POINT)


def test_j_invariant():
    assert j_invariant(WeierstrassCurve(1, 0)) == 1728
    assert j_invariant(WeierstrassCurve(0, 1)) == 0


def test_mazur_needs_rational_curve(reference_curve, reference_points):
    with pytest.raises(UsageError):
        mazur_check(reference_curve, reference_points[1])


def test_long_model_round_trip():
    long_model = LongWeierstrass(Fraction(1), Fraction(0), Fraction(1), Fraction(0), Fraction(0))
    assert long_model.contains(Fraction(0), Fraction(0))
    point = long_model.to_short(Fraction(0), Fraction(0))
    assert long_model.short().contains(point)
    assert long_model.from_short(point) == (0, 0)


# ---- 四次模型 ----

def test_quartic_model_validation():
    with pytest.raises(DegenerateCurveError):
        QuarticModel(UPoly([1, 0, 1], 'P'), (0, 1))
    with pytest.raises(UsageError):
        QuarticModel(UPoly([1, 0, 0, 0, 0, 1], 'P'), (0, 1))
    with pytest.raises(SingularCurveError):
        QuarticModel.from_coeffs([1, 0, -2, 0, 1], (0, 1))
    with pytest.raises(PointNotOnCurveError):
        QuarticModel.from_coeffs([1, 0, 0, 0, 1], (0, 2))


def test_branch_point_base_on_quartic():
    quartic = QuarticModel.from_coeffs([1, 0, 0, 0, -1], (1, 0))
    with pytest.raises(BranchPointError):
        quartic_to_weierstrass(quartic)


def test_cubic_branch_transformation():
    quartic = QuarticModel.from_coeffs([1, 0, -1, 0], (0, 0))
    curve, phi = quartic_to_weierstrass(quartic)
    assert phi.kind == "branch"
    assert curve == WeierstrassCurve(-1, 0)
    image = phi.forward((1, 0))
    assert image == CurvePoint(-1, 0)
    assert phi.backward(image) == (1, 0)
    assert phi.forward((0, 0)) == INFINITY
    with pytest.raises(ExceptionalPointError) as info:
        phi.backward(CurvePoint(0, 0))
    assert info.value.member == "x=0"


def test_square_transformation_at_3(example_at_3):
    quartic = example_at_3.quartic
    curve, phi = quartic_to_weierstrass(quartic)
    assert phi.kind == "square"
    assert phi.forward(quartic.base) == INFINITY
    for pt in (example_at_3.U, iota(example_at_3.U), iota(quartic.base)):
        assert phi.backward(phi.forward(pt)) == pt
    described = phi.describe()
    assert described['kind'] == "square"
    assert "y=0" in described['exceptional']


def test_same_j_invariant_as_reference(example_at_3, reference_curve):
    assert j_invariant(example_at_3.curve) == j_invariant(specialize(reference_curve, 3))


def test_euler_double_matches_group_law(example_at_3):
    quartic = example_at_3.quartic
    U = example_at_3.U
    doubled = euler_double(quartic, U)
    assert quartic.contains(doubled)
    assert doubled == iota(quartic_group_op(quartic, U, k=2, base=iota(U)))


def test_euler_double_rejects_branch_point():
    quartic = QuarticModel.from_coeffs([1, 0, -1, 0], (0, 0))
    with pytest.raises(BranchPointError):
        euler_double(quartic, (1, 0))


def test_quartic_group_identity(example_at_3):
    quartic = example_at_3.quartic
    U = example_at_3.U
    assert quartic_group_op(quartic, U, k=0) == quartic.base
    assert quartic_group_op(quartic, U, k=1) == U
    assert quartic_group_op(quartic, U, iota(U), k=1) == quartic_group_op(quartic, iota(U), U)


def test_transform_identities():
    residuals = transform_identity_residuals()
    assert residuals
    for name, residual in residuals.items():
        assert residual.is_zero(), name


# ---- 函数域上的判定 ----

def test_reference_points_on_curve(reference_curve, reference_points):
    T, W = reference_points
    assert reference_curve.contains(T)
    assert reference_curve.contains(W)


def test_torsion_certificate(reference_curve, reference_points):
    T, W = reference_points
    assert torsion_certificate(reference_curve, T).kind == CertificateKind.TWO_TORSION
    verdict = torsion_certificate(reference_curve, W)
    assert verdict.kind == CertificateKind.INFINITE_ORDER
    assert verdict.reason == "Y² does not divide Δ"
    doubled = ec_add(reference_curve, W, W)
    assert torsion_certificate(reference_curve, doubled).reason == "non-polynomial coordinate"


@pytest.mark.parametrize("q0", [2, Fraction(1, 2), 1, -1])
def test_bad_specializations_have_torsion(reference_curve, reference_points, q0):
    _, W = reference_points
    verdict = mazur_check(specialize(reference_curve, q0), specialize(W, q0))
    assert verdict.kind == CertificateKind.FINITE_ORDER
    if q0 == 2:
        assert verdict.order == 2


@pytest.mark.parametrize("q0", [3, 5, Fraction(7, 2), -3])
def test_good_specializations_have_infinite_order(reference_curve, reference_points, q0):
    _, W = reference_points
    assert mazur_check(specialize(reference_curve, q0), specialize(W, q0)).infinite


def test_singular_specialization(reference_curve):
    with pytest.raises(SpecializationError):
        specialize(reference_curve, 0)
    with pytest.raises(SpecializationError):
        specialize(reference_curve, -2)


def test_integral_scaling():
    q = RatFun.q()
    curve = WeierstrassCurve(Fraction(1, 4) * q, 1 / q)
    u = integral_scaling(curve)
    A = u ** 4 * curve.A
    B = u ** 6 * curve.B
    assert A.is_polynomial() and A.num.has_integer_coeffs()
    assert B.is_polynomial() and B.num.has_integer_coeffs()


def test_example_quartic(symbolic_example):
    assert symbolic_example.H == example_H()
    assert specialize(example_H(), 3) == specialize(symbolic_example.H, 3)
