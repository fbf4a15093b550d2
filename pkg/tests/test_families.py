import random
from fractions import Fraction
from math import gcd

import pytest

from core.error_handler import FamilyParameterError, MathError, UsageError
from core.families import (
    FAMILIES,
    family_24,
    family_123,
    family_124,
    family_m112,
    generate,
    get_family,
    is_positive,
    lift_to_n,
    make_integer_family,
    positivity_window,
    symbolic_certificate,
    verify_solution,
)
from core.models import SolutionTuple
from core.symfun import power_sum


def test_family_123_worked_example():
    sol = family_123(2, 1, 1)
    assert sol.values == (Fraction(14, 17), Fraction(3, 17), Fraction(65, 68), Fraction(3, 68))
    assert power_sum(1, sol.values) == 2
    assert power_sum(2, sol.values) == Fraction(13, 8)
    assert power_sum(3, sol.values) == Fraction(23, 16)
    assert sol.provenance['method'] == "family_123"


def test_family_124_worked_example():
    sol = family_124(1, 1, 1)
    assert sol.values == (Fraction(-1, 2), 0, Fraction(1, 2), 1)
    assert power_sum(4, sol.values) == Fraction(9, 8)


def test_family_m112_worked_example():
    sol = family_m112(1, 3, 2)
    assert sol.values == (Fraction(6, 7), Fraction(12, 7), Fraction(-4, 7), 1)
    assert power_sum(-1, sol.values) == 1
    assert power_sum(1, sol.values) == 3


def test_family_24_worked_example():
    sol = family_24(1, 0)
    assert sol.values == (-2, 1, -1)
    assert power_sum(2, sol.values) == 6
    assert power_sum(4, sol.values) == 18


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_families_hold_on_random_parameters(name):
    rng = random.Random(name)
    family = get_family(name)
    checked = 0
    while checked < 25:
        args = {p: Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for p in family.params}
        t = args.pop('t')
        try:
            sol = generate(name, args, t)
        except FamilyParameterError:
            continue
        assert verify_solution(sol).passed
        checked += 1


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_symbolic_certificates(name):
    residuals = symbolic_certificate(name)
    assert len(residuals) == len(get_family(name).exponents)
    for constraint, residual in residuals.items():
        assert residual.is_zero(), constraint


@pytest.mark.parametrize("call", [
    lambda: family_123(0, 1, 1),
    lambda: family_124(0, 1, 1),
    lambda: family_m112(0, 1, 1),
    lambda: family_m112(1, 0, 1),
    lambda: family_m112(2, Fraction(1, 2), 1),
    lambda: family_m112(1, 3, 0),
    lambda: family_m112(1, 3, -1),
])
def test_excluded_parameters(call):
    with pytest.raises(FamilyParameterError):
        call()


def test_generate_needs_parameters():
    with pytest.raises(UsageError):
        generate('123', {'a': 2}, 1)
    with pytest.raises(UsageError):
        get_family('135')


def test_positivity_window():
    windows = positivity_window(2, 1, samples=50)
    assert windows == [(0, Fraction(4, 3)), (4, 8)]
    assert is_positive(family_123(2, 1, Fraction(2, 3)))
    assert is_positive(family_123(2, 1, 5))
    assert not is_positive(family_123(2, 1, 2))
    with pytest.raises(FamilyParameterError):
        positivity_window(1, 2)
    with pytest.raises(FamilyParameterError):
        positivity_window(2, 0)


def test_lift_to_more_variables():
    rng = random.Random(11)
    base = family_123(2, 1, 3)
    for size in range(1, 5):
        padding = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(size)]
        lifted = lift_to_n(base, padding)
        assert lifted.spec.n == 4 + size
        assert verify_solution(lifted).passed
        for e, old, new in zip(base.spec.exponents, base.spec.targets, lifted.spec.targets):
            assert new == old + power_sum(e, padding)


def test_lift_with_zero_and_negative_exponent():
    sol = family_m112(1, 3, 2)
    with pytest.raises(FamilyParameterError):
        lift_to_n(sol, [0])
    assert lift_to_n(sol, []) is sol


def test_integer_family_is_primitive():
    sols = [family_123(2, 1, t) for t in range(1, 11)]
    family = make_integer_family(sols)
    assert family.primitive
    values = [x for sol in family.solutions for x in sol.values]
    assert all(x.denominator == 1 for x in values)
    assert gcd(*(int(x) for x in values)) == 1
    for sol in family.solutions:
        assert sol.spec.same_as(family.spec)
        assert verify_solution(sol).passed


def test_integer_family_divisibility():
    sols = [family_123(2, 1, t) for t in range(1, 6)]
    family = make_integer_family(sols, divisible_by=7)
    s1 = family.spec.targets[0]
    assert s1.denominator == 1 and s1.numerator % 7 == 0
    for sol in family.solutions:
        assert all(x.denominator == 1 for x in sol.values)
        assert verify_solution(sol).passed


def test_integer_family_rejects_mixed_systems():
    with pytest.raises(UsageError):
        make_integer_family([family_123(2, 1, 1), family_123(3, 1, 1)])
    with pytest.raises(UsageError):
        make_integer_family([])
    with pytest.raises(UsageError):
        make_integer_family([family_m112(1, 3, 2)], divisible_by=5)


def test_verification_reports_failures():
    good = family_24(1, 0)
    bad = SolutionTuple((Fraction(-2), Fraction(1), Fraction(2)), good.spec)
    report = verify_solution(bad, index=4)
    assert not report.passed
    assert report.index == 4
    assert [r.name for r in report.failures()] == ["s_2", "s_4"]
    assert report.to_dict()["constraints"][0]["computed"] == "9"


def test_wrong_length_is_rejected():
    good = family_24(1, 0)
    with pytest.raises(MathError):
        SolutionTuple((1, 2), good.spec)
