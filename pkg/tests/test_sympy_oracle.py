"""用 sympy 作对照检查结式、最大公因式与对称函数"""
import random
from fractions import Fraction

import pytest

sympy = pytest.importorskip("sympy")

from core.mpoly import resultant, symbols  # noqa: E402
from core.symfun import sigma  # noqa: E402
from core.upoly import UPoly, upoly_gcd  # noqa: E402

X = sympy.Symbol('x')


def _random_coeffs(rng, degree):
    coeffs = [rng.randint(-5, 5) for _ in range(degree)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    return coeffs


def _to_sympy(coeffs):
    return sum(sympy.Integer(c) * X ** k for k, c in enumerate(coeffs))


def _from_sympy(expr):
    poly = sympy.Poly(expr, X)
    return UPoly([Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())], 'x')


def test_gcd_against_sympy():
    rng = random.Random(5)
    for _ in range(30):
        shared = _random_coeffs(rng, rng.randint(0, 2))
        a = _random_coeffs(rng, rng.randint(0, 3))
        b = _random_coeffs(rng, rng.randint(0, 3))
        f = _to_sympy(shared) * _to_sympy(a)
        g = _to_sympy(shared) * _to_sympy(b)
        expected = sympy.Poly(sympy.gcd(f, g), X).monic().as_expr()
        assert upoly_gcd(_from_sympy(f), _from_sympy(g)) == _from_sympy(expected)


def test_univariate_resultant_against_sympy():
    rng = random.Random(9)
    x, = symbols('x')
    for _ in range(20):
        fc = _random_coeffs(rng, rng.randint(1, 4))
        gc = _random_coeffs(rng, rng.randint(1, 3))
        f = sum((c * x ** k for k, c in enumerate(fc)), 0 * x)
        g = sum((c * x ** k for k, c in enumerate(gc)), 0 * x)
        expected = sympy.resultant(_to_sympy(fc), _to_sympy(gc), X)
        assert resultant(f, g, 'x') == Fraction(int(expected))


def test_bivariate_resultant_against_sympy():
    x, y = symbols('x', 'y')
    sx, sy = sympy.symbols('x y')
    f = x ** 2 * y + 3 * x - y ** 2 + 1
    g = x ** 3 - 2 * x * y + y
    expected = sympy.expand(sympy.resultant(sx ** 2 * sy + 3 * sx - sy ** 2 + 1,
                                            sx ** 3 - 2 * sx * sy + sy, sx))
    ours = resultant(f, g, 'x')
    poly = sympy.Poly(expected, sy)
    for (k,), c in poly.terms():
        assert ours.terms.get((k,), 0) == Fraction(int(c))
    assert len(ours.terms) == len(poly.terms())


def test_elementary_symmetric_against_expansion():
    z = sympy.Symbol('z')
    xs = [Fraction(1, 2), -3, 4, Fraction(2, 7), 5]
    product = sympy.expand(sympy.prod([1 + sympy.Rational(v.numerator, v.denominator) * z
                                       for v in map(Fraction, xs)]))
    coeffs = sympy.Poly(product, z).all_coeffs()[::-1]
    for i, c in enumerate(coeffs):
        assert sigma(i, xs) == Fraction(int(c.p), int(c.q))
