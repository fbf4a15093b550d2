import json
from fractions import Fraction

import pytest

from core.codec import (
    INFINITY_TEXT,
    decode_curve,
    decode_mpoly,
    decode_point,
    encode_curve,
    encode_mpoly,
    encode_point,
    format_rational,
    format_value,
    parse_mpoly,
    parse_qexpr,
    parse_rational,
    parse_rational_list,
    parse_value,
)
from core.curves import INFINITY, CurvePoint, WeierstrassCurve
from core.error_handler import ParseError
from core.mpoly import symbols
from core.ratfun import RatFun


def test_parse_rational_normalizes():
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert parse_rational(" 7 ") == 7
    assert format_rational(Fraction(6, -4)) == "-3/2"
    assert format_rational(Fraction(8, 4)) == "2"


@pytest.mark.parametrize("text", ["", "1/0", "abc", "1.5", "2/-3", "1/2/3"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_parse_rational_list():
    assert parse_rational_list("1, -2/3,4") == [1, Fraction(-2, 3), 4]
    assert parse_rational_list("") == []


def test_parse_qexpr_products():
    q = RatFun.q()
    assert parse_qexpr("-4q(q+2)(2q+1)") == -4 * q * (q + 2) * (2 * q + 1)
    assert parse_qexpr("2^16*3^2") == Fraction(2 ** 16 * 9)
    assert parse_qexpr("q**2/(q-1)") == q * q / (q - 1)
    assert parse_qexpr("(q+1)-q") == 1
    assert isinstance(parse_qexpr("(q+1)-q"), Fraction)


@pytest.mark.parametrize("text", ["q+", "(q", "x+1", "q^q", "3/(q-q)", "0^-1"])
def test_parse_qexpr_rejects(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_qexpr(text)


def test_parse_value_field():
    assert parse_value("3/4") == Fraction(3, 4)
    assert parse_value("3/4", symbolic=True) == RatFun.lift(Fraction(3, 4))
    assert parse_value("2q", symbolic=True) == 2 * RatFun.q()
    with pytest.raises(ParseError):
        parse_value("q")


def test_format_value():
    q = RatFun.q()
    assert format_value(Fraction(-1, 2)) == "-1/2"
    assert format_value(RatFun.lift(Fraction(5))) == "5"
    assert parse_qexpr(format_value((q * q + 1) / (2 * q))) == (q * q + 1) / (2 * q)


def test_mpoly_json():
    x, y = symbols('x', 'y')
    f = parse_mpoly("x^2*y - 3/2*y + 1", ['x', 'y'])
    assert f == x * x * y - Fraction(3, 2) * y + 1
    data = encode_mpoly(f)
    assert data == [["1", [2, 1]], ["-3/2", [0, 1]], ["1", [0, 0]]]
    assert decode_mpoly(json.loads(json.dumps(data)), ['x', 'y']) == f


def test_decode_mpoly_malformed():
    with pytest.raises(ParseError):
        decode_mpoly({'terms': []}, ['x'])
    with pytest.raises(ParseError):
        decode_mpoly([["1/0", [1]]], ['x'])
    with pytest.raises(ParseError):
        decode_mpoly([["1", [1, 2]]], ['x'])
    with pytest.raises(ParseError):
        decode_mpoly([["1"]], ['x'])


def test_curve_json():
    curve = WeierstrassCurve(0, 1)
    data = encode_curve(curve, [CurvePoint(2, 3), INFINITY])
    assert data == {'field': 'Q', 'A': '0', 'B': '1',
                    'points': [{'X': '2', 'Y': '3'}, INFINITY_TEXT]}
    decoded, points = decode_curve(data)
    assert decoded == curve
    assert points == [CurvePoint(2, 3), INFINITY]


def test_symbolic_curve_json(reference_curve, reference_points):
    T, W = reference_points
    data = encode_curve(reference_curve, [W])
    assert data['field'] == 'Q(q)'
    decoded, points = decode_curve(data)
    assert decoded.A == reference_curve.A
    assert points[0] == W
    assert encode_point(T)['Y'] == "0"


@pytest.mark.parametrize("data", [[1, 2], {'X': "1"}, 5])
def test_decode_point_malformed(data):
    with pytest.raises(ParseError):
        decode_point(data)
