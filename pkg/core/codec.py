"""
编解码
有理数字符串 "num/den"、q 表达式（递归下降解析）、多项式 JSON、曲线与点 JSON
"""
import logging
import re
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .error_handler import ParseError
from .mpoly import MPoly, from_terms
from .ratfun import RatFun

logger = logging.getLogger(__name__)

_RATIONAL_RE = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')
_TOKEN_RE = re.compile(r'\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))')

INFINITY_TEXT = "infinity"


# ---- 有理数 ----

def parse_rational(text: str) -> Fraction:
    """解析 "num/den" 或整数"""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ParseError(f"not a rational number: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def parse_rational_list(text: str) -> List[Fraction]:
    """逗号分隔的有理数列表；空串表示空列表"""
    text = (text or "").strip()
    if not text:
        return []
    return [parse_rational(part) for part in text.split(",")]


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---- 表达式解析 ----

class _ExprParser:
    """递归下降解析器

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary | unary)*      相邻因子视为乘法
    unary  := ('+'|'-') unary | power
    power  := atom (('^'|'**') ['-'] int)?
    atom   := int | name | '(' expr ')'
    """

    def __init__(self, text: str, symbols: Mapping[str, Any]):
        self.text = text
        self.symbols = symbols
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str]]:
        tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character at {pos} in {text!r}")
            number, name, op = m.groups()
            if number is not None:
                tokens.append(('num', number))
            elif name is not None:
                tokens.append(('name', name))
            else:
                tokens.append(('op', '^' if op == '**' else op))
            pos = m.end()
        return tokens

    def _peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> Tuple[str, str]:
        tok = self._peek()
        if tok is None:
            raise ParseError(f"unexpected end of expression {self.text!r}")
        self.pos += 1
        return tok

    def _expect(self, op: str):
        tok = self._take()
        if tok != ('op', op):
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Any:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self._expr()
        if self._peek() is not None:
            raise ParseError(f"trailing input in {self.text!r}")
        return value

    def _expr(self) -> Any:
        value = self._term()
        while self._peek() in (('op', '+'), ('op', '-')):
            op = self._take()[1]
            rhs = self._term()
            value = value + rhs if op == '+' else value - rhs
        return value

    def _term(self) -> Any:
        value = self._unary()
        while True:
            tok = self._peek()
            if tok in (('op', '*'), ('op', '/')):
                self._take()
                rhs = self._unary()
                if tok[1] == '*':
                    value = value * rhs
                else:
                    try:
                        value = value / rhs
                    except ZeroDivisionError:
                        raise ParseError(f"division by zero in {self.text!r}")
                    except TypeError:
                        raise ParseError(f"unsupported division in {self.text!r}")
            elif tok is not None and (tok[0] in ('name', 'num') or tok == ('op', '(')):
                value = value * self._unary()
            else:
                return value

    def _unary(self) -> Any:
        tok = self._peek()
        if tok == ('op', '-'):
            self._take()
            return -self._unary()
        if tok == ('op', '+'):
            self._take()
            return self._unary()
        return self._power()

    def _power(self) -> Any:
        base = self._atom()
        if self._peek() == ('op', '^'):
            self._take()
            sign = 1
            if self._peek() == ('op', '-'):
                self._take()
                sign = -1
            kind, text = self._take()
            if kind != 'num':
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            exponent = sign * int(text)
            try:
                return base ** exponent
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"invalid power in {self.text!r}: {e}")
        return base

    def _atom(self) -> Any:
        kind, text = self._take()
        if kind == 'num':
            return Fraction(int(text))
        if kind == 'name':
            if text not in self.symbols:
                raise ParseError(f"unknown symbol {text!r} in {self.text!r}")
            return self.symbols[text]
        if text == '(':
            value = self._expr()
            self._expect(')')
            return value
        raise ParseError(f"unexpected {text!r} in {self.text!r}")


def simplify_value(x: Any) -> Any:
    """常数 RatFun 退化为 Fraction"""
    if isinstance(x, RatFun) and x.is_constant():
        return x.constant_value()
    return x


def parse_qexpr(text: str) -> Any:
    """解析 q 的有理函数表达式；常数返回 Fraction"""
    value = _ExprParser(str(text), {'q': RatFun.q()}).parse()
    if isinstance(value, Fraction):
        return value
    return simplify_value(value)


def parse_value(text: Any, symbolic: bool = False) -> Any:
    """解析一个域元素：有理数，或（symbolic=True 时）q 的有理函数"""
    if isinstance(text, (int, Fraction, RatFun)):
        return RatFun.lift(text) if symbolic else text
    try:
        value: Any = parse_rational(text)
    except ParseError:
        value = parse_qexpr(text)
    if symbolic:
        return RatFun.lift(value)
    if isinstance(value, RatFun):
        raise ParseError(f"{text!r} depends on q; pass --field q or use a rational value")
    return value


def parse_mpoly(text: str, variables: Sequence[str]) -> MPoly:
    symbols = {v: MPoly.var(v, variables) for v in variables}
    value = _ExprParser(str(text), symbols).parse()
    if isinstance(value, Fraction):
        return MPoly.constant(value, variables)
    return value.with_vars(variables)


def format_value(x: Any) -> str:
    if isinstance(x, RatFun):
        return format_rational(x.constant_value()) if x.is_constant() else str(x)
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    return str(x)


# ---- 多项式 JSON ----
# [[系数字符串, 指数向量], ...]，指数向量的顺序就是多项式的变量表

def encode_mpoly(f: MPoly) -> List[List[Any]]:
    return [[format_rational(c), list(exps)] for exps, c in f.sorted_terms()]


def decode_mpoly(data: Any, variables: Sequence[str]) -> MPoly:
    if not isinstance(data, list):
        raise ParseError("polynomial JSON must be an array of [coefficient, exponents] pairs")
    try:
        pairs = [(parse_rational(c), [int(e) for e in exps]) for c, exps in data]
    except (TypeError, ValueError) as e:
        raise ParseError(f"malformed polynomial JSON: {e}")
    if any(len(exps) != len(variables) for _, exps in pairs):
        raise ParseError(f"exponent vectors must have length {len(variables)}")
    return from_terms(pairs, variables)


# ---- 曲线与点 ----

def field_name(*values: Any) -> str:
    return "Q(q)" if any(isinstance(v, RatFun) and not v.is_constant() for v in values) else "Q"


def encode_point(point: Any) -> Any:
    if point.is_infinity:
        return INFINITY_TEXT
    return {'X': format_value(point.X), 'Y': format_value(point.Y)}


def decode_point(data: Any, symbolic: bool = False):
    from .curves import CurvePoint, INFINITY
    if data == INFINITY_TEXT:
        return INFINITY
    try:
        return CurvePoint(parse_value(data['X'], symbolic), parse_value(data['Y'], symbolic))
    except (KeyError, TypeError, AttributeError, ValueError) as e:
        raise ParseError(f"malformed point JSON: {e}")


def encode_curve(curve: Any, points: Sequence[Any] = ()) -> Dict[str, Any]:
    return {
        'field': field_name(curve.A, curve.B, *[c for p in points if not p.is_infinity
                                                  for c in (p.X, p.Y)]),
        'A': format_value(curve.A),
        'B': format_value(curve.B),
        'points': [encode_point(p) for p in points]
    }


def decode_curve(data: Mapping[str, Any]):
    from .curves import WeierstrassCurve
    symbolic = data.get('field') == "Q(q)"
    try:
        curve = WeierstrassCurve(parse_value(data['A'], symbolic), parse_value(data['B'], symbolic))
    except KeyError as e:
        raise ParseError(f"malformed curve JSON: missing {e}")
    except (TypeError, AttributeError) as e:
        raise ParseError(f"malformed curve JSON: {e}")
    points = [decode_point(p, symbolic) for p in data.get('points', [])]
    return curve, points
