"""Exact scalars: rationals and Gaussian rationals.

All ring data lives in Q(i). Rationals are sympy ``QQ`` elements and Gaussian
rationals are ``QQ_I`` elements; both are immutable and always normalized.
This module adds the pieces sympy does not ship: the textual scalar syntax used
by bundle files, ``i_pow`` and parameter-aware expression evaluation.
"""

import re
from typing import Mapping, Optional

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.polyerrors import CoercionFailed

from qcring.core.errors import DivisionByZero, NotInField, ParseError, UnresolvedSymbol

Rational = QQ.dtype
GaussRational = QQ_I.dtype

ZERO = QQ_I.zero
ONE = QQ_I.one
I = QQ_I(0, 1)

_RAT = r"\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"(?P<re>[+-]?{_RAT})")
_IMAG_RE = re.compile(rf"(?P<im>[+-]?(?:{_RAT})?)\*?i")
_COMPLEX_RE = re.compile(rf"(?P<re>[+-]?{_RAT})(?P<im>[+-](?:{_RAT})?)\*?i")

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)
_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[^\W\d]\w*)|(?P<number>[0-9]+)|(?P<op>\*\*|[-+*/^()]))\s*")

# Everything the transformed parser output may call; no builtins.
_EXPRESSION_GLOBALS = {
    "__builtins__": {},
    "Integer": sympy.Integer,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "I": sympy.I,
    "Add": sympy.Add,
    "Mul": sympy.Mul,
    "Pow": sympy.Pow,
}


def rational(numerator: int, denominator: int = 1) -> Rational:
    if denominator == 0:
        raise DivisionByZero(f"rational {numerator}/0")
    return QQ(numerator, denominator)


def gauss(re_part=0, im_part=0) -> GaussRational:
    return QQ_I(re_part, im_part)


def field_op(a: GaussRational, b: GaussRational, op: str) -> GaussRational:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("division by zero in Q(i)")
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def i_pow(n: int) -> GaussRational:
    """i**n for any integer n, i.e. (-1)**(n/2)."""
    return (ONE, I, -ONE, -I)[n % 4]


def conjugate(z: GaussRational) -> GaussRational:
    return QQ_I(z.x, -z.y)


def real_value(z: GaussRational) -> Rational:
    if z.y:
        raise NotInField(f"{format_scalar(z)} is not real")
    return z.x


def to_complex(z: GaussRational) -> complex:
    return complex(_to_float(z.x), _to_float(z.y))


def to_sympy(z: GaussRational) -> sympy.Expr:
    return QQ_I.to_sympy(z)


def from_sympy(expr: sympy.Expr) -> GaussRational:
    try:
        return QQ_I.from_sympy(sympy.expand(expr, complex=True))
    except CoercionFailed as exc:
        raise NotInField(f"{expr} does not lie in Q(i)") from exc


def _to_float(q: Rational) -> float:
    return int(q.numerator) / int(q.denominator)


# Textual syntax

def format_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(z: GaussRational) -> str:
    """Canonical text form: ``a/b``, ``c/d i``, ``a/b+c/d i``; unit imaginary parts print as ``i``."""
    re_part, im_part = z.x, z.y
    if not im_part:
        return format_rational(re_part)
    if im_part == 1:
        imag = "i"
    elif im_part == -1:
        imag = "-i"
    else:
        imag = f"{format_rational(im_part)} i"
    if not re_part:
        return imag
    if not imag.startswith("-"):
        imag = "+" + imag
    return format_rational(re_part) + imag


def parse_rational(text: str) -> Rational:
    value = parse_scalar(text)
    if value.y:
        raise ParseError(f"expected a rational, got {text!r}")
    return value.x


def parse_scalar(text: str) -> GaussRational:
    """Parse the exact scalar syntax; raises ParseError on anything else."""
    value = _match_scalar(text)
    if value is None:
        raise ParseError(f"not an exact scalar: {text!r}")
    return value


def _match_scalar(text: str) -> Optional[GaussRational]:
    compact = "".join(str(text).split())
    match = _REAL_RE.fullmatch(compact)
    if match:
        return QQ_I(_parse_signed_rational(match["re"]), 0)
    match = _IMAG_RE.fullmatch(compact)
    if match:
        return QQ_I(0, _parse_signed_rational(match["im"]))
    match = _COMPLEX_RE.fullmatch(compact)
    if match:
        return QQ_I(_parse_signed_rational(match["re"]), _parse_signed_rational(match["im"]))
    return None


def _parse_signed_rational(token: str) -> Rational:
    sign = -1 if token.startswith("-") else 1
    body = token.lstrip("+-")
    if not body:
        return QQ(sign)
    numerator, _, denominator = body.partition("/")
    denominator_value = int(denominator) if denominator else 1
    if denominator_value == 0:
        raise ParseError(f"zero denominator in {token!r}")
    return QQ(sign * int(numerator), denominator_value)


def evaluate_expression(
    text: str,
    parameters: Optional[Mapping[str, GaussRational]] = None,
    key: Optional[str] = None,
) -> GaussRational:
    """Evaluate a scalar that may reference fixture parameters, e.g. ``8*<K,h>`` or ``2*(g-1)*(-2)^3``.

    Plain scalar syntax is accepted first. Anything else may only contain
    integers, arithmetic operators, parentheses, ``i`` and declared parameter
    names; it is then evaluated by sympy's parser with no builtins in scope.
    """
    direct = _match_scalar(text)
    if direct is not None:
        return direct

    parameters = parameters or {}
    source = str(text)
    local_dict = {"i": sympy.I, "I": sympy.I}
    for index, name in enumerate(sorted(parameters, key=len, reverse=True)):
        value = to_sympy(parameters[name])
        if name.isidentifier():
            local_dict[name] = value
        else:
            placeholder = f"qcparam{index}"
            source = source.replace(name, placeholder)
            local_dict[placeholder] = value

    leftover = re.search(r"<[^<>]*>", source)
    if leftover:
        raise UnresolvedSymbol(leftover.group(0), key)
    _check_tokens(text, source, local_dict, key)

    try:
        expr = parse_expr(
            source,
            local_dict=local_dict,
            global_dict=dict(_EXPRESSION_GLOBALS),
            transformations=_TRANSFORMATIONS,
        )
    except Exception as exc:  # tokenize errors surface under several names
        raise ParseError(f"cannot parse scalar expression {text!r}: {exc}") from exc

    if not isinstance(expr, sympy.Expr):
        raise ParseError(f"{text!r} is not a scalar expression")
    if expr.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise ParseError(f"{text!r} divides by zero")
    if expr.free_symbols:
        symbol = sorted(str(s) for s in expr.free_symbols)[0]
        raise UnresolvedSymbol(symbol, key)
    return from_sympy(expr)


def _check_tokens(text: str, source: str, names: Mapping[str, object], key: Optional[str]) -> None:
    used = []
    position = 0
    while position < len(source):
        match = _TOKEN_RE.match(source, position)
        if match is None or not match.group(0):
            raise ParseError(f"unexpected {source[position]!r} in scalar expression {text!r}")
        if match["name"] is not None:
            used.append(match["name"])
        position = match.end()
    for name in used:
        if name not in names:
            raise UnresolvedSymbol(name, key)
