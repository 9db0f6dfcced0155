"""Parse scalar expressions such as ``2+i``, ``2*exp(i*pi/4)`` or ``1/sqrt2``.

Expressions built only from integers, ``i`` and ``+ - * /`` (with integer
powers) evaluate exactly to a :class:`GaussianRational` when requested.
Anything else evaluates in floating point.
"""

from __future__ import annotations

import ast
import cmath
import math
import operator
import re

from .numerics import GaussianInt, GaussianRational

_CONSTANTS = {
    "i": GaussianRational(GaussianInt(0, 1)),
    "j": GaussianRational(GaussianInt(0, 1)),
    "I": GaussianRational(GaussianInt(0, 1)),
    "pi": math.pi,
    "e": math.e,
    "sqrt2": math.sqrt(2.0),
}

_FUNCTIONS = {
    "exp": cmath.exp,
    "sqrt": cmath.sqrt,
    "cos": cmath.cos,
    "sin": cmath.sin,
    "tan": cmath.tan,
    "conj": lambda z: complex(z).conjugate(),
    "abs": abs,
}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}

_IMPLICIT_I = re.compile(r"(\d(?:\.\d*)?)\s*([ij])\b")


def _float(x) -> complex:
    return complex(x)


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant):
        v = node.value
        if isinstance(v, bool) or not isinstance(v, (int, float, complex)):
            raise ValueError(f"unsupported literal {v!r}")
        if isinstance(v, int):
            return GaussianRational(GaussianInt(v))
        if isinstance(v, complex) and v.real.is_integer() and v.imag.is_integer():
            return GaussianRational(GaussianInt(int(v.real), int(v.imag)))
        return complex(v)
    if isinstance(node, ast.Name):
        if node.id not in _CONSTANTS:
            raise ValueError(f"unknown name {node.id!r}")
        return _CONSTANTS[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left, right = _eval(node.left), _eval(node.right)
        if isinstance(node.op, ast.Pow):
            if isinstance(left, GaussianRational) and isinstance(right, GaussianRational):
                if right.is_real() and right.den == 1 and right.num.d == 0:
                    return left ** right.num.c
            return _float(left) ** _float(right)
        exact = isinstance(left, GaussianRational) and isinstance(right, GaussianRational)
        if exact:
            return _BINOPS[type(node.op)](left, right)
        return _BINOPS[type(node.op)](_float(left), _float(right))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = _FUNCTIONS.get(node.func.id)
        if fn is None or len(node.args) != 1 or node.keywords:
            raise ValueError(f"unsupported call {node.func.id!r}")
        return complex(fn(_float(_eval(node.args[0]))))
    raise ValueError(f"unsupported expression element {ast.dump(node)}")


def parse_number(text: str, exact: bool = False):
    """Evaluate ``text``; returns ``GaussianRational`` if ``exact`` and possible, else ``complex``."""
    src = _IMPLICIT_I.sub(r"\1*\2", str(text).strip()).replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc
    value = _eval(tree)
    if exact and isinstance(value, GaussianRational):
        return value
    return complex(value)
