"""Angle expressions such as ``pi/2 - eps`` evaluated without ``eval``."""

from __future__ import annotations

import ast
import math
import operator
from typing import Mapping

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class AngleError(ValueError):
    pass


def parse_angle(text: str | float | int, params: Mapping[str, float] | None = None) -> float:
    """Evaluate an arithmetic angle expression in radians.

    Names resolve to ``pi`` or to entries of ``params`` (for instance
    ``eps``).  Only ``+ - * / **`` and parentheses are accepted.

    >>> parse_angle("pi/2")
    1.5707963267948966
    >>> parse_angle("pi/2 - eps", {"eps": 0.25})
    1.3207963267948966
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    if not isinstance(text, str):
        raise AngleError(f"angle must be a number or string, got {type(text).__name__}")
    names = {"pi": math.pi}
    names.update(params or {})
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise AngleError(f"malformed angle expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise AngleError(f"unknown name {node.id!r} in {text!r}")
            return float(names[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise AngleError(f"unsupported syntax in angle expression {text!r}")

    try:
        value = ev(tree)
    except ZeroDivisionError as exc:
        raise AngleError(f"division by zero in {text!r}") from exc
    if not math.isfinite(value):
        raise AngleError(f"angle {text!r} is not finite")
    return value
