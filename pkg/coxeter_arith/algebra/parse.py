"""Read closed-form numbers like ``(sqrt(5)+7)/8`` or ``cos(2*pi/7)`` exactly."""

from fractions import Fraction
from typing import Dict, Optional, Union

from sympy import Add, Expr, Mul, Pow, Rational, Symbol, cos, pi, sympify

from ..errors import AlgebraError
from .polys import frac
from .real import AlgebraicReal, cos_rational_pi


def algebraic_from_expr(expr: Union[str, Expr],
                        bindings: Optional[Dict[Symbol, AlgebraicReal]] = None) -> AlgebraicReal:
    """Evaluate an expression built from rationals, sqrt, cos(q*pi), + and * exactly.

    Free symbols are replaced by the algebraic numbers given in ``bindings``.
    """
    bindings = bindings or {}
    if isinstance(expr, str):
        expr = sympify(expr, locals={str(s): s for s in bindings})
    if expr.is_Rational:
        return AlgebraicReal.from_rational(frac(expr))
    if isinstance(expr, Symbol):
        if expr not in bindings:
            raise AlgebraError(f"no value bound to {expr}")
        return bindings[expr]
    if isinstance(expr, Add):
        total = AlgebraicReal.from_rational(0)
        for term in expr.args:
            total = total + algebraic_from_expr(term, bindings)
        return total
    if isinstance(expr, Mul):
        product = AlgebraicReal.from_rational(1)
        for factor in expr.args:
            product = product * algebraic_from_expr(factor, bindings)
        return product
    if isinstance(expr, Pow):
        base, exponent = expr.args
        value = algebraic_from_expr(base, bindings)
        if exponent.is_Integer:
            return value ** int(exponent)
        if exponent.is_Rational and exponent.q == 2:
            return value.sqrt() ** int(exponent.p)
        raise AlgebraError(f"unsupported exponent {exponent} in {expr}")
    if isinstance(expr, cos):
        q = expr.args[0] / pi
        if not isinstance(q, Rational):
            raise AlgebraError(f"cosine of a non-rational multiple of pi: {expr}")
        return cos_rational_pi(Fraction(int(q.p), int(q.q)))
    raise AlgebraError(f"cannot evaluate {expr!r} exactly")
