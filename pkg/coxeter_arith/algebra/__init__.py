"""Exact real algebraic numbers and real number fields."""

from .field import (
    RATIONALS, FieldElement, FieldExtension, NumberField, Probe, Subfield,
    configure, contains, embed, field_with_embeddings, fields_equal,
)
from .parse import algebraic_from_expr
from .real import (
    AlgebraicReal, cos_pi_over, cos_rational_pi, decimal, sqrt_of,
    two_cos_pi_over, two_cos_rational_pi,
)

__all__ = [
    "RATIONALS", "AlgebraicReal", "FieldElement", "FieldExtension", "NumberField",
    "Probe", "Subfield", "algebraic_from_expr", "configure", "contains",
    "cos_pi_over", "cos_rational_pi", "decimal", "embed", "field_with_embeddings",
    "fields_equal", "sqrt_of", "two_cos_pi_over", "two_cos_rational_pi",
]
