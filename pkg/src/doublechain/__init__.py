"""Double-chain method for forbidden-subposet problems in the Boolean lattice."""

from .certificate import Certificate
from .chains import double_chain, double_lubell_sum, chain_lubell_sum, window_condition, window_poset
from .embedding import embeds_weak, family_poset, is_p_free
from .expr import eval_expr, format_expr, parse_expr
from .extremal import (
    e_composition_bound,
    e_lower_scan,
    e_upper_witness,
    la_exact,
    old_bound,
    upper_bound_theorem4,
    verify_main_theorem,
)
from .family import Family, levels_family, middle_levels_family, sigma
from .poset import Poset, b_value, base_poset, dual, longest_chain, oplus, otimes

__all__ = [
    "Certificate", "Family", "Poset",
    "b_value", "base_poset", "chain_lubell_sum", "double_chain", "double_lubell_sum", "dual",
    "e_composition_bound", "e_lower_scan", "e_upper_witness", "embeds_weak", "eval_expr",
    "family_poset", "format_expr", "is_p_free", "la_exact", "levels_family", "longest_chain",
    "middle_levels_family", "old_bound", "oplus", "otimes", "parse_expr", "sigma",
    "upper_bound_theorem4", "verify_main_theorem", "window_condition", "window_poset",
]
