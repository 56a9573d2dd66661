"""Entropy, expansiveness, and centralizer experiments for group actions."""

__version__ = "0.1.0"

from .words import FREE, FREE_ABELIAN, Ball, GroupSpec, Word, ball, reduce_word
from .spaces import CIRCLE, TORUS, Arc, Space, distance, sample_grid, split_arc
from .actions import (
    Action,
    OrbitTable,
    apply_word,
    conjugate_action,
    make_blown_up_cat,
    make_cat_map,
    make_circle_pair,
    make_identity_action,
    make_morse_smale,
    make_rotation,
    make_torus_pair,
    orbit_table,
    parse_action_spec,
)

__all__ = [
    "__version__",
    "FREE",
    "FREE_ABELIAN",
    "Ball",
    "GroupSpec",
    "Word",
    "ball",
    "reduce_word",
    "CIRCLE",
    "TORUS",
    "Arc",
    "Space",
    "distance",
    "sample_grid",
    "split_arc",
    "Action",
    "OrbitTable",
    "apply_word",
    "conjugate_action",
    "make_blown_up_cat",
    "make_cat_map",
    "make_circle_pair",
    "make_identity_action",
    "make_morse_smale",
    "make_rotation",
    "make_torus_pair",
    "orbit_table",
    "parse_action_spec",
]
