"""Bounds on the bottom of the combinatorial spectrum of PSL(2,Z) for generators {r, u}."""

from .group import IDENTITY, LETTERS, GroupElement, Letter, canonicalize, generator, mul
from .words import evaluate, format_word, parse_word
from .cayley import Ball, build_ball, suffix_sets
from .conetypes import CONE_TYPE_TABLE, type_of, verify_compatibility
from .bounds import Valuation, f_k, optimize_valuation, dirichlet_upper_bound

__version__ = "0.1.0"
