"""Exact computations with G2- and SU(3)-structures on Lie algebras."""

from .exterior import AltForm, e, render, wedge, interior
from .liealg import LieAlgebra, Derivation, rank_one_extension
from .g2 import analyze, classify, standard_phi, lee_form, torsion_forms
from .su3 import standard_pair, validate_su3, g2_from_su3, split_exact_lcc
from .conformal import d_theta, lichnerowicz_cohomology, solve_exact, kind, first_kind_solve
from .notation import parse_structure_tuple, parse_form, render_tuple

__version__ = "0.1.0"
