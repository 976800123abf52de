"""Incidence configurations, voltage-graph covers and polycyclic straight-line realizations."""

from .celestial import CelestialSymbol, celestial_realization, verify_z9_theorem, z9_weak_gray
from .covers import (FiniteGroup, VoltageGraph, lift, normalize_spanning_tree, quotient, reduced_levi_graph,
                     shift_equivalent)
from .errors import (ClosureError, ConstructionError, DegenerateError, FormatError, GroupError, LabelError,
                     MaterializationError, PolyconfError)
from .geometry import Circle2, Line2, Parabola2, Point2, join, meet
from .incidence import Graph, IncidenceStructure, build_gray_incidence, build_pappus_incidence, dual, levi_graph
from .permgroups import Permutation, PermGroup, automorphism_group, semi_regular_subgroups_up_to_conjugacy
from .realizer import (ConstructionProgram, Realization, audit, build_gray_gg, build_polycyclic_pappus, execute,
                       gg_construction, reciprocate, solve_closure, solve_pappus_rlg)
from .render import RenderSpec, render_svg

__version__ = "0.1.0"
