"""Exact Poincare invariants of complex projective surfaces."""

from .engine import (
    PoincarePair,
    basic_classes,
    blowup_transform,
    duality_check,
    hilbert_components,
    lange_count,
    nagata_bound,
    poincare,
    poincare_elliptic,
    poincare_ruled,
    wall_crossing_difference,
    wall_crossing_fibered,
)
from .errors import InvalidInput, InvariantViolation
from .exterior import ExtElement, SkewForm, cap_fundamental, divided_power, theta_std, two_form, wedge
from .lattice import RelationPresentation, classes_equal, enumerate_decompositions, smith_normal_form, twist_group
from .surfaces import build_elliptic, build_log_transform, canonical_class, invariants

__version__ = "0.1.0"
