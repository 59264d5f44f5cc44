"""Exact translation lengths of isometries on crossing and contact graphs of quasi-median graphs."""

from .defgraph import DefGraph, HyperbolicityProfile, clique_number, crossing_connected, has_induced_c4, hyperbolicity_profile
from .dynamics import AxisData, axis_data, classify_on_omega, find_axis_vertex, hqc_exact, is_strongly_contracting, skewers
from .groups import GroupElement, VertexGroupSpec
from .hypermetric import OmegaDistance, OmegaMetric, omega_displacement, omega_distance
from .hyperplanes import HyperplaneHandle, Hyperplanes
from .qm import GraphProductQM, OrientedEdge, StaircaseParams, StaircaseQM
from .space import Budget, BudgetExceeded, LeftMult, Shift, Space
from .translation import TranslationCertificate, single_shot_k, translation_length_omega
from .words import GraphProduct, NormalForm, Syllable, SyllablePoset

__all__ = [
    "AxisData", "Budget", "BudgetExceeded", "DefGraph", "GraphProduct", "GraphProductQM", "GroupElement",
    "HyperbolicityProfile", "HyperplaneHandle", "Hyperplanes", "LeftMult", "NormalForm", "OmegaDistance",
    "OmegaMetric", "OrientedEdge", "Shift", "Space", "StaircaseParams", "StaircaseQM", "Syllable",
    "SyllablePoset", "TranslationCertificate", "VertexGroupSpec", "axis_data", "classify_on_omega",
    "clique_number", "crossing_connected", "find_axis_vertex", "has_induced_c4", "hqc_exact",
    "hyperbolicity_profile", "is_strongly_contracting", "omega_displacement", "omega_distance",
    "single_shot_k", "skewers", "translation_length_omega",
]
