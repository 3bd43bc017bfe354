"""Completeness of exponential systems on the unit cube and the unit ball."""

from .bessel import (
    BesselOrder,
    ZeroTable,
    build_zero_table,
    eval_bessel,
    jv,
    nearest_zero,
    zero_table_for,
)
from .density import (
    PowerLaw,
    Tabulated,
    density_report,
    distance_lattice_check,
    phi_audit,
    realized_distance_scan,
    separation,
    thicken,
    upper_beurling_density,
)
from .errors import ExpolabError
from .indicator_ft import DomainKind, DomainSpec, ft_ball, ft_ball_herz, ft_cube, ft_indicator
from .witness import (
    CompleteCertified,
    FrequencySet,
    Inconclusive,
    Incomplete,
    ball_collinear_analysis,
    completeness_scan,
    cube_incompleteness_witness,
    decide,
    random_tuple_experiment,
)

__all__ = [
    "BesselOrder", "ZeroTable", "build_zero_table", "eval_bessel", "jv", "nearest_zero",
    "zero_table_for", "PowerLaw", "Tabulated", "density_report", "distance_lattice_check",
    "phi_audit", "realized_distance_scan", "separation", "thicken", "upper_beurling_density",
    "ExpolabError", "DomainKind", "DomainSpec", "ft_ball", "ft_ball_herz", "ft_cube",
    "ft_indicator", "CompleteCertified", "FrequencySet", "Inconclusive", "Incomplete",
    "ball_collinear_analysis", "completeness_scan", "cube_incompleteness_witness", "decide",
    "random_tuple_experiment",
]
