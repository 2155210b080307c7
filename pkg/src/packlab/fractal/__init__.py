"""Discretized Euclidean laboratory: grid measures, spectra, dimension
estimators, pushforward constructions, and occupancy unions."""

from .dimension import (
    DecayReport,
    ball_growth,
    box_counts,
    box_dimension,
    envelope_decay,
    fit_loglog,
    spherical_decay,
)
from .energy import RieszEnergy, energy
from .measures import (
    GridMeasure,
    GridSet,
    RotationSample,
    ScaleSample,
    cantor_dust_set,
    cantor_intervals,
    cantor_measure,
    cantor_set_1d,
    circle_set,
    plane_slice_measure,
    point_mass,
    product_measure,
    rescale,
    segment_measure,
    segment_set,
    sphere_measure,
    splat,
    uniform_measure,
)
from .pushforward import (
    AffineMap,
    kfold_sum,
    pushforward_dilate,
    pushforward_rotate,
    pushforward_similarity,
    sum_pushforward,
    union_construct,
)
from .spectral import (
    Spectrum,
    ball_average,
    nonuniform_transform,
    sigma_gamma,
    sigma_gamma_zeta,
    sigma_zeta,
    spectrum,
    spherical_average,
)

__all__ = [
    "DecayReport",
    "GridMeasure",
    "GridSet",
    "RieszEnergy",
    "RotationSample",
    "ScaleSample",
    "Spectrum",
    "AffineMap",
    "ball_average",
    "ball_growth",
    "box_counts",
    "box_dimension",
    "cantor_dust_set",
    "cantor_intervals",
    "cantor_measure",
    "cantor_set_1d",
    "circle_set",
    "energy",
    "envelope_decay",
    "fit_loglog",
    "kfold_sum",
    "plane_slice_measure",
    "point_mass",
    "product_measure",
    "pushforward_dilate",
    "pushforward_rotate",
    "pushforward_similarity",
    "rescale",
    "segment_measure",
    "segment_set",
    "sigma_gamma",
    "sigma_gamma_zeta",
    "sigma_zeta",
    "sphere_measure",
    "spectrum",
    "nonuniform_transform",
    "spherical_average",
    "spherical_decay",
    "splat",
    "sum_pushforward",
    "uniform_measure",
    "union_construct",
]
