"""Harmonic analysis on the universal one-dimensional solenoid.

Exact character-group arithmetic on the product of the line with the
profinite integers and on its integer quotient, mean-value operators,
coefficient extraction with transversal variation, power-identity checks,
and partial-sum approximation.  See the README for the CLI and the module
map.
"""

__version__ = "0.1.0"

from .errors import DomainError, PrecisionError, SolharmError, SpecParseError
from .rationals import Rational, RationalAngle, angle_add, angle_neg, frac_decompose, reduce
from .profinite import (
    DEFAULT_TOWER,
    ModulusTower,
    ProfiniteInt,
    approx_sequence,
    embed_int,
    haar_average,
    pf_add,
    pf_neg,
    residue,
)
from .characters import (
    ProductCharacter,
    SolenoidCharacter,
    ZhatCharacter,
    descends,
    eval_product,
    eval_zhat,
    haar_pairing,
    solenoid_character,
)
from .funcspace import (
    LeafFunction,
    LimitPeriodicSeries,
    ProductPoly,
    SolenoidPoly,
    SolenoidTerm,
    check_invariance,
    leaf_restrict,
    translation_numbers,
    transversal_continuity_probe,
)
from .meanval import (
    MeanEstimate,
    mean_cesaro,
    mean_comparison_check,
    mean_exact,
    mean_linearity_translation_check,
    mean_window,
    poly_mean_numeric,
    solenoid_mean,
)
from .fourier import (
    Spectrum,
    TransversalFactor,
    approx_report,
    descend_spectrum,
    farey_frequencies,
    leaf_coefficient,
    parseval_check,
    partial_sum,
    spectrum,
    transform,
    transversal_factor,
    uniqueness_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
