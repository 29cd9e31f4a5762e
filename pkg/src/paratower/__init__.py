"""Exact intersection pairings, slopes and stability on blow-up towers.

The tower over a base with divisor components carries fiber-point and
exceptional classes at every level; this package computes their pairings
with exact rational arithmetic, transports first Chern classes of
parabolic bundles upstairs, tests Kaehler-cone membership, and decides
slope stability on both sides of the correspondence.
"""

from .bundle import (
    ParabolicBundle,
    SubobjectData,
    c1_upstairs,
    ch_upstairs_r1,
    validate_subobject,
    weights_from_filtration,
)
from .cone import (
    ConeError,
    ConePoint,
    ConeSpec,
    ThresholdReport,
    WeightSpec,
    epsilon_kahler_threshold,
    kxr_check,
    kxx_check,
    omega_class,
    omega_cone_point,
)
from .epsilon import EpsilonPolynomial
from .lattice import (
    Character,
    MultiIndex,
    WeightProfile,
    check_category_weights,
    f_char,
    index_norm,
    pi_project,
    sigma_weight,
    zero_char,
)
from .ring import (
    BaseGeometry,
    TableGapError,
    TowerClass,
    TowerMonomial,
    TowerShape,
    base_class,
    base_pair,
    closed_form_dIJ,
    closed_form_nc,
    closed_form_tdIJ,
    d_class,
    gen_class,
    monomial,
    monomial_str,
    omega_vector_class,
    pair_eval,
    reduce_monomial,
    t_class,
    unit_class,
)
from .slope import SlopeReport, dim1_exact_slope, leading_term_report, par_slope, slope_poly
from .stability import (
    NearZeroReport,
    Scenario,
    StabilityVerdict,
    curve_subobjects,
    equi_stability_at,
    equi_stability_near_zero,
    par_stability,
    theorem_estabilitat_check,
)

__version__ = "0.1.0"
