"""Numerical convex geometry for fractional perimeters: polar bodies of
fractional gauges, radial mean bodies, symmetrization, and a verification
battery for the sharp inequalities connecting them.

The modules are layered: ``constants`` (closed-form special values),
``quadrature`` (sphere grids, singular 1-D integrals, seeded RNG streams),
``bodies`` (convex bodies and star-body operations), ``fields`` (scalar
fields and symmetrization), ``fractional`` (the gauge, perimeters, polar
bodies), ``radialmean`` (radial ``p``-mean bodies), ``verify`` (the check
suites), ``descriptors`` (file formats), ``cli`` (command line).
"""

from .constants import (
    FracParams,
    SpecialValue,
    closed_form_table,
    digamma,
    omega,
    ps_ball,
    radial_mean_ball_ratio,
    sharp_constant,
)
from .errors import (
    ConsistencyError,
    DegenerateInputError,
    DomainError,
    FormatError,
    FracGeoError,
    ParameterError,
    QuadratureFailure,
    RepresentationError,
    UnsupportedError,
)
from .quadrature import (
    SingularIntegrandProfile,
    SphereQuadrature,
    antipodal_indices,
    integrate_singular,
    rng_for,
    sphere_grid,
)
from .bodies import (
    Ball,
    Ellipsoid,
    Polytope,
    RadialTable,
    Zonotope,
    brightness,
    dual_mixed_volume,
    exact_volume,
    gauge,
    linear_image,
    polar_of_convex,
    polar_projection_volume_exact,
    polar_volume,
    projection_body_polytope,
    radial,
    radial_many,
    support,
    surface_measure,
    translate,
    volume,
)
from .fields import (
    IndicatorOfBody,
    RadialProfile,
    VoxelGrid,
    covariogram,
    layer_cake_sides,
    lp_norm,
    random_blob_field,
    schwarz_symmetrize,
    shift_difference,
    steiner_symmetrize,
    total_mass,
    voxelize,
)
from .fractional import (
    FracBody,
    PerimeterEstimate,
    coarea_check,
    frac_perimeter,
    frac_seminorm,
    petty_relation_check,
    polar_projection_body,
    polar_projection_gauge,
    source_digest,
    uniform_radius_bound,
)
from .radialmean import (
    RadialMeanBody,
    gz_link_check,
    radial_mean_body,
    zhang_ratio,
)
from .verify import (
    TOLERANCES,
    VerificationReport,
    resolve_tolerances,
    run_suite,
    standard_bodies,
)

__version__ = "0.1.0"
