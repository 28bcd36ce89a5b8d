"""Translation planes from scattered linearized polynomials over finite fields."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    FieldError,
    GuardError,
    NotScatteredError,
    ParseError,
    PreconditionError,
    ScatPlaneError,
)
from .field import FieldSpec, FieldTower, build_field, tower_for  # noqa: E402
from .linpoly import (  # noqa: E402
    LinearizedPoly,
    LinearSet,
    interpolate_graph,
    is_scattered,
    linear_set,
)
from .lp import (  # noqa: E402
    LPParams,
    ejj_equivalent,
    fundamental_hyper_regulus,
    lp_census,
    lp_poly,
    n_lower_bound,
    orbit_count_theorem,
    scattered_criterion,
)
from .plane import (  # noqa: E402
    TranslationPlane,
    collineation_order,
    plane_from_spread,
    planes_isomorphic,
    verify_affine,
)
from .quasifield import Quasifield, build_quasifield, kernel, structure_flags, verify_axioms  # noqa: E402
from .spread import (  # noqa: E402
    HyperRegulus,
    Spread,
    andre_spread,
    desarguesian,
    hyper_regulus_pair,
    pseudoregulus_spread,
    spread_from_poly,
    verify_planar,
)
from .subspace import (  # noqa: E402
    SemilinearMap,
    Subspace2,
    apply_semilinear,
    equivalence_fast,
    equivalence_oracle,
    from_poly,
    is_scattered_subspace,
    normalize_poly,
    orbit_census,
    stabilizer_order,
)
