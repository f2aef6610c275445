from .errors import BoundaryError, CoverGap, RayViolation
from .geodesics import TieBreak, NaturalGeodesic, geodesic_indices, natural_geodesic, require_ray
from .metric import BoundaryMetricApprox, boundary_metric, diameter_comparability, tie_break_sensitivity
from .checks import Regularity, RegularityCheck, RegularityResult, phi_injectivity_check, regularity_spaces, \
    classify, regularity_records
from .service import BoundaryService
