from .combinatorial import check_combinatorially_visual, triple_constant
from .dynamics import dynamical_checks, iterate, require_self_map
from .errors import ProximityError, LambdaTooLarge, KTooLarge, QuasiMetricViolation, SandwichViolation, MapNotClosed
from .metrization import QuasiMetric, quasi_metric_from_m, chain_metrize, visual_characterization_constant
from .quasisymmetry import PowerDistortion, PowerDistortionFit, SnowflakeFit, fit_power_quasisymmetry, snowflake_check
from .service import ProximityService
from .table import ProximityTable, compute_proximity, infimum_proximity, infimum_gap_violation
