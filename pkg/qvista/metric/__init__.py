from .errors import MetricError, NonSymmetric, TriangleViolation, ZeroOffDiagonal, NonZeroDiagonal, SphereError
from .nets import Net, maximal_separated_net, greedy_separated
from .probes import doubling_probe, uniform_perfectness_probe, DoublingProbe, UniformPerfectness
from .space import FiniteMetricSpace, ValidationResult, Axiom, validate_metric, require_valid
from .sphere import SpherePoint, spherical_distance, spherical_distances, spherical_space, to_sphere, from_sphere
