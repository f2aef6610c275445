from .coloring import ColoredNet, color_separated_set, adjust_radii, dichotomy_violation, ball_members
from .construction import CoverBuilder
from .errors import BuildError, ResolutionExceeded, DoublingUnbounded, UnknownFixture
from .fixtures import (FixtureName, fixture, cantor, interval_dyadic, branching_tree, dyadic_interleaved,
                       sierpinski_gasket, circle_arcs, angle_doubling_map, row_scaled_perturbation)
