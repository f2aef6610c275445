from .errors import JuliaError, MapSyntaxError, DegreeTooLow, CommonRoots, SeedNotRepelling, RootFindFailure, \
    ResolutionInsufficient, EmptyLevel
from .rational_map import RationalMap, parse_map, merge_roots
from .sampling import JuliaSample, julia_sample, repelling_seed, farthest_point_subset, sample_map, invariance_defect
from .grid import SphereGrid
from .pullback import AmbientRegion, PullbackCover, admissible_cover, pullback_cover
from .tiles import InductionDefects, induce_tiles, induction_defects, region_members
from .probes import DegreeProbe, DistortionConfig, DistortionProbe, degree_probe, distortion_probe, iterated_fiber, lift
from .service import DynamicalCover, JuliaService
