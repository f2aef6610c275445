from .cover import CoverSequence, Tile, TileId, LevelGeometry, u_w_neighborhood
from .errors import CoverError, NotACover, RootLevelError, EmptyTile, UnknownTile, MissingLambda, FitFailure
from .report import Verdict, Thresholds, ConditionRecord, VerificationReport, judge, tile_witness
from .verify import CoverVerifier, RhoTauNu, QuasiBallBounds, comparability, shrink_ratio, cover_notes
