from typing import Final

# relative slack allowed when comparing sums of floating distances
TRIANGLE_SLACK: Final[float] = 1e-9
UNIT_TOLERANCE: Final[float] = 1e-12
ROOT_MERGE_TOLERANCE: Final[float] = 1e-7
