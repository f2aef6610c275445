from .errors import FormatError
from .formats import SpaceFile, CoverFile, load_model, save_model, load_space, load_cover, load_thresholds
from .manifest import RunManifest, hash_file
from .report import ReportFormat, canonical, render, render_json, render_text, parse
