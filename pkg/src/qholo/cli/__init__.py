from .config import ConfigError, ScenarioConfig, validate_document
from .main import list_presets, main, run
from .report import RunReport, Scalar
from .scenarios import PRESETS
