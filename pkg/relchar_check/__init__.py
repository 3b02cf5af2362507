"""RelcharCheck - exact verification of unramified local relative characters."""

from .catalog import Catalog, default_catalog, load_catalog
from .config import Settings
from .models import ModelSpec, theta_plus
from .runner import RunReport, run_suite
from .validators import CheckResult, CheckStatus, RelcharError
from .weylsum import relchar, weyl_sum_constant, ws_value

__all__ = [
    "__version__",
    "Settings",
    "Catalog",
    "default_catalog",
    "load_catalog",
    "ModelSpec",
    "theta_plus",
    "weyl_sum_constant",
    "ws_value",
    "relchar",
    "RunReport",
    "run_suite",
    "CheckResult",
    "CheckStatus",
    "RelcharError",
]
__version__ = "1.0.0"
