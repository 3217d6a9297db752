"""Figure rendering for storage-lifetime sweep CSVs."""

__version__ = "0.1.0"

from .frame import REQUIRED_COLUMNS, SchemaError, SweepFrame
from .plot import STYLES, plot_lifetime
