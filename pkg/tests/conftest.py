"""Make the src layout importable when the package is not installed."""

import importlib.util
import sys
from pathlib import Path

if importlib.util.find_spec("gvks") is None:
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
