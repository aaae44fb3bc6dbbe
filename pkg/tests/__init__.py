"""Puts ``src/`` on the path and locates the bundled data files."""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
DATA_DIR = ROOT / "data"
DEFAULT_WORLD = DATA_DIR / "default_world.json"
TWO_OBJECTS = DATA_DIR / "instances" / "two_objects.json"

if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
