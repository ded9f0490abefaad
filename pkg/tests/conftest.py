"""
Global pytest configuration: src/ on the import path and seeded hypothesis profiles.
"""
import os
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# Get the project root directory (parent of tests/)
project_root = Path(__file__).parent.parent

src_path = project_root / "src"
if src_path.exists() and str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

# reproducible property runs in CI; "dev" explores more cases locally
settings.register_profile(
    "ci",
    max_examples=60,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=200, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))
