import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from homsense import hom, optics  # noqa: E402


@pytest.fixture
def params() -> optics.OpticalParams:
    return optics.OpticalParams()


@pytest.fixture
def paths0() -> hom.PathConfig:
    return hom.PathConfig()
