import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from presentation import parse_presentation  # noqa: E402


@pytest.fixture
def samples():
    return ROOT / "sample_data"


@pytest.fixture
def trefoil():
    return parse_presentation("gp< a, b | r = a^3*b^-2 >")
