import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from schwarzmult.series import build_from_spec  # noqa: E402


@lru_cache(maxsize=None)
def fn(spec: str, dilatation: bool = False):
    return build_from_spec(spec, with_dilatation=dilatation)


@pytest.fixture(scope="session")
def get_fn():
    return fn
