import functools
from pathlib import Path

import pytest

from toric_hodge.cli import _polytope_and_parts, parse_input
from toric_hodge.nef import cayley, validate_nef_partition

DATA = Path(__file__).parent / "data"

CI_FIXTURES = ["example1", "example2", "example3", "example4"]


@functools.lru_cache(maxsize=None)
def load(name):
    """(delta, nef partition or None, Cayley pair or None) for a fixture file."""
    data = parse_input(str(DATA / f"{name}.poly"))
    delta, parts = _polytope_and_parts(data)
    if parts is None:
        return delta, None, None
    np_ = validate_nef_partition(delta, parts)
    return delta, np_, cayley(np_)


@pytest.fixture(params=CI_FIXTURES)
def ci_fixture(request):
    return (request.param,) + load(request.param)


@pytest.fixture
def data_dir():
    return DATA
