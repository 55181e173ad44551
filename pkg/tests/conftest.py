from functools import lru_cache

import pytest

from weylfan.fan import build_fan
from weylfan.rootsystem import RootSystem
from weylfan.weyl import WeylGroup


@lru_cache(maxsize=None)
def pipeline(name: str):
    """Root system, enumerated Weyl group and fan, shared across tests."""
    rs = RootSystem.build(name)
    w = WeylGroup.build(rs, enumerate=False)
    w.enumerate(cap=w.chain.order)
    return rs, w, build_fan(rs, w)


@pytest.fixture
def built():
    return pipeline
