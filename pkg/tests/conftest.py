import numpy as np
import pytest

from xwigner import oracle as orc
from xwigner.states import PhysicalConfig

STEP = 0.5e-6


@pytest.fixture
def cfg():
    return PhysicalConfig()


@pytest.fixture(params=[0.0, -1.0], ids=["g0", "g-1"])
def cfg_g(request):
    return PhysicalConfig(gamma=request.param)


def sampled(fn, x_out, extent, step=STEP):
    """Sample ``fn`` on an axis aligned with ``x_out`` and wide enough to decay."""
    xs = orc.aligned_axis(np.asarray(x_out, dtype=float), extent, step)
    return orc.sample(fn, xs)


def rel_err(a, b):
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
