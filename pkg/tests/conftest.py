import numpy as np
import pytest
from dataclasses import replace

from s5frames import catalog


@pytest.fixture(scope="session")
def entries():
    return {name: catalog.get(name) for name in catalog.names()}


def widen_chart(surface):
    """Copy of a catalog surface whose chart includes the origin.

    The catalog charts sit strictly inside periodicity cells; several
    hand-computed fixtures live at (0, 0), so tests widen the chart
    there (the defining formulas are periodic and entire).
    """
    from s5frames.surfaces import ChartDomain
    return replace(surface, chart=ChartDomain(-1.0, 1.0, -1.0, 1.0))


@pytest.fixture(scope="session")
def origin_surfaces(entries):
    return {name: widen_chart(e.surface) for name, e in entries.items()}


def random_traceless(rng, n=1):
    """Traceless (minimal-style) second-fundamental tensors, entries in [-2, 2]."""
    h = np.zeros((n, 3, 2, 2))
    h[:, :, 0, 0] = rng.uniform(-2, 2, (n, 3))
    h[:, :, 0, 1] = rng.uniform(-2, 2, (n, 3))
    h[:, :, 1, 0] = h[:, :, 0, 1]
    h[:, :, 1, 1] = -h[:, :, 0, 0]
    return h if n > 1 else h[0]
