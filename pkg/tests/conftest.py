"""Shared helpers for the test suite."""

import numpy as np
import pytest


def triangulations_equal(t1, t2, *, bitwise_normals: bool = False) -> bool:
    """Field-by-field equality of two Triangulation objects."""
    same = (np.array_equal(t1.va, t2.va) and np.array_equal(t1.vb, t2.vb)
            and np.array_equal(t1.vc, t2.vc) and np.array_equal(t1.nab, t2.nab)
            and np.array_equal(t1.nac, t2.nac) and np.array_equal(t1.nbc, t2.nbc)
            and np.array_equal(t1.points, t2.points)
            and np.array_equal(t1.source_ids, t2.source_ids))
    if not same:
        return False
    if bitwise_normals:
        return np.array_equal(t1.normals.view(np.int64), t2.normals.view(np.int64))
    return np.allclose(t1.normals, t2.normals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
