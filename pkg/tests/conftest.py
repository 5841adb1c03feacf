import numpy as np
import pytest

from pshoa.geometry import spheroid_from_radii
from pshoa.swf import build_context


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("swf_cache"))


@pytest.fixture(scope="session")
def out_root(tmp_path_factory):
    return tmp_path_factory.mktemp("runs")


@pytest.fixture(scope="session")
def ctx_c5_n24():
    """Double-precision tables at c = 5 up to degree 24 (moderate geometry)."""
    return build_context(5.0, order=24, precision="double")


@pytest.fixture(scope="session")
def paper_setup():
    """Reference geometry: 1 m x 0.05 m spheroid, 0.198 m sphere, 541.8 Hz."""
    params = spheroid_from_radii(1.0, 0.05)
    k = 2.0 * np.pi * 541.8 / 343.0
    return {
        "params": params,
        "k": k,
        "c": k * params.a,
        "sphere_radius": 0.198,
        "xi1": params.xi1,
    }


@pytest.fixture(scope="session")
def ctx_paper_n12(paper_setup, cache_dir):
    """Extended-precision tables at the reference c, degrees to 12."""
    return build_context(paper_setup["c"], order=12, precision="extended",
                         cache_dir=cache_dir)
