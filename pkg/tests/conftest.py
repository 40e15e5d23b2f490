"""
Shared fixtures for the heavy-tail framework tests

The package is imported as heavy_tail_framework. When it is not installed
(pip install -e .) the src directory is registered under that name so the
tests also run from a plain checkout.
"""

import importlib.util
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
SAMPLE_DATA = ROOT / "sample_data"

try:
    import heavy_tail_framework  # noqa: F401
except ImportError:
    spec = importlib.util.spec_from_file_location(
        "heavy_tail_framework",
        ROOT / "src" / "__init__.py",
        submodule_search_locations=[str(ROOT / "src")],
    )
    module = importlib.util.module_from_spec(spec)
    sys.modules["heavy_tail_framework"] = module
    spec.loader.exec_module(module)

from heavy_tail_framework.core.base_dist import BaseDistribution  # noqa: E402
from heavy_tail_framework.core.generated import GeneratedDistribution  # noqa: E402
from heavy_tail_framework.core.transform import TransformSpec  # noqa: E402

# Generating values of the reference PGML example
PGML_MU = -1.0
PGML_SIGMA = 0.5
PGML_U = 1.5
PGML_V = 1.8
PGML_A = 4.0


@pytest.fixture
def gaussian():
    return BaseDistribution.gaussian()


@pytest.fixture
def pgml_spec():
    return TransformSpec.pgml(mu=PGML_MU, sigma=PGML_SIGMA, u=PGML_U, v=PGML_V, A=PGML_A)


@pytest.fixture
def linear_spec():
    return TransformSpec.linear(mu=0.3, sigma=1.2, A=PGML_A)


@pytest.fixture
def pgml_dist(gaussian, pgml_spec):
    return GeneratedDistribution(gaussian, pgml_spec)


@pytest.fixture
def pgml_sample(pgml_dist):
    return pgml_dist.sample(5000, seed=11)


@pytest.fixture
def t3_sample():
    return BaseDistribution.student_t(3.0).sample(2000, seed=5)


@pytest.fixture
def sample_data_dir():
    return SAMPLE_DATA


@pytest.fixture
def write_csv(tmp_path):
    """Write lines to a CSV file in tmp_path and return its path"""

    def _write(name, lines):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def returns_csv(write_csv):
    """500 t(4) returns scaled to daily size"""
    values = 0.01 * BaseDistribution.student_t(4.0).sample(500, seed=3)
    return write_csv("returns.csv", ["return"] + [f"{v:.10f}" for v in values])


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))
