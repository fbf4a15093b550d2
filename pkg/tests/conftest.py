import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.error_handler import get_error_handler  # noqa: E402
from core.pipeline import (  # noqa: E402
    example_pipeline,
    example_reference_curve,
    example_reference_points,
)


@pytest.fixture(scope="session")
def symbolic_example():
    """q 为符号的算例流水线（构造较慢，整个会话共用）"""
    return example_pipeline()


@pytest.fixture(scope="session")
def example_at_3():
    return example_pipeline(3)


@pytest.fixture(scope="session")
def reference_curve():
    return example_reference_curve()


@pytest.fixture(scope="session")
def reference_points():
    return example_reference_points()


@pytest.fixture(autouse=True)
def clean_error_counts():
    yield
    get_error_handler().reset_error_counts()
