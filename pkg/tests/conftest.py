from __future__ import annotations

import pytest

from levyrange.utils.logging import reset_logging_for_tests


@pytest.fixture(autouse=True)
def reset_logging_state():
    reset_logging_for_tests()
    yield
    reset_logging_for_tests()
