import os

import hypothesis
import pytest

from modcount.services import moduli_service

_SUPPRESSED = [hypothesis.HealthCheck.filter_too_much]
hypothesis.settings.register_profile("fast", max_examples=25, deadline=None, suppress_health_check=_SUPPRESSED)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None, suppress_health_check=_SUPPRESSED)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture
def fresh_memo():
    """Clears the recursion and quasi-polynomial memos around a test."""
    moduli_service.clear_memo()
    yield
    moduli_service.clear_memo()
