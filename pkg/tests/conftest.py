import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def surrogate():
    """The seeded stand-in dataset, built once per session."""
    from stratkit.synthetic import bibtex_surrogate

    return bibtex_surrogate(0)
