import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _no_cache(monkeypatch):
    """Tests run without a prime cache unless they set one explicitly."""
    monkeypatch.delenv("WG_CACHE_DIR", raising=False)
