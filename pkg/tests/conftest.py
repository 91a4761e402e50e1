import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from hblm.config import Settings
from hblm.core.rings import RingCtx
from hblm.services.enumeration import EnumerationService
from hblm.services.verification import VerificationService
from tests.strategies import ring

hypothesis_settings.register_profile(
    "hblm", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.load_profile("hblm")


@pytest.fixture
def settings() -> Settings:
    return Settings(WORKERS=1, MAX_CANDIDATES=100_000_000, LOG_LEVEL="WARNING")


@pytest.fixture
def enumeration(settings: Settings) -> EnumerationService:
    return EnumerationService(settings)


@pytest.fixture
def verification(settings: Settings) -> VerificationService:
    return VerificationService(settings, workers=1)


# === Rings used across the suite ===

@pytest.fixture
def f2_e2() -> RingCtx:
    return ring("p=2 e=2")


@pytest.fixture
def f3_e2() -> RingCtx:
    return ring("p=3 e=2")


@pytest.fixture
def f5_e3() -> RingCtx:
    return ring("p=5 e=3")


@pytest.fixture
def f2eps_e2() -> RingCtx:
    return ring("p=2 eps=1 e=2")


@pytest.fixture
def f3eps_e2() -> RingCtx:
    return ring("p=3 eps=1 e=2")


@pytest.fixture
def z9_e2() -> RingCtx:
    return ring("p=3 n=2 e=2")


@pytest.fixture
def f4() -> RingCtx:
    return ring("p=2 f=2 e=1")
