import pytest

from flsim import BinLayout, load_scenario, max_range


@pytest.fixture(scope="session")
def scenario1():
    return load_scenario("scenario1")


@pytest.fixture(scope="session")
def scenario2():
    return load_scenario("scenario2")


@pytest.fixture(scope="session")
def s1_layout(scenario1):
    c = scenario1.env.sound_speed()
    return BinLayout.from_range(
        max_range(c, scenario1.sonar.ping_rate_hz),
        scenario1.sonar.bin_length_m,
    )
