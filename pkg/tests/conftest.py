import json
import os

import pytest

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURE_DIR = os.path.join(REPO, "fixtures")
PRESET_DIR = os.path.join(REPO, "presets")


def load_fixture(name):
    with open(os.path.join(FIXTURE_DIR, name)) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def airy_pre():
    from ttrec.presets import airy

    return airy(K=4)


@pytest.fixture(scope="session")
def p6_pre():
    from ttrec.presets import painleve6

    return painleve6(K=4)


@pytest.fixture(scope="session")
def mm_pre():
    from ttrec.presets import minimal_model

    return minimal_model(K=4)


@pytest.fixture(scope="session")
def dp_pre():
    from ttrec.presets import double_point_demo

    return double_point_demo(K=4)


@pytest.fixture(scope="session")
def airy_ms(airy_pre):
    from ttrec.correlators import m_series

    return m_series(airy_pre.lax, K=4)


@pytest.fixture(scope="session")
def p6_ms(p6_pre):
    from ttrec.correlators import m_series

    return m_series(p6_pre.lax, K=4)


@pytest.fixture(scope="session")
def mm_ms(mm_pre):
    from ttrec.correlators import m_series

    return m_series(mm_pre.lax, K=4)


@pytest.fixture(scope="session")
def dp_ms(dp_pre):
    from ttrec.correlators import m_series

    return m_series(dp_pre.lax, K=4)


@pytest.fixture(scope="session")
def all_ms(airy_ms, p6_ms, mm_ms):
    return {"airy": airy_ms, "painleve6": p6_ms, "minimal_model_3_2": mm_ms}
