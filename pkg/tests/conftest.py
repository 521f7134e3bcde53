import pytest

from videval.synth import make_mini_suite


@pytest.fixture(scope="session")
def mini_assets(tmp_path_factory):
    return make_mini_suite(tmp_path_factory.mktemp("mini"))
