import json

import pytest

from gicmix import ChannelConfig, find_mixed_assignments
from gicmix.cli import figure2_config


@pytest.fixture(scope="session")
def fig2():
    return figure2_config()


@pytest.fixture(scope="session")
def fig2_assignment(fig2):
    assignments = find_mixed_assignments(fig2)
    assert len(assignments) == 1
    return assignments[0]


@pytest.fixture(scope="session")
def counterexample():
    # The symmetric example with the very strong gain into receiver 1 pulled
    # down to 1.05: still strong there, but no receiver-1 role split works.
    h = [[1.0, 4.0, 1.1],
         [1.1, 1.0, 4.0],
         [1.05, 1.1, 1.0]]
    return ChannelConfig(h=h, P=[5.0, 5.0, 5.0])


@pytest.fixture()
def config_file(tmp_path):
    def write(doc, name="channel.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write
