import re

import pytest

from polyconf.formats import load_graph
from polyconf.incidence import build_gray_incidence, levi_graph
from polyconf.permgroups import automorphism_group, semi_regular_subgroups_up_to_conjugacy


@pytest.fixture(scope="session")
def gray():
    return build_gray_incidence()


@pytest.fixture(scope="session")
def gray_levi(gray):
    return levi_graph(gray)


@pytest.fixture(scope="session")
def gray_aut(gray_levi):
    return automorphism_group(gray_levi, respect_colors=True)


@pytest.fixture(scope="session")
def gray_classes(gray_aut):
    return semi_regular_subgroups_up_to_conjugacy(gray_aut)


@pytest.fixture(scope="session")
def bundled_levi():
    return load_graph("gray_levi.graph")


def pytest_terminal_summary(terminalreporter):
    rows = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", rep.nodeid)
            if m and rep.when == "call":
                rows.append((int(m.group(1)), "PASS" if key == "passed" else "FAIL"))
    if rows:
        terminalreporter.section("acceptance criteria")
        for n, verdict in sorted(rows):
            terminalreporter.write_line(f"criterion {n}: {verdict}")
