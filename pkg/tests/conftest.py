"""Shared fixtures: groups are expensive to enumerate, so build once per session."""

import pytest

from glab.groupcore import build_group, parse_group_spec


def _group(text):
    return build_group(parse_group_spec(text))


@pytest.fixture(scope="session")
def cyc5():
    return _group("Cyc(5)")


@pytest.fixture(scope="session")
def cyc6():
    return _group("Cyc(6)")


@pytest.fixture(scope="session")
def cyc7():
    return _group("Cyc(7)")


@pytest.fixture(scope="session")
def cyc12():
    return _group("Cyc(12)")


@pytest.fixture(scope="session")
def ab42():
    return _group("Ab(4,2)")


@pytest.fixture(scope="session")
def sym3():
    return _group("Sym(3)")


@pytest.fixture(scope="session")
def sym4():
    return _group("Sym(4)")


@pytest.fixture(scope="session")
def sym6():
    return _group("Sym(6)")


@pytest.fixture(scope="session")
def alt5():
    return _group("Alt(5)")


@pytest.fixture(scope="session")
def sl25():
    return _group("SL(2,5)")


@pytest.fixture(scope="session")
def sl27():
    return _group("SL(2,7)")


@pytest.fixture(scope="session")
def sl33():
    return _group("SL(3,3)")


@pytest.fixture(scope="session")
def a5xs3():
    return _group("Prod(Alt(5),Sym(3))")
