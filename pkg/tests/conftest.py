import pytest

from presto import corpus


@pytest.fixture(scope="session")
def guard_split():
    return corpus.load_net("guard_split")


@pytest.fixture(scope="session")
def card_a():
    return corpus.load_net("card_a")


@pytest.fixture(scope="session")
def card_b():
    return corpus.load_net("card_b")


@pytest.fixture(scope="session")
def addthree_a():
    return corpus.load_net("addthree_a")


@pytest.fixture(scope="session")
def addthree_b():
    return corpus.load_net("addthree_b")


@pytest.fixture(scope="session")
def jammer_nonpipelined():
    return corpus.load_net("jammer_nonpipelined")


@pytest.fixture(scope="session")
def jammer_pipelined():
    return corpus.load_net("jammer_pipelined")


@pytest.fixture(scope="session")
def racy():
    return corpus.load_net("racy")
