import pytest

from posetmodels import ArrowSet, TransferSystem, make_chain


@pytest.fixture(scope="session")
def chain2():
    return make_chain(2)


def ts(n, pairs):
    """Transfer system on chain[n] from its non-identity pairs."""
    l = make_chain(n)
    return TransferSystem(l, ArrowSet.from_pairs(l, pairs, include_identities=True))


def aset(l, pairs, ids=True):
    return ArrowSet.from_pairs(l, pairs, include_identities=ids)
