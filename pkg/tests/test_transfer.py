"""Transfer systems, closures, enumeration, and weak factorization systems."""

import pytest

from posetmodels import (
    ArrowSet, TransferSystem, Wfs, catalan, complete_system,
    downward_extension, enumerate_transfer_systems, is_saturated,
    is_transfer_system, left_class, make_chain, make_grid,
    oracle_transfer_systems, transfer_closure, trivial_system, verify_wfs,
    wfs_from_transfer, wfs_poset,
)
from conftest import aset, ts

# The five right classes on [2] with their left classes, in the order
# (trivial), (0->1), (1->2), (0->1 and 0->2), (complete).
TABLE_ON_CHAIN2 = [
    ([], [(0, 1), (0, 2), (1, 2)]),
    ([(0, 1)], [(0, 2), (1, 2)]),
    ([(1, 2)], [(0, 1)]),
    ([(0, 1), (0, 2)], [(1, 2)]),
    ([(0, 1), (0, 2), (1, 2)], []),
]


def test_is_transfer_system_examples(chain2):
    ok, wit = is_transfer_system(chain2, aset(chain2, []))
    assert ok and wit is None
    ok, wit = is_transfer_system(chain2, aset(chain2, [(0, 2)]))
    assert not ok
    assert wit == ("restriction", (0, 2), 1)  # forces (min(0,1), 1) = (0, 1)
    ok, _ = is_transfer_system(chain2, aset(chain2, [(0, 1), (0, 2), (1, 2)]))
    assert ok


def test_transfer_closure_examples(chain2):
    closed = transfer_closure(chain2, aset(chain2, [(0, 2)], ids=False))
    assert closed.pairs() == [(0, 1), (0, 2)]
    assert is_transfer_system(chain2, closed.rel)[0]

    c3 = make_chain(3)
    assert transfer_closure(c3, ArrowSet.empty(c3)).pairs() == []

    g = make_grid(1, 1)
    closed = transfer_closure(g, aset(g, [(0, 3)], ids=False))
    assert set(closed.pairs()) == {(0, 1), (0, 2), (0, 3)}


def test_transfer_closure_laws():
    # extensive and idempotent on every seed of chain[4]; monotone under
    # single-arrow additions (which generate the general case)
    l = make_chain(3)
    nonid = [a for a in l.arrows if a[0] != a[1]]
    for mask in range(1 << len(nonid)):
        seed = ArrowSet.from_pairs(
            l, [a for k, a in enumerate(nonid) if (mask >> k) & 1])
        closed = transfer_closure(l, seed)
        assert seed.bits & ~closed.bits == 0
        assert transfer_closure(l, closed.rel).bits == closed.bits
        for a in nonid:
            bigger = transfer_closure(l, seed | ArrowSet.from_pairs(l, [a]))
            assert closed.bits & ~bigger.bits == 0


def test_enumeration_matches_table_on_chain2(chain2):
    systems = list(enumerate_transfer_systems(chain2))
    assert len(systems) == 5
    got = {frozenset(s.pairs()) for s in systems}
    assert got == {frozenset(r) for r, _ in TABLE_ON_CHAIN2}


def test_enumeration_counts_are_catalan():
    for n in range(10):
        count = sum(1 for _ in enumerate_transfer_systems(make_chain(n)))
        assert count == catalan(n + 1)


def test_enumeration_is_sorted_and_valid():
    for n in range(6):
        l = make_chain(n)
        masks = [s.bits for s in enumerate_transfer_systems(l)]
        assert masks == sorted(masks)
        for s in enumerate_transfer_systems(l):
            assert is_transfer_system(l, s.rel)[0]


def test_subset_scan_oracle_agrees_on_chains():
    for n in range(6):
        l = make_chain(n)
        scanned = {s.bits for s in oracle_transfer_systems(l)}
        generated = {s.bits for s in enumerate_transfer_systems(l)}
        assert scanned == generated


def test_general_enumeration_agrees_with_scan_on_grids():
    for l in (make_grid(1, 1), make_grid(1, 2)):
        scanned = {s.bits for s in oracle_transfer_systems(l)}
        generated = {s.bits for s in enumerate_transfer_systems(l)}
        assert scanned == generated
    assert len(list(enumerate_transfer_systems(make_grid(1, 1)))) == 10
    assert len(list(enumerate_transfer_systems(make_grid(1, 2)))) == 68


def test_downward_extension_examples(chain2):
    assert set(downward_extension(chain2, ts(2, [(1, 2)])).pairs()) == \
        {(1, 2), (0, 2)}
    assert downward_extension(chain2, trivial_system(chain2)).pairs() == []
    assert set(downward_extension(chain2, complete_system(chain2)).pairs()) == \
        {(0, 1), (0, 2), (1, 2)}


def test_left_class_examples(chain2):
    assert set(left_class(chain2, trivial_system(chain2)).pairs()) == \
        set(chain2.arrows)
    assert left_class(chain2, complete_system(chain2)).nonidentity_pairs() == []
    assert left_class(chain2, ts(2, [(0, 1)])).nonidentity_pairs() == \
        [(0, 2), (1, 2)]


def test_left_class_dual_routes_agree_everywhere():
    # lifting-derived left class equals the extension complement, n <= 5
    for n in range(6):
        l = make_chain(n)
        for s in enumerate_transfer_systems(l):
            lifted = l.llp(s.bits)
            formula = l.all_bits & ~downward_extension(l, s).bits
            assert lifted == formula
            left_class(l, s)  # also exercises the internal assertion


def test_verify_wfs():
    for n in range(6):
        l = make_chain(n)
        for s in enumerate_transfer_systems(l):
            ok, wit = verify_wfs(l, wfs_from_transfer(l, s))
            assert ok, wit
    l1 = make_chain(1)
    ids = Wfs(ArrowSet.identities(l1), ArrowSet.identities(l1))
    ok, wit = verify_wfs(l1, ids)
    assert not ok
    assert wit == ("factorization", (0, 1))


def test_table_on_chain2_pairs(chain2):
    by_right = {frozenset(s.pairs()): s for s in enumerate_transfer_systems(chain2)}
    for right, left in TABLE_ON_CHAIN2:
        w = wfs_from_transfer(chain2, by_right[frozenset(right)])
        assert set(w.left.nonidentity_pairs()) == set(left)
        assert verify_wfs(chain2, w)[0]


def test_is_saturated_examples(chain2):
    assert is_saturated(chain2, complete_system(chain2))
    assert not is_saturated(chain2, ts(2, [(0, 1), (0, 2)]))
    assert is_saturated(chain2, trivial_system(chain2))


def test_saturated_chain_counts_and_cover_generation():
    for n in range(7):
        l = make_chain(n)
        saturated = [s for s in enumerate_transfer_systems(l)
                     if is_saturated(l, s)]
        assert len(saturated) == 2 ** n
        # each saturated system is pinned by its covering relations
        covers = {frozenset((i, i + 1) for i in range(n) if (i, i + 1) in s)
                  for s in saturated}
        assert len(covers) == 2 ** n


def test_wfs_poset_pentagon():
    report = wfs_poset(2)
    assert len(report.systems) == 5
    assert report.is_lattice
    tag = {frozenset(s.pairs()): i for i, s in enumerate(report.systems)}
    t1 = tag[frozenset()]
    t2 = tag[frozenset({(0, 1)})]
    t3 = tag[frozenset({(1, 2)})]
    t4 = tag[frozenset({(0, 1), (0, 2)})]
    t5 = tag[frozenset({(0, 1), (0, 2), (1, 2)})]
    expected = {(t1, t2), (t2, t4), (t4, t5), (t1, t3), (t3, t5)}
    assert set(report.hasse_edges) == expected
    assert len(report.hasse_edges) == 5


def test_wfs_poset_small():
    assert len(wfs_poset(0).systems) == 1
    assert wfs_poset(0).hasse_edges == ()
    report = wfs_poset(3)
    assert len(report.systems) == 14
    assert report.is_lattice


@pytest.mark.parametrize("n", range(5))
def test_wfs_poset_is_lattice_up_to_5(n):
    assert wfs_poset(n).is_lattice


def test_wfs_poset_n5_is_lattice():
    assert wfs_poset(5).is_lattice
