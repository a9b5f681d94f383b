"""Transfer systems and their weak factorization systems.

A transfer system is a reflexive, transitive refinement of <= that is
closed under meet-restriction.  On a finite lattice each one is the right
class of a unique weak factorization system; the left class has a closed
form (complement of the downward extension) as well as a lifting-property
description, and we always compute both and insist they agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .core import (
    ArrowSet, CarrierMismatchError, FiniteLattice, iter_bits, make_chain,
)


class InternalInconsistencyError(AssertionError):
    """Two independent routes to the same answer disagreed: an engine bug."""


@dataclass(frozen=True)
class TransferSystem:
    """A pullback-closed refinement of <=, stored as a full reflexive ArrowSet."""

    lattice: FiniteLattice
    rel: ArrowSet

    def __post_init__(self):
        if self.rel.lattice != self.lattice:
            raise CarrierMismatchError("relation carried by a different lattice")

    @property
    def bits(self) -> int:
        return self.rel.bits

    def pairs(self):
        return self.rel.nonidentity_pairs()

    def __contains__(self, arrow) -> bool:
        return arrow in self.rel

    def __repr__(self) -> str:
        return f"TransferSystem({self.lattice.label}, {self.pairs()!r})"


@dataclass(frozen=True)
class Wfs:
    """A weak factorization system (left class, right class)."""

    left: ArrowSet
    right: ArrowSet

    @property
    def lattice(self) -> FiniteLattice:
        return self.left.lattice


def is_transfer_system(l: FiniteLattice, r: ArrowSet):
    """Check the transfer-system axioms; returns (ok, witness).

    The witness is the first violation in scan order: a missing identity,
    then a transitivity pair, then a restriction instance
    ``("restriction", (x, y), z)`` whose forced arrow (meet(x,z), z) is absent.
    """
    if r.lattice != l:
        raise CarrierMismatchError("arrow set over a different lattice")
    bits = r.bits
    if l.id_bits & ~bits:
        x = next(iter_bits(l.id_bits & ~bits))
        x = l.arrows[x][0]
        return False, ("reflexive", (x, x))
    rows = l.rows(bits)
    for x in range(l.size):
        for y in iter_bits(rows[x]):
            if rows[y] & ~rows[x]:
                z = next(iter_bits(rows[y] & ~rows[x]))
                return False, ("transitive", (x, y), (y, z))
    meet = l.meet
    for x in range(l.size):
        for y in iter_bits(rows[x] & ~(1 << x)):
            for z in iter_bits(l.down[y]):
                m = meet[x][z]
                if not (rows[m] >> z) & 1:
                    return False, ("restriction", (x, y), z)
    return True, None


def transfer_closure(l: FiniteLattice, seed: ArrowSet) -> TransferSystem:
    """Smallest transfer system containing seed (least fixed point; idempotent)."""
    if seed.lattice != l:
        raise CarrierMismatchError("seed over a different lattice")
    bits = _close_bits(l, seed.bits)
    return TransferSystem(l, ArrowSet(l, bits))


def _close_bits(l: FiniteLattice, bits: int) -> int:
    bits |= l.id_bits
    rows = l.rows(bits)
    meet = l.meet
    size = l.size
    changed = True
    while changed:
        changed = False
        for x in range(size):
            rx = rows[x]
            for y in iter_bits(rx):
                if rows[y] & ~rx:
                    rx |= rows[y]
            if rx != rows[x]:
                rows[x] = rx
                changed = True
        for x in range(size):
            for y in iter_bits(rows[x] & ~(1 << x)):
                for z in iter_bits(l.down[y]):
                    m = meet[x][z]
                    if not (rows[m] >> z) & 1:
                        rows[m] |= 1 << z
                        changed = True
    return l.from_rows(rows)


@lru_cache(maxsize=None)
def _chain_system_bits(n: int) -> tuple[int, ...]:
    """All transfer systems on chain[n] as arrow masks, ascending.

    Generated by the pivot recursion: a system on [n] is a system on
    [0..p-1], the pivot p with arrows to everything above it, and a shifted
    system on [p+1..n], for a unique p.  Output-linear in the Catalan count.
    """
    if n < 0:
        return (0,)
    out = []
    for p in range(n + 1):
        left_parts = _chain_system_bits(p - 1)
        right_parts = _chain_system_bits(n - p - 1)
        pivot = _chain_run_bits(n, p)
        for lb in left_parts:
            le = _embed_chain_bits(lb, p - 1, 0, n)
            for rb in right_parts:
                out.append(le | pivot | _embed_chain_bits(rb, n - p - 1, p + 1, n))
    out.sort()
    return tuple(out)


def _chain_base(n: int, a: int) -> int:
    # index of arrow (a, a) on chain[n]; arrow (a, b) sits at base + b - a
    return a * (n + 1) - a * (a - 1) // 2


def _chain_run_bits(n: int, p: int) -> int:
    # arrows (p, p), (p, p+1), ..., (p, n): one contiguous index run
    return ((1 << (n - p + 1)) - 1) << _chain_base(n, p)


def _embed_chain_bits(bits: int, sub_n: int, offset: int, n: int) -> int:
    if sub_n < 0:
        return 0
    out = 0
    for i in iter_bits(bits):
        a, b = _chain_arrow(sub_n, i)
        out |= 1 << (_chain_base(n, a + offset) + b - a)
    return out


@lru_cache(maxsize=None)
def _chain_arrows(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((a, b) for a in range(n + 1) for b in range(a, n + 1))


def _chain_arrow(n: int, i: int) -> tuple[int, int]:
    return _chain_arrows(n)[i]


@lru_cache(maxsize=None)
def _general_system_bits(l: FiniteLattice) -> tuple[int, ...]:
    """All transfer systems on an arbitrary lattice, ascending.

    Breadth-first over the closure lattice: every system is reachable from
    the trivial one by adding a single arrow and re-closing, so the sweep
    is exhaustive without scanning all subsets.
    """
    start = _close_bits(l, 0)
    seen = {start}
    frontier = [start]
    nonid = [i for i, (x, y) in enumerate(l.arrows) if x != y]
    while frontier:
        nxt = []
        for bits in frontier:
            for i in nonid:
                if not (bits >> i) & 1:
                    closed = _close_bits(l, bits | (1 << i))
                    if closed not in seen:
                        seen.add(closed)
                        nxt.append(closed)
        frontier = nxt
    return tuple(sorted(seen))


def enumerate_transfer_systems(l: FiniteLattice) -> Iterator[TransferSystem]:
    """Every transfer system on l exactly once, ascending by canonical bitmask."""
    if l.is_chain:
        masks = _chain_system_bits(l.size - 1)
    else:
        masks = _general_system_bits(l)
    for bits in masks:
        yield TransferSystem(l, ArrowSet(l, bits))


def downward_extension(l: FiniteLattice, r: TransferSystem) -> ArrowSet:
    """E(R) = all z -> y admitting some x with z <= x < y and (x, y) in R."""
    bits = 0
    for (x, y) in r.pairs():
        for z in iter_bits(l.down[x]):
            bits |= l.bit(z, y)
    return ArrowSet(l, bits)


def left_class(l: FiniteLattice, r: TransferSystem) -> ArrowSet:
    """The left class of r's weak factorization system.

    Computed two independent ways (lifting against every member of r, and
    the complement of the downward extension); they must agree.
    """
    lifted = l.llp(r.bits)
    formula = l.all_bits & ~downward_extension(l, r).bits
    if lifted != formula:
        raise InternalInconsistencyError(
            "lifting-derived left class disagrees with extension complement")
    return ArrowSet(l, lifted)


def wfs_from_transfer(l: FiniteLattice, r: TransferSystem) -> Wfs:
    """Package r as the right class of its unique weak factorization system."""
    return Wfs(left=left_class(l, r), right=r.rel)


def verify_wfs(l: FiniteLattice, w: Wfs):
    """Check factorization plus the full lifting square condition.

    Returns (ok, witness).  Retract closure is vacuous in a poset (there are
    no non-trivial retracts) so it is reported true without a scan.  In a
    poset these two checks also force both classes to be lifting-maximal.
    """
    lb, rb = w.left.bits, w.right.bits
    rows_l = l.rows(lb)
    cols_r = l.cols(rb)
    for (a, c) in l.arrows:
        if not rows_l[a] & cols_r[c] & l.between(a, c):
            return False, ("factorization", (a, c))
    blockers = l.blockers
    for f in iter_bits(lb):
        if blockers[f] & rb:
            g = next(iter_bits(blockers[f] & rb))
            return False, ("lifting", l.arrows[f], l.arrows[g])
    return True, None


def is_saturated(l: FiniteLattice, r: TransferSystem) -> bool:
    """Two-out-of-three: on each x <= y <= z, two member pairs force the third."""
    rows = l.rows(r.bits)
    for x in range(l.size):
        rx = rows[x]
        for y in iter_bits(l.up[x] & ~(1 << x)):
            xy = (rx >> y) & 1
            for z in iter_bits(l.up[y] & ~(1 << y)):
                n = xy + ((rows[y] >> z) & 1) + ((rx >> z) & 1)
                if n == 2:
                    return False
    return True


@dataclass(frozen=True)
class WfsPosetReport:
    """The poset of weak factorization systems ordered by right-class inclusion."""

    lattice: FiniteLattice
    systems: tuple[TransferSystem, ...]
    hasse_edges: tuple[tuple[int, int], ...]
    is_lattice: bool


def wfs_poset(n: int) -> WfsPosetReport:
    """All WFS on chain[n] with Hasse diagram and a meet/join existence report."""
    l = make_chain(n)
    systems = tuple(enumerate_transfer_systems(l))
    masks = [s.bits for s in systems]
    k = len(masks)
    below = [0] * k  # element mask of systems contained in i
    for i in range(k):
        for j in range(k):
            if masks[j] & ~masks[i] == 0:
                below[i] |= 1 << j
    above = [0] * k
    for i in range(k):
        for j in iter_bits(below[i]):
            above[j] |= 1 << i
    edges = []
    for i in range(k):
        for j in range(k):
            if i != j and (below[j] >> i) & 1:
                # cover: nothing strictly between i and j
                strict = below[j] & above[i] & ~(1 << i) & ~(1 << j)
                if not strict:
                    edges.append((i, j))
    is_lattice = True
    for i in range(k):
        for j in range(i + 1, k):
            if _poset_bound(below[i] & below[j], below) is None:
                is_lattice = False
            if _poset_bound(above[i] & above[j], above) is None:
                is_lattice = False
    return WfsPosetReport(l, systems, tuple(sorted(edges)), is_lattice)


def _poset_bound(candidates: int, cone: list[int]) -> Optional[int]:
    for z in iter_bits(candidates):
        if not candidates & ~cone[z]:
            return z
    return None


def trivial_system(l: FiniteLattice) -> TransferSystem:
    """The identities-only transfer system."""
    return TransferSystem(l, ArrowSet.identities(l))


def complete_system(l: FiniteLattice) -> TransferSystem:
    """The transfer system containing every comparable pair."""
    return TransferSystem(l, ArrowSet.all(l))
