"""Bousfield localization on chain model structures.

One-step operators L_i and R_i adjoin the weak equivalence i -> i+1 while
keeping cofibrations (left) or fibrations (right) fixed.  Both are
implemented by their closed-form block descriptions, and each call
cross-checks the merged weak equivalences against the independent
closure computation; a mismatch is an engine bug, not a user error.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .core import ArrowSet, iter_bits
from .counting import enumerate_models
from .model import (
    ModelStructure, _block_w_bits, cofibrant_objects, fibrant_objects,
    interval_partition_of,
)
from .transfer import InternalInconsistencyError

Step = tuple[str, int]  # ("L", i) or ("R", i)
Word = tuple[Step, ...]


class MappingSpace(Enum):
    EMPTY = 0
    POINT = 1


def mapping_space(m: ModelStructure, x: int, y: int) -> MappingSpace:
    """The homotopy mapping space between two objects, up to equivalence.

    A point when x and y are weakly equivalent or x < y; empty only when x
    sits strictly above y in a different class.  Equals the hom-set between
    the bifibrant replacements.
    """
    if not m.lattice.is_chain:
        raise ValueError("mapping spaces implemented for chain carriers")
    if (x, y) in m.w or (y, x) in m.w:
        return MappingSpace.POINT
    return MappingSpace.POINT if x < y else MappingSpace.EMPTY


def w_closure(m: ModelStructure, extra: ArrowSet) -> ArrowSet:
    """Least class containing w(m) and extra, closed under composition and
    decomposition.  On a chain this merges interval blocks."""
    l = m.lattice
    rows = l.rows(m.w.bits | extra.bits)
    changed = True
    while changed:
        changed = False
        for x in range(l.size):
            rx = rows[x]
            for y in iter_bits(rx):
                if rows[y] & ~rx:
                    rx |= rows[y]
            if rx != rows[x]:
                rows[x] = rx
                changed = True
        for x in range(l.size):
            for z in iter_bits(rows[x] & ~(1 << x)):
                for b in iter_bits(l.between(x, z)):
                    if not (rows[x] >> b) & 1:
                        rows[x] |= 1 << b
                        changed = True
                    if not (rows[b] >> z) & 1:
                        rows[b] |= 1 << z
                        changed = True
    return ArrowSet(l, l.from_rows(rows))


def w_local_objects(m: ModelStructure, wset: ArrowSet) -> list[int]:
    """Fibrant objects seeing every arrow of wset as a mapping-space equivalence."""
    return [z for z in fibrant_objects(m)
            if all(mapping_space(m, y, z) == mapping_space(m, x, z)
                   for (x, y) in wset.nonidentity_pairs())]


def w_colocal_objects(m: ModelStructure, wset: ArrowSet) -> list[int]:
    """Cofibrant objects seeing every arrow of wset as a mapping-space equivalence."""
    return [z for z in cofibrant_objects(m)
            if all(mapping_space(m, z, x) == mapping_space(m, z, y)
                   for (x, y) in wset.nonidentity_pairs())]


def _merged_blocks(m: ModelStructure, i: int) -> tuple[int, int, int]:
    """(mm, i, j) for the two blocks [mm, i] and [i+1, j] being merged."""
    blocks = interval_partition_of(m).blocks()
    for (lo, hi), (lo2, hi2) in zip(blocks, blocks[1:]):
        if hi == i:
            return lo, i, hi2
    raise InternalInconsistencyError("localization index not on a block boundary")


def _check_merge(m: ModelStructure, i: int, neww: int):
    l = m.lattice
    closed = w_closure(m, ArrowSet.from_pairs(l, [(i, i + 1)])).bits
    if closed != neww:
        raise InternalInconsistencyError(
            "block merge disagrees with the closure computation")


def left_localize(m: ModelStructure, i: int) -> ModelStructure:
    """Adjoin the weak equivalence i -> i+1 keeping the cofibrations fixed."""
    l = m.lattice
    n = l.size - 1
    if not 0 <= i < n:
        raise ValueError(f"index must satisfy 0 <= i < {n}")
    if (i, i + 1) in m.w:
        return m
    mm, _, j = _merged_blocks(m, i)
    neww = m.w.bits | _block_w_bits(n, mm, j)
    _check_merge(m, i, neww)
    ac = neww & m.c.bits
    f = l.rlp(ac)
    return ModelStructure(l, ArrowSet(l, neww), m.c, ArrowSet(l, f))


def right_localize(m: ModelStructure, i: int) -> ModelStructure:
    """Adjoin the weak equivalence i -> i+1 keeping the fibrations fixed.

    New acyclic fibrations are the old ones plus every m' -> j' with
    i < j' <= j and (m', i) already an acyclic fibration; in particular all
    i -> j' appear.
    """
    l = m.lattice
    n = l.size - 1
    if not 0 <= i < n:
        raise ValueError(f"index must satisfy 0 <= i < {n}")
    if (i, i + 1) in m.w:
        return m
    mm, _, j = _merged_blocks(m, i)
    neww = m.w.bits | _block_w_bits(n, mm, j)
    _check_merge(m, i, neww)
    newaf = m.af.bits
    sources = l.cols(m.af.bits)[i]
    for mp in iter_bits(sources):
        for jp in range(i + 1, j + 1):
            newaf |= l.bit(mp, jp)
    c = l.llp(newaf)
    return ModelStructure(l, ArrowSet(l, neww), ArrowSet(l, c), m.f)


def apply_step(m: ModelStructure, step: Step) -> ModelStructure:
    d, i = step
    if d == "L":
        return left_localize(m, i)
    if d == "R":
        return right_localize(m, i)
    raise ValueError(f"unknown direction {d!r}")


def apply_word(m: ModelStructure, word: Word) -> ModelStructure:
    for step in word:
        m = apply_step(m, step)
    return m


def word_str(word: Word) -> str:
    return " ".join(f"{d}{i}" for d, i in word) if word else "-"


def _neighbor_steps(n: int) -> list[Step]:
    steps: list[Step] = []
    for i in range(n):
        steps.append(("L", i))
        steps.append(("R", i))
    return steps


@dataclass(frozen=True)
class LocalizationGraph:
    """All model structures on [n] with their one-step localization edges."""

    n: int
    nodes: tuple[ModelStructure, ...]
    edges: tuple[tuple[int, str, int], ...]
    trivial_index: int
    reachable: frozenset[int]

    def node_index(self, m: ModelStructure) -> int:
        return {node.key(): i for i, node in enumerate(self.nodes)}[m.key()]


def localization_graph(n: int) -> LocalizationGraph:
    """Nodes in enumeration order, labeled L_i/R_i edges, self-loops included."""
    nodes = tuple(enumerate_models(n))
    index = {m.key(): i for i, m in enumerate(nodes)}
    edges = []
    for src, m in enumerate(nodes):
        for d, i in _neighbor_steps(n):
            dst = index[apply_step(m, (d, i)).key()]
            edges.append((src, f"{d}{i}", dst))
    trivial = next(i for i, m in enumerate(nodes) if m.is_trivial)
    seen = {trivial}
    frontier = deque([trivial])
    out = {}
    for src, label, dst in edges:
        out.setdefault(src, []).append(dst)
    while frontier:
        v = frontier.popleft()
        for wv in out.get(v, ()):  # enumeration order is already deterministic
            if wv not in seen:
                seen.add(wv)
                frontier.append(wv)
    return LocalizationGraph(n, nodes, tuple(edges), trivial, frozenset(seen))


def zigzag_from_trivial(m: ModelStructure) -> Word:
    """A shortest localization word from the trivial structure to m.

    Breadth-first with the neighbor order L_0, R_0, L_1, R_1, ..., so the
    returned word is deterministic; every prefix is itself a valid model
    structure by construction.
    """
    from .model import trivial_model
    l = m.lattice
    if not l.is_chain:
        raise ValueError("localization words are defined on chains")
    n = l.size - 1
    target = m.key()
    start = trivial_model(l)
    steps = _neighbor_steps(n)
    seen = {start.key(): (None, None)}
    frontier = deque([start])
    if start.key() == target:
        return ()
    while frontier:
        cur = frontier.popleft()
        for step in steps:
            nxt = apply_step(cur, step)
            k = nxt.key()
            if k in seen:
                continue
            seen[k] = (cur.key(), step)
            if k == target:
                word = []
                while seen[k][1] is not None:
                    prev, st = seen[k]
                    word.append(st)
                    k = prev
                return tuple(reversed(word))
            frontier.append(nxt)
    raise InternalInconsistencyError("structure not reachable from trivial")


def identity_is_left_quillen(a: ModelStructure, b: ModelStructure) -> bool:
    """Whether the identity functor is left Quillen from a to b."""
    return (not a.c.bits & ~b.c.bits) and (not a.ac.bits & ~b.ac.bits)


def left_quillen_edges(n: int) -> tuple[tuple[int, int], ...]:
    """Pairs (i, j) of enumeration indices with identity left Quillen i -> j."""
    nodes = list(enumerate_models(n))
    out = []
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i != j and identity_is_left_quillen(a, b):
                out.append((i, j))
    return tuple(out)
