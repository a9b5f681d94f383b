"""Model and premodel structures on finite lattices.

A model structure is stored by its (W, C, F) arrow sets with AC = W∩C and
AF = W∩F derived.  Construction goes the other way: a choice of weak
equivalence blocks plus one transfer system per block pins AF and AC, and
C/F are recovered by lifting.  Running both directions keeps the lifting
engine honest.

verify_model checks the axioms in a fixed order (composition, 2-out-of-3,
both factorizations, both lifting conditions) and reports the first failure
with a concrete witness; the retract axiom is vacuous in a poset.
Decomposability of W is a theorem on lattices, so it is evaluated and
reported separately rather than folded into the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping, Optional, Sequence

from .core import ArrowSet, FiniteLattice, from_leq_pairs, iter_bits, make_chain
from .transfer import (
    InternalInconsistencyError, TransferSystem, _chain_system_bits,
    is_transfer_system, left_class,
)
from . import transfer as _transfer


@dataclass(frozen=True)
class IntervalPartition:
    """Blocks [0,a1],[a1+1,a2],...,[ak+1,n] of the chain [n], given by cuts ai."""

    n: int
    cuts: tuple[int, ...]

    def __post_init__(self):
        if list(self.cuts) != sorted(set(self.cuts)):
            raise ValueError("cuts must be strictly increasing")
        if self.cuts and not (0 <= self.cuts[0] and self.cuts[-1] < self.n):
            raise ValueError("cuts must lie in [0, n)")

    def blocks(self) -> list[tuple[int, int]]:
        out = []
        lo = 0
        for a in self.cuts:
            out.append((lo, a))
            lo = a + 1
        out.append((lo, self.n))
        return out

    def __len__(self) -> int:
        return len(self.cuts) + 1


def all_interval_partitions(n: int) -> Iterator[IntervalPartition]:
    """The 2^n interval partitions of [n], in lex order of their cut tuples."""
    def rec(start: int) -> Iterator[tuple[int, ...]]:
        yield ()
        for a in range(start, n):
            for rest in rec(a + 1):
                yield (a,) + rest
    for cuts in rec(0):
        yield IntervalPartition(n, cuts)


@dataclass(frozen=True)
class ContractibleSelection:
    """An interval partition plus one transfer system per block."""

    partition: IntervalPartition
    block_systems: tuple[TransferSystem, ...]

    def __post_init__(self):
        blocks = self.partition.blocks()
        if len(blocks) != len(self.block_systems):
            raise ValueError("one transfer system per block required")
        for (lo, hi), sys in zip(blocks, self.block_systems):
            if sys.lattice.size != hi - lo + 1 or not sys.lattice.is_chain:
                raise ValueError(
                    f"block [{lo},{hi}] needs a system on chain[{hi - lo}]")


@dataclass(frozen=True)
class ModelStructure:
    """Weak equivalences, cofibrations and fibrations on one lattice."""

    lattice: FiniteLattice
    w: ArrowSet
    c: ArrowSet
    f: ArrowSet

    @cached_property
    def ac(self) -> ArrowSet:
        return ArrowSet(self.lattice, self.w.bits & self.c.bits)

    @cached_property
    def af(self) -> ArrowSet:
        return ArrowSet(self.lattice, self.w.bits & self.f.bits)

    def key(self) -> tuple[int, int, int]:
        return (self.w.bits, self.c.bits, self.f.bits)

    @property
    def is_trivial(self) -> bool:
        return self.w.bits == self.lattice.id_bits

    @property
    def is_contractible(self) -> bool:
        return self.w.bits == self.lattice.all_bits

    def classification(self) -> str:
        if self.is_trivial:
            return "trivial"
        if self.is_contractible:
            return "contractible"
        return "other"

    def __repr__(self) -> str:
        return (f"ModelStructure({self.lattice.label}, w={self.w.nonidentity_pairs()}, "
                f"c={self.c.nonidentity_pairs()}, f={self.f.nonidentity_pairs()})")


@dataclass(frozen=True)
class PremodelStructure:
    """Two nested weak factorization systems (C, AF) and (AC, F)."""

    lattice: FiniteLattice
    c: ArrowSet
    ac: ArrowSet
    f: ArrowSet
    af: ArrowSet


@dataclass(frozen=True)
class ModelReport:
    """Outcome of verify_model: first failed axiom, witness, and extras."""

    ok: bool
    axiom: Optional[str]
    witness: Optional[tuple]
    decomposable: bool

    def __bool__(self) -> bool:
        return self.ok


def trivial_model(l: FiniteLattice) -> ModelStructure:
    """Only identities are weak equivalences; every map is a cofibration and fibration."""
    return ModelStructure(l, ArrowSet.identities(l), ArrowSet.all(l), ArrowSet.all(l))


# -- construction from contractible submodels --------------------------------


@lru_cache(maxsize=None)
def _chain_left_bits(m: int) -> tuple[int, ...]:
    """Left classes aligned with _chain_system_bits(m), as chain[m] arrow masks."""
    l = make_chain(m)
    out = []
    for bits in _chain_system_bits(m):
        out.append(left_class(l, TransferSystem(l, ArrowSet(l, bits))).bits)
    return tuple(out)


def _embed_block_bits(bits: int, m: int, lo: int, target: FiniteLattice) -> int:
    """Re-index chain[m] arrows into a chain at offset lo."""
    sub = make_chain(m)
    out = 0
    for i in iter_bits(bits):
        a, b = sub.arrows[i]
        out |= target.bit(a + lo, b + lo)
    return out


@lru_cache(maxsize=None)
def _block_w_bits(n: int, lo: int, hi: int) -> int:
    l = make_chain(n)
    bits = 0
    for x in range(lo, hi + 1):
        for y in range(x, hi + 1):
            bits |= l.bit(x, y)
    return bits


@lru_cache(maxsize=None)
def _block_choices(n: int, lo: int, hi: int) -> tuple[tuple[int, int], ...]:
    """Per transfer system on the block: (embedded AF bits, embedded AC bits)."""
    m = hi - lo
    l = make_chain(n)
    systems = _chain_system_bits(m)
    lefts = _chain_left_bits(m)
    return tuple(
        (_embed_block_bits(s, m, lo, l), _embed_block_bits(lc, m, lo, l))
        for s, lc in zip(systems, lefts)
    )


def from_selection(sel: ContractibleSelection) -> ModelStructure:
    """Extend a choice of contractible submodels to the unique model structure."""
    n = sel.partition.n
    l = make_chain(n)
    w = 0
    af = 0
    ac = 0
    for (lo, hi), sys in zip(sel.partition.blocks(), sel.block_systems):
        m = hi - lo
        w |= _block_w_bits(n, lo, hi)
        af |= _embed_block_bits(sys.bits, m, lo, l)
        block_l = sys.lattice
        ac |= _embed_block_bits(left_class(block_l, sys).bits, m, lo, l)
    c = l.llp(af)
    f = l.rlp(ac)
    return ModelStructure(l, ArrowSet(l, w), ArrowSet(l, c), ArrowSet(l, f))


def interval_partition_of(m: ModelStructure) -> IntervalPartition:
    """The weak-equivalence blocks of a chain model structure."""
    l = m.lattice
    if not l.is_chain:
        raise ValueError("interval partitions only exist on chains")
    n = l.size - 1
    cuts = tuple(a for a in range(n) if (a, a + 1) not in m.w)
    return IntervalPartition(n, cuts)


def restrict_to_block(m: ModelStructure, block: tuple[int, int]) -> ModelStructure:
    """The contractible model structure induced on one weak-equivalence class."""
    if block not in interval_partition_of(m).blocks():
        raise ValueError(f"{block} is not a weak-equivalence class")
    lo, hi = block
    sub = make_chain(hi - lo)
    def restrict(bits: int) -> int:
        out = 0
        for x in range(lo, hi + 1):
            for y in range(x, hi + 1):
                if (bits >> m.lattice.index(x, y)) & 1:
                    out |= sub.bit(x - lo, y - lo)
        return out
    return ModelStructure(sub, ArrowSet(sub, restrict(m.w.bits)),
                          ArrowSet(sub, restrict(m.c.bits)),
                          ArrowSet(sub, restrict(m.f.bits)))


def selection_of(m: ModelStructure) -> ContractibleSelection:
    """Recover the interval partition and per-block transfer systems."""
    part = interval_partition_of(m)
    systems = []
    for block in part.blocks():
        r = restrict_to_block(m, block)
        systems.append(TransferSystem(r.lattice, r.af))
    return ContractibleSelection(part, tuple(systems))


# -- axiom verification -------------------------------------------------------


def verify_model(l: FiniteLattice, w: ArrowSet, c: ArrowSet, f: ArrowSet) -> ModelReport:
    """Check the model-structure axioms for the triple (w, c, f).

    Returns the first violated axiom, in the fixed order: composition
    closure (with identities) of each class, 2-out-of-3 for w, both MC5
    factorizations, both MC4 lifting conditions.  The retract axiom is
    vacuously true in a poset.  Decomposability of w is reported in its own
    field: on a lattice it must hold for any true model structure, so a
    False there flags an engine bug rather than a failed candidate.
    """
    wb, cb, fb = w.bits, c.bits, f.bits
    acb = wb & cb
    afb = wb & fb
    rows_w = l.rows(wb)
    decomposable = _decomposability_witness(l, rows_w) is None

    for name, bits, rows in (("w", wb, rows_w), ("c", cb, None), ("f", fb, None)):
        if l.id_bits & ~bits:
            i = next(iter_bits(l.id_bits & ~bits))
            return ModelReport(False, "composition",
                               ("identity", name, l.arrows[i][0]), decomposable)
        if rows is None:
            rows = l.rows(bits)
        wit = _composition_witness(l, rows)
        if wit is not None:
            x, y, z = wit
            return ModelReport(False, "composition", (name, (x, y), (y, z)),
                               decomposable)

    wit = _two_of_three_witness(l, rows_w)
    if wit is not None:
        return ModelReport(False, "two_out_of_three", wit, decomposable)

    rows_c = l.rows(cb)
    cols_af = l.cols(afb)
    for (a, z) in l.arrows:
        if not rows_c[a] & cols_af[z] & l.between(a, z):
            return ModelReport(False, "mc5_cof_af", ("factorization", (a, z)),
                               decomposable)
    rows_ac = [rows_w[x] & rows_c[x] for x in range(l.size)]
    cols_f = l.cols(fb)
    for (a, z) in l.arrows:
        if not rows_ac[a] & cols_f[z] & l.between(a, z):
            return ModelReport(False, "mc5_ac_fib", ("factorization", (a, z)),
                               decomposable)

    blockers = l.blockers
    for i in iter_bits(cb):
        if blockers[i] & afb:
            g = next(iter_bits(blockers[i] & afb))
            return ModelReport(False, "mc4", ("c-af", l.arrows[i], l.arrows[g]),
                               decomposable)
    for i in iter_bits(acb):
        if blockers[i] & fb:
            g = next(iter_bits(blockers[i] & fb))
            return ModelReport(False, "mc4", ("ac-f", l.arrows[i], l.arrows[g]),
                               decomposable)

    return ModelReport(True, None, None, decomposable)


def _composition_witness(l, rows) -> Optional[tuple[int, int, int]]:
    for x in range(l.size):
        rx = rows[x]
        m = rx
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            bad = rows[y] & ~rx
            if bad:
                z = (bad & -bad).bit_length() - 1
                return (x, y, z)
    return None


def _two_of_three_witness(l, rows_w) -> Optional[tuple]:
    size = l.size
    # f,g in W => gf in W is composition closure of W, checked already when
    # this runs, but re-checked here so the function stands alone
    wit = _composition_witness(l, rows_w)
    if wit is not None:
        x, y, z = wit
        return ("composite", (x, y), (y, z), (x, z))
    for a in range(size):
        ra = rows_w[a]
        # g, gf in W => f in W
        cand = l.up[a] & ~ra
        m = cand
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            if rows_w[b] & ra:
                cbit = rows_w[b] & ra
                z = (cbit & -cbit).bit_length() - 1
                return ("left", (a, b), (b, z), (a, z))
        # f, gf in W => g in W
        m = ra & ~(1 << a)
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            bad = ra & l.up[b] & ~rows_w[b]
            if bad:
                z = (bad & -bad).bit_length() - 1
                return ("right", (a, b), (b, z), (a, z))
    return None


def _decomposability_witness(l, rows_w) -> Optional[tuple]:
    for a in range(l.size):
        m = rows_w[a] & ~(1 << a)
        while m:
            low = m & -m
            z = low.bit_length() - 1
            m ^= low
            mid = l.between(a, z)
            if mid & ~rows_w[a]:
                b = next(iter_bits(mid & ~rows_w[a]))
                return ((a, z), "through", b)
            for b in iter_bits(mid & ~(1 << a) & ~(1 << z)):
                if not (rows_w[b] >> z) & 1:
                    return ((a, z), "through", b)
    return None


def verify_model_structure(m: ModelStructure) -> ModelReport:
    return verify_model(m.lattice, m.w, m.c, m.f)


# -- replacements and the homotopy category -----------------------------------


def _require_chain(m: ModelStructure):
    if not m.lattice.is_chain:
        raise ValueError("operation defined for chain carriers only")


def r_max(m: ModelStructure, x: int) -> int:
    """The maximal object reachable from x by an acyclic cofibration; fibrant."""
    _require_chain(m)
    return max(iter_bits(m.lattice.rows(m.ac.bits)[x]))


def q_min(m: ModelStructure, x: int) -> int:
    """The minimal object mapping onto x by an acyclic fibration; cofibrant."""
    _require_chain(m)
    return min(iter_bits(m.lattice.cols(m.af.bits)[x]))


def bifibrant_replacement(m: ModelStructure, x: int) -> int:
    """The unique bifibrant object weakly equivalent to x."""
    a = r_max(m, q_min(m, x))
    b = q_min(m, r_max(m, x))
    if a != b:
        raise InternalInconsistencyError("replacement order changed the result")
    return a


def fibrant_objects(m: ModelStructure) -> list[int]:
    l = m.lattice
    return [x for x in range(l.size) if (x, l.top) in m.f]


def cofibrant_objects(m: ModelStructure) -> list[int]:
    l = m.lattice
    return [x for x in range(l.size) if (l.bottom, x) in m.c]


def bifibrant_objects(m: ModelStructure) -> list[int]:
    cof = set(cofibrant_objects(m))
    return [x for x in fibrant_objects(m) if x in cof]


def homotopy_category(m: ModelStructure) -> tuple[int, tuple[int, ...]]:
    """(k, bifibrant objects): the homotopy category of a chain structure is [k]."""
    _require_chain(m)
    blocks = interval_partition_of(m).blocks()
    bif = bifibrant_objects(m)
    per_block = []
    for lo, hi in blocks:
        inside = [x for x in bif if lo <= x <= hi]
        if len(inside) != 1:
            raise InternalInconsistencyError(
                f"block [{lo},{hi}] has {len(inside)} bifibrant objects")
        per_block.append(inside[0])
    return len(blocks) - 1, tuple(per_block)


# -- premodel structures ------------------------------------------------------


def premodel_from_wfs_pair(w1, w2) -> PremodelStructure:
    """Pair two WFS with included right classes: (C, AF) = w1, (AC, F) = w2."""
    l = w1.lattice
    if w2.lattice != l:
        raise ValueError("weak factorization systems on different lattices")
    if w1.right.bits & ~w2.right.bits:
        raise ValueError("right class of the first system must be included in the second")
    return PremodelStructure(l, c=w1.left, af=w1.right, ac=w2.left, f=w2.right)


def composite_weq(p: PremodelStructure) -> ArrowSet:
    """W = AF∘AC, the candidate weak equivalences of a premodel structure."""
    l = p.lattice
    rows_ac = l.rows(p.ac.bits)
    rows_af = l.rows(p.af.bits)
    rows_w = [0] * l.size
    for x in range(l.size):
        r = 0
        for b in iter_bits(rows_ac[x]):
            r |= rows_af[b]
        rows_w[x] = r
    return ArrowSet(l, l.from_rows(rows_w))


def satisfies_2of3(p: PremodelStructure) -> bool:
    """Whether AF∘AC satisfies 2-out-of-3, i.e. the premodel is a model structure."""
    l = p.lattice
    rows_w = l.rows(composite_weq(p).bits)
    return _two_of_three_witness(l, rows_w) is None


def model_from_premodel(p: PremodelStructure) -> ModelStructure:
    return ModelStructure(p.lattice, composite_weq(p), p.c, p.f)


# -- structural checks ---------------------------------------------------------


def check_properness(m: ModelStructure) -> bool:
    """Weak equivalences stable under pushout (join) and pullback (meet)."""
    l = m.lattice
    rows_w = l.rows(m.w.bits)
    for (x, y) in m.w.pairs():
        for z in iter_bits(l.up[x]):
            if not (rows_w[z] >> l.join[y][z]) & 1:
                return False
        for z in iter_bits(l.down[y]):
            mz = l.meet[x][z]
            if not (rows_w[mz] >> z) & 1:
                return False
    return True


def check_monoidal(m: ModelStructure, flavor: str) -> bool:
    """Pushout-product and unit axioms for min- or max-monoidal structure."""
    _require_chain(m)
    l = m.lattice
    if flavor == "cartesian":
        tensor = lambda a, b: min(a, b)
        unit = l.top
    elif flavor == "cocartesian":
        tensor = lambda a, b: max(a, b)
        unit = l.bottom
    else:
        raise ValueError("flavor must be 'cartesian' or 'cocartesian'")
    cof = m.c.pairs()
    ac_bits = m.ac.bits
    for (x, y) in cof:
        for (x2, y2) in cof:
            dom = max(tensor(x, y2), tensor(y, x2))
            cod = tensor(y, y2)
            if (dom, cod) not in m.c:
                return False
            f_acyclic = (l.bit(x, y) & ac_bits) != 0
            g_acyclic = (l.bit(x2, y2) & ac_bits) != 0
            if (f_acyclic or g_acyclic) and not (l.bit(dom, cod) & ac_bits):
                return False
    q = q_min(m, unit)
    for x in cofibrant_objects(m):
        if (tensor(q, x), tensor(unit, x)) not in m.w:
            return False
    return True


# -- general lattices: extending a selection ----------------------------------


@dataclass(frozen=True)
class ExtensionResult:
    structure: Optional[ModelStructure]
    report: ModelReport

    @property
    def ok(self) -> bool:
        return self.structure is not None


def weq_classes(l: FiniteLattice, w: ArrowSet) -> list[tuple[int, ...]]:
    """Equivalence classes of w (as a symmetric relation), each sorted."""
    rows = l.rows(w.bits)
    parent = list(range(l.size))
    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a
    for x in range(l.size):
        for y in iter_bits(rows[x]):
            ra, rb = find(x), find(y)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for x in range(l.size):
        groups.setdefault(find(x), []).append(x)
    return sorted(tuple(sorted(g)) for g in groups.values())


def _validate_weq_class_structure(l: FiniteLattice, w: ArrowSet):
    if l.id_bits & ~w.bits:
        raise ValueError("weak equivalences must contain all identities")
    rows = l.rows(w.bits)
    if _composition_witness(l, rows) is not None:
        raise ValueError("weak equivalences must be closed under composition")
    if _decomposability_witness(l, rows) is not None:
        raise ValueError("weak equivalences must be decomposable")


def class_sublattice(l: FiniteLattice, members: Sequence[int]) -> FiniteLattice:
    """The induced subposet on one weak-equivalence class; must be a lattice."""
    index = {x: i for i, x in enumerate(members)}
    pairs = [(index[x], index[y]) for x in members for y in members
             if l.leq(x, y)]
    return from_leq_pairs(len(members), pairs,
                          label=f"class{tuple(members)}")


def extend_selection_general(
    l: FiniteLattice,
    w: ArrowSet,
    class_systems: Mapping[tuple[int, ...], TransferSystem],
) -> ExtensionResult:
    """Try to extend per-class contractible structures to a model structure on l.

    Unlike the chain case this can fail; the result carries the verification
    report either way, with the first failing axiom and witness on failure.
    """
    _validate_weq_class_structure(l, w)
    af = 0
    ac = 0
    for members in weq_classes(l, w):
        sub = class_sublattice(l, members)
        if members in class_systems:
            sys = class_systems[members]
            if sys.lattice != sub:
                raise ValueError(f"system for class {members} has the wrong carrier")
        elif len(members) == 1:
            sys = _transfer.trivial_system(sub)
        else:
            raise ValueError(f"no transfer system given for class {members}")
        lc = left_class(sub, sys)
        for (a, b) in sub.arrows:
            g = l.bit(members[a], members[b])
            if (sys.bits >> sub.index(a, b)) & 1:
                af |= g
            if (lc.bits >> sub.index(a, b)) & 1:
                ac |= g
    c = ArrowSet(l, l.llp(af))
    f = ArrowSet(l, l.rlp(ac))
    candidate = ModelStructure(l, w, c, f)
    report = verify_model(l, w, c, f)
    return ExtensionResult(candidate if report.ok else None, report)
