"""Finite lattices and dense arrow-set bitmasks.

Elements are dense integer indices 0..size-1.  The comparable pairs
(x, y) with x <= y are enumerated once, lexicographically by (src, dst);
an ArrowSet is an integer bitmask over that enumeration.  Everything is
immutable after construction, so values can be shared freely.

The bitmask layout is the performance core: all lifting-property and
closure computations reduce to machine-int AND/OR on arrow masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

Arrow = tuple[int, int]


class LatticeError(ValueError):
    """Raised when a relation fails the lattice axioms."""


class CarrierMismatchError(ValueError):
    """Raised when arrow sets over different lattices are combined."""


@dataclass(frozen=True)
class LatticeReport:
    """Diagnostics from a lattice validity check.

    ``problems`` holds one tagged tuple per violated invariant, e.g.
    ``("transitivity", 0, 1, 2)`` or ``("meet", x, y)``.  Empty means valid.
    """

    size: int
    problems: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(" ".join(str(p) for p in prob) for prob in self.problems)


def relation_report(size: int, leq_pairs: Iterable[Arrow]) -> LatticeReport:
    """Check a raw relation against the lattice axioms, reporting every violation.

    Never raises: this is the diagnostic path.  Constructors use it and
    refuse invalid input.
    """
    up = [0] * size
    for x, y in leq_pairs:
        if not (0 <= x < size and 0 <= y < size):
            return LatticeReport(size, (("out-of-range", x, y),))
        up[x] |= 1 << y
    problems = []
    for x in range(size):
        if not (up[x] >> x) & 1:
            problems.append(("reflexivity", x))
            up[x] |= 1 << x
    for x in range(size):
        for y in _bits(up[x]):
            if x != y and (up[y] >> x) & 1:
                problems.append(("antisymmetry", x, y))
            if up[y] & ~up[x]:
                z = _lowest_bit(up[y] & ~up[x])
                problems.append(("transitivity", x, y, z))
    if problems:
        return LatticeReport(size, tuple(problems))
    down = [0] * size
    for x in range(size):
        for y in _bits(up[x]):
            down[y] |= 1 << x
    full = (1 << size) - 1
    if size and not any(up[x] == full for x in range(size)):
        problems.append(("no-bottom",))
    if size and not any(down[y] == full for y in range(size)):
        problems.append(("no-top",))
    for x in range(size):
        for y in range(x, size):
            if _bound_of(down[x] & down[y], down) is None:
                problems.append(("meet", x, y))
            if _bound_of(up[x] & up[y], up) is None:
                problems.append(("join", x, y))
    return LatticeReport(size, tuple(problems))


def _bound_of(candidates: int, cone) -> Optional[int]:
    # the unique z among `candidates` whose cone contains every candidate:
    # with cone=down this is the greatest candidate (glb of the pair that
    # produced `candidates`), with cone=up the least candidate (lub)
    for z in _bits(candidates):
        if not candidates & ~cone[z]:
            return z
    return None


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class FiniteLattice:
    """A finite bounded lattice on elements 0..size-1.

    ``up[x]`` is the element-bitmask of all y with x <= y and ``down[x]``
    the mask of all z <= x.  ``meet``/``join`` are full tables.  ``arrows``
    is the canonical lexicographic enumeration of comparable pairs used for
    ArrowSet indexing, identities included.
    """

    __slots__ = (
        "size", "label", "spec", "up", "down", "meet", "join",
        "bottom", "top", "arrows", "arrow_index", "n_arrows",
        "id_bits", "all_bits", "is_chain", "_chain_base",
        "_arrows_by_src", "_arrows_by_dst", "_blockers", "_blocked_by",
        "_hash",
    )

    def __init__(self, size: int, leq_pairs: Iterable[Arrow],
                 label: Optional[str] = None, spec: Optional[dict] = None):
        leq_pairs = list(leq_pairs)
        report = relation_report(size, leq_pairs)
        if not report.ok:
            raise LatticeError(f"not a lattice: {report.describe()}")
        self.size = size
        self.label = label
        up = [1 << x for x in range(size)]
        for x, y in leq_pairs:
            up[x] |= 1 << y
        self.up = tuple(up)
        down = [0] * size
        for x in range(size):
            for y in _bits(up[x]):
                down[y] |= 1 << x
        self.down = tuple(down)
        full = (1 << size) - 1
        self.bottom = next(x for x in range(size) if up[x] == full)
        self.top = next(y for y in range(size) if down[y] == full)
        self.meet = tuple(
            tuple(_bound_of(down[x] & down[y], down) for y in range(size))
            for x in range(size)
        )
        self.join = tuple(
            tuple(_bound_of(up[x] & up[y], up) for y in range(size))
            for x in range(size)
        )
        arrows = [(x, y) for x in range(size) for y in _sorted_bits(up[x])]
        arrows.sort()
        self.arrows = tuple(arrows)
        self.arrow_index = {a: i for i, a in enumerate(arrows)}
        self.n_arrows = len(arrows)
        self.id_bits = 0
        for x in range(size):
            self.id_bits |= 1 << self.arrow_index[(x, x)]
        self.all_bits = (1 << self.n_arrows) - 1
        self.is_chain = all(
            up[x] == (full >> x) << x for x in range(size)
        ) if size else True
        if self.is_chain:
            base = []
            acc = 0
            for x in range(size):
                base.append(acc)
                acc += size - x
            self._chain_base = tuple(base)
        else:
            self._chain_base = None
        by_src: list[list[tuple[int, int]]] = [[] for _ in range(size)]
        by_dst: list[list[tuple[int, int]]] = [[] for _ in range(size)]
        for i, (x, y) in enumerate(arrows):
            by_src[x].append((i, y))
            by_dst[y].append((i, x))
        self._arrows_by_src = tuple(tuple(v) for v in by_src)
        self._arrows_by_dst = tuple(tuple(v) for v in by_dst)
        self._blockers = None
        self._blocked_by = None
        self._hash = hash((size, self.up))
        if spec is None:
            spec = {"kind": "explicit", "size": size,
                    "leq": sorted({(x, y) for x in range(size) for y in _bits(self.up[x])})}
        self.spec = spec

    # -- order primitives ---------------------------------------------------

    def leq(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def between(self, x: int, y: int) -> int:
        """Element mask of all b with x <= b <= y."""
        return self.up[x] & self.down[y]

    # -- arrow-mask machinery -----------------------------------------------

    def index(self, x: int, y: int) -> int:
        return self.arrow_index[(x, y)]

    def bit(self, x: int, y: int) -> int:
        return 1 << self.arrow_index[(x, y)]

    def rows(self, bits: int) -> list[int]:
        """Per-source element masks: rows[x] = {y : (x, y) in bits}."""
        if self._chain_base is not None:
            size = self.size
            base = self._chain_base
            return [((bits >> base[x]) & ((1 << (size - x)) - 1)) << x
                    for x in range(size)]
        rows = [0] * self.size
        for x in range(self.size):
            r = 0
            for i, y in self._arrows_by_src[x]:
                if (bits >> i) & 1:
                    r |= 1 << y
            rows[x] = r
        return rows

    def cols(self, bits: int) -> list[int]:
        """Per-target element masks: cols[y] = {x : (x, y) in bits}."""
        cols = [0] * self.size
        for y in range(self.size):
            c = 0
            for i, x in self._arrows_by_dst[y]:
                if (bits >> i) & 1:
                    c |= 1 << x
            cols[y] = c
        return cols

    def from_rows(self, rows: list[int]) -> int:
        bits = 0
        for x in range(self.size):
            for y in _bits(rows[x] & self.up[x]):
                bits |= 1 << self.arrow_index[(x, y)]
        return bits

    def lifts(self, i: Arrow, p: Arrow) -> bool:
        """Whether i has the left lifting property against p.

        In a poset the lift in a square (a,b) vs (x,y) exists iff b <= x,
        so lifting fails exactly when a <= x, b <= y and b is not <= x.
        """
        a, b = i
        x, y = p
        return not (self.leq(a, x) and self.leq(b, y) and not self.leq(b, x))

    @property
    def blockers(self) -> tuple[int, ...]:
        """blockers[f] = arrow mask of all g that f fails to lift against."""
        if self._blockers is None:
            self._compute_lift_tables()
        return self._blockers

    @property
    def blocked_by(self) -> tuple[int, ...]:
        """blocked_by[g] = arrow mask of all f failing to lift against g."""
        if self._blocked_by is None:
            self._compute_lift_tables()
        return self._blocked_by

    def _compute_lift_tables(self):
        n = self.n_arrows
        arrows = self.arrows
        blockers = [0] * n
        blocked_by = [0] * n
        up = self.up
        for fi, (a, b) in enumerate(arrows):
            if a == b:
                continue
            for gi, (x, y) in enumerate(arrows):
                if (up[a] >> x) & 1 and (up[b] >> y) & 1 and not (up[b] >> x) & 1:
                    blockers[fi] |= 1 << gi
                    blocked_by[gi] |= 1 << fi
        self._blockers = tuple(blockers)
        self._blocked_by = tuple(blocked_by)

    def llp(self, bits: int) -> int:
        """Arrow mask of everything with the LLP against every arrow in bits."""
        blockers = self.blockers
        out = 0
        for f in range(self.n_arrows):
            if not blockers[f] & bits:
                out |= 1 << f
        return out

    def rlp(self, bits: int) -> int:
        """Arrow mask of everything with the RLP against every arrow in bits."""
        blocked_by = self.blocked_by
        out = 0
        for g in range(self.n_arrows):
            if not blocked_by[g] & bits:
                out |= 1 << g
        return out

    # -- value semantics ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, FiniteLattice)
                and self.size == other.size and self.up == other.up)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        name = self.label or f"lattice(size={self.size})"
        return f"FiniteLattice({name})"


def _sorted_bits(mask: int) -> list[int]:
    return list(_bits(mask))


@lru_cache(maxsize=None)
def make_chain(n: int) -> FiniteLattice:
    """The chain [n] = 0 < 1 < ... < n (n + 1 elements; meet=min, join=max)."""
    if n < 0:
        raise ValueError("chain parameter must be >= 0")
    pairs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    return FiniteLattice(n + 1, pairs, label=f"chain[{n}]",
                         spec={"kind": "chain", "n": n})


@lru_cache(maxsize=None)
def make_product(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    """Componentwise product lattice; element (x, y) is indexed x*b.size + y."""
    size = a.size * b.size
    pairs = []
    for x1 in range(a.size):
        for y1 in range(b.size):
            for x2 in _bits(a.up[x1]):
                for y2 in _bits(b.up[y1]):
                    pairs.append((x1 * b.size + y1, x2 * b.size + y2))
    label = f"({a.label or a.size} x {b.label or b.size})"
    return FiniteLattice(size, pairs, label=label,
                         spec={"kind": "product", "factors": [a.spec, b.spec]})


def make_grid(m: int, n: int) -> FiniteLattice:
    """The product of chains [m] x [n]."""
    return make_product(make_chain(m), make_chain(n))


def from_leq_pairs(size: int, leq_pairs: Iterable[Arrow],
                   label: Optional[str] = None) -> FiniteLattice:
    """Build a lattice from an explicit relation; raises LatticeError if invalid."""
    return FiniteLattice(size, leq_pairs, label=label)


def comparable_arrows(l: FiniteLattice) -> list[Arrow]:
    """The canonical lexicographic arrow enumeration backing ArrowSet indexing."""
    return list(l.arrows)


def verify_lattice(l: FiniteLattice) -> LatticeReport:
    """Re-check a built lattice: relation axioms plus meet/join table correctness."""
    pairs = [(x, y) for x in range(l.size) for y in _bits(l.up[x])]
    report = relation_report(l.size, pairs)
    problems = list(report.problems)
    up = l.up
    down = l.down
    for x in range(l.size):
        for y in range(l.size):
            if _bound_of(down[x] & down[y], down) != l.meet[x][y]:
                problems.append(("meet-table", x, y))
            if _bound_of(up[x] & up[y], up) != l.join[x][y]:
                problems.append(("join-table", x, y))
    return LatticeReport(l.size, tuple(problems))


@dataclass(frozen=True)
class ArrowSet:
    """A set of comparable pairs of one lattice, stored as an arrow bitmask."""

    lattice: FiniteLattice
    bits: int

    @staticmethod
    def empty(l: FiniteLattice) -> "ArrowSet":
        return ArrowSet(l, 0)

    @staticmethod
    def identities(l: FiniteLattice) -> "ArrowSet":
        return ArrowSet(l, l.id_bits)

    @staticmethod
    def all(l: FiniteLattice) -> "ArrowSet":
        return ArrowSet(l, l.all_bits)

    @staticmethod
    def from_pairs(l: FiniteLattice, pairs: Iterable[Arrow],
                   include_identities: bool = False) -> "ArrowSet":
        bits = l.id_bits if include_identities else 0
        for x, y in pairs:
            if (x, y) not in l.arrow_index:
                raise ValueError(f"({x}, {y}) is not a comparable pair")
            bits |= 1 << l.arrow_index[(x, y)]
        return ArrowSet(l, bits)

    def _check(self, other: "ArrowSet"):
        if self.lattice != other.lattice:
            raise CarrierMismatchError("arrow sets live over different lattices")

    def __contains__(self, arrow: Arrow) -> bool:
        i = self.lattice.arrow_index.get(arrow)
        return i is not None and bool((self.bits >> i) & 1)

    def __or__(self, other: "ArrowSet") -> "ArrowSet":
        self._check(other)
        return ArrowSet(self.lattice, self.bits | other.bits)

    def __and__(self, other: "ArrowSet") -> "ArrowSet":
        self._check(other)
        return ArrowSet(self.lattice, self.bits & other.bits)

    def __sub__(self, other: "ArrowSet") -> "ArrowSet":
        self._check(other)
        return ArrowSet(self.lattice, self.bits & ~other.bits)

    def __le__(self, other: "ArrowSet") -> bool:
        self._check(other)
        return not (self.bits & ~other.bits)

    def complement(self) -> "ArrowSet":
        """Complement within the comparable pairs of the carrier."""
        return ArrowSet(self.lattice, self.lattice.all_bits & ~self.bits)

    def pairs(self) -> list[Arrow]:
        arrows = self.lattice.arrows
        return [arrows[i] for i in _bits(self.bits)]

    def nonidentity_pairs(self) -> list[Arrow]:
        return [(x, y) for (x, y) in self.pairs() if x != y]

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[Arrow]:
        return iter(self.pairs())

    def __repr__(self) -> str:
        return f"ArrowSet({self.nonidentity_pairs()!r} + ids)"


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, ascending."""
    return _bits(mask)
