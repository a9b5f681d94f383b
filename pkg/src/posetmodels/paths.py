"""Lattice-path combinatorics: the pivot gluing, Dyck encodings, and the
bijection from model structures on [n] to monotone endomorphisms of [n].

Conventions pinned here (any consistent choice passes the counting suites,
so golden tests fix these):

* A Dyck path is a string over {N, E} whose prefixes never have more E
  than N steps; a transfer system on [k] encodes as a Dyck path of length
  2(k+1) by first-return recursion through the pivot decomposition:
  path = N + encode(upper part) + E + encode(lower part).
* A model structure concatenates its block paths along the diagonal with
  every second block reflected (N and E swapped).  The first block stays
  unreflected so the full path starts with a north step, matching the
  requirement that the induced endomorphism has f(0) >= 0; the path then
  crosses the diagonal exactly once per block boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import ArrowSet, iter_bits, make_chain
from .model import (
    ContractibleSelection, IntervalPartition, ModelStructure,
    from_selection, selection_of,
)
from .transfer import InternalInconsistencyError, TransferSystem


@dataclass(frozen=True)
class DyckPath:
    """A balanced N/E word staying weakly above the diagonal."""

    steps: str

    def __post_init__(self):
        bal = 0
        for s in self.steps:
            if s not in "NE":
                raise ValueError("steps must be N or E")
            bal += 1 if s == "N" else -1
            if bal < 0:
                raise ValueError("path dips below the diagonal")
        if bal != 0:
            raise ValueError("path must be balanced")

    def __len__(self) -> int:
        return len(self.steps)

    def reflected(self) -> str:
        return _reflect(self.steps)


@dataclass(frozen=True)
class LatticePath:
    """An east-north path (0,0) -> (n+1, n+1) whose first step is north."""

    steps: str

    def __post_init__(self):
        if len(self.steps) % 2 or not self.steps:
            raise ValueError("path length must be even and positive")
        if any(s not in "NE" for s in self.steps):
            raise ValueError("steps must be N or E")
        if self.steps.count("N") != self.steps.count("E"):
            raise ValueError("path must end on the diagonal")
        if self.steps[0] != "N":
            raise ValueError("path must start with a north step")

    @property
    def n(self) -> int:
        return len(self.steps) // 2 - 1

    def points(self) -> list[tuple[int, int]]:
        x = y = 0
        pts = [(0, 0)]
        for s in self.steps:
            if s == "N":
                y += 1
            else:
                x += 1
            pts.append((x, y))
        return pts

    def __str__(self) -> str:
        return self.steps


@dataclass(frozen=True)
class Endo:
    """A weakly monotone self-map of [n], recorded by its n+1 values."""

    values: tuple[int, ...]

    def __post_init__(self):
        n = len(self.values) - 1
        if n < 0:
            raise ValueError("an endomorphism needs at least one value")
        prev = 0
        for v in self.values:
            if not 0 <= v <= n:
                raise ValueError("values must lie in [0, n]")
            if v < prev:
                raise ValueError("values must be weakly monotone")
            prev = v

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


def _reflect(steps: str) -> str:
    return steps.translate(str.maketrans("NE", "EN"))


# -- pivot gluing ---------------------------------------------------------------


def odot(x: Optional[TransferSystem], y: Optional[TransferSystem]) -> TransferSystem:
    """Glue two transfer systems around a fresh pivot.

    With x on [i] and y on [j] (either may be None, the empty-chain system),
    the result lives on [i+j+2]: x kept in place, the pivot at i+1 with an
    arrow to everything above it, and y shifted to start at i+2.
    """
    i = -1 if x is None else x.lattice.size - 1
    j = -1 if y is None else y.lattice.size - 1
    n = i + j + 2
    l = make_chain(n)
    bits = l.id_bits
    if x is not None:
        bits |= _shift_bits(x, 0, l)
    if y is not None:
        bits |= _shift_bits(y, i + 2, l)
    p = i + 1
    for w in range(p + 1, n + 1):
        bits |= l.bit(p, w)
    return TransferSystem(l, ArrowSet(l, bits))


def _shift_bits(sys: TransferSystem, offset: int, target) -> int:
    out = 0
    for i in iter_bits(sys.bits):
        a, b = sys.lattice.arrows[i]
        out |= target.bit(a + offset, b + offset)
    return out


def pivot_decompose(z: TransferSystem) -> tuple[int, Optional[TransferSystem],
                                                Optional[TransferSystem]]:
    """Invert odot: the unique pivot p, lower part on [0,p-1], upper on [p+1,n].

    The pivot is the unique p with an arrow to every element above it and no
    member arrow crossing it from strictly below.
    """
    l = z.lattice
    n = l.size - 1
    rows = l.rows(z.bits)
    pivots = []
    for p in range(n + 1):
        if rows[p] != l.up[p]:
            continue
        if any(rows[a] & l.up[p] & ~(1 << a) for a in range(p)):
            continue
        pivots.append(p)
    if len(pivots) != 1:
        raise InternalInconsistencyError(
            f"expected a unique pivot, found {pivots}")
    p = pivots[0]
    x = _restrict_chain(z, 0, p - 1)
    y = _restrict_chain(z, p + 1, n)
    return p, x, y


def _restrict_chain(z: TransferSystem, lo: int, hi: int) -> Optional[TransferSystem]:
    if hi < lo:
        return None
    sub = make_chain(hi - lo)
    bits = sub.id_bits
    for (a, b) in z.pairs():
        if lo <= a and b <= hi:
            bits |= sub.bit(a - lo, b - lo)
    return TransferSystem(sub, ArrowSet(sub, bits))


# -- Dyck encoding ---------------------------------------------------------------


def transfer_to_dyck(z: Optional[TransferSystem]) -> DyckPath:
    """Encode a transfer system on [k] as a Dyck path of length 2(k+1)."""
    return DyckPath(_encode(z))


def _encode(z: Optional[TransferSystem]) -> str:
    if z is None:
        return ""
    p, x, y = pivot_decompose(z)
    return "N" + _encode(y) + "E" + _encode(x)


def dyck_to_transfer(d: DyckPath) -> Optional[TransferSystem]:
    """Decode a Dyck path; inverse of transfer_to_dyck."""
    return _decode(d.steps)


def _decode(steps: str) -> Optional[TransferSystem]:
    if not steps:
        return None
    bal = 0
    for i, s in enumerate(steps):
        bal += 1 if s == "N" else -1
        if bal == 0:
            inner = steps[1:i]
            rest = steps[i + 1:]
            return odot(_decode(rest), _decode(inner))
    raise ValueError("malformed Dyck path")


# -- paths of model structures ----------------------------------------------------


def model_to_path(m: ModelStructure) -> LatticePath:
    """Concatenated block Dyck paths, alternating sides of the diagonal."""
    sel = selection_of(m)
    pieces = []
    for idx, sys in enumerate(sel.block_systems):
        d = transfer_to_dyck(sys).steps
        pieces.append(d if idx % 2 == 0 else _reflect(d))
    return LatticePath("".join(pieces))


def crossings(p: LatticePath) -> int:
    """Number of strict diagonal crossings of the path."""
    signs = [y - x for (x, y) in p.points()]
    last = 0
    count = 0
    for s in signs:
        if s > 0:
            if last < 0:
                count += 1
            last = 1
        elif s < 0:
            if last > 0:
                count += 1
            last = -1
    return count


def _segments(p: LatticePath) -> list[tuple[str, bool]]:
    """Split at diagonal crossings; each piece tagged with its side (above?)."""
    pts = p.points()
    signs = [y - x for (x, y) in pts]
    cut_indices = [0]
    for i in range(1, len(pts) - 1):
        if signs[i] == 0 and signs[i - 1] * signs[i + 1] < 0:
            cut_indices.append(i)
    cut_indices.append(len(pts) - 1)
    out = []
    for a, b in zip(cut_indices, cut_indices[1:]):
        seg = p.steps[a:b]
        out.append((seg, seg[0] == "N"))
    return out


def path_to_endo(p: LatticePath) -> Endo:
    """Column maxima of the path, shifted down by one."""
    values = []
    y = 0
    n = p.n
    for s in p.steps:
        if s == "N":
            y += 1
        else:
            if len(values) <= n:
                values.append(y - 1)
    return Endo(tuple(values))


def _endo_to_path(e: Endo) -> LatticePath:
    steps = []
    y = 0
    for v in e.values:
        target = v + 1
        steps.append("N" * (target - y))
        y = target
        steps.append("E")
    steps.append("N" * (e.n + 1 - y))
    return LatticePath("".join(steps))


def path_to_model(p: LatticePath) -> ModelStructure:
    """Rebuild the model structure whose concatenated block paths give p."""
    segs = _segments(p)
    n = p.n
    cuts = []
    pos = 0
    systems = []
    for idx, (seg, above) in enumerate(segs):
        if above != (idx % 2 == 0):
            raise InternalInconsistencyError("segment side disagrees with parity")
        size = len(seg) // 2
        word = seg if above else _reflect(seg)
        systems.append(dyck_to_transfer(DyckPath(word)))
        pos += size
        if pos <= n:
            cuts.append(pos - 1)
    part = IntervalPartition(n, tuple(cuts))
    return from_selection(ContractibleSelection(part, tuple(systems)))


def phi(m: ModelStructure) -> Endo:
    """The bijection from model structures on [n] to monotone endomorphisms."""
    return path_to_endo(model_to_path(m))


def phi_inverse(e: Endo) -> ModelStructure:
    return path_to_model(_endo_to_path(e))
