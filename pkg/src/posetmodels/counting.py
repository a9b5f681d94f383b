"""Exact counts and constructive enumerations.

Every closed-form count here is paired elsewhere with an independent
constructive or brute-force route; the formulas use exact integer
arithmetic throughout (binomials near C(4n+5, n) overflow 64 bits early).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterator

from .core import ArrowSet, FiniteLattice, make_chain
from .model import (
    ModelStructure, PremodelStructure, _block_choices, _block_w_bits,
    all_interval_partitions, premodel_from_wfs_pair, verify_model,
)
from .transfer import (
    TransferSystem, enumerate_transfer_systems, is_saturated,
    is_transfer_system, left_class, wfs_from_transfer, Wfs,
)


class OracleCapError(ValueError):
    """The requested brute-force scan would exceed its exponent budget."""


def catalan(k: int) -> int:
    """The k-th Catalan number, exactly."""
    if k < 0:
        raise ValueError("catalan index must be >= 0")
    return comb(2 * k, k) // (k + 1)


def count_models(n: int) -> int:
    """Number of model structures on the chain [n]: C(2n+1, n)."""
    return comb(2 * n + 1, n)


def shapiro(n: int, k: int) -> int:
    """Model structures on [n] with homotopy category [k]: 2(k+1)/(n+k+2)*C(2n+1,n-k)."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    num = 2 * (k + 1) * comb(2 * n + 1, n - k)
    den = n + k + 2
    q, r = divmod(num, den)
    assert r == 0, "triangle entry is an exact integer"
    return q


@dataclass(frozen=True)
class CountTable:
    """Rows n = 0..n_max of the homotopy-category refinement, plus row sums."""

    rows: tuple[tuple[int, ...], ...]

    def value(self, n: int, k: int) -> int:
        return self.rows[n][k]

    def row_sum(self, n: int) -> int:
        return sum(self.rows[n])


def shapiro_table(n_max: int) -> CountTable:
    return CountTable(tuple(
        tuple(shapiro(n, k) for k in range(n + 1)) for n in range(n_max + 1)
    ))


def shapiro_recurrence_table(n_max: int) -> CountTable:
    """The same triangle grown by Q(n,k) = Q(n-1,k-1) + 2Q(n-1,k) + Q(n-1,k+1)."""
    rows = [(1,)]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        def at(k):
            return prev[k] if 0 <= k < len(prev) else 0
        rows.append(tuple(at(k - 1) + 2 * at(k) + at(k + 1) for k in range(n + 1)))
    return CountTable(tuple(rows))


def enumerate_models(n: int) -> Iterator[ModelStructure]:
    """All model structures on [n], lazily.

    Order is deterministic: interval partitions in lex order of their cut
    tuples, then per-block transfer systems in ascending bitmask order with
    the last block varying fastest.  Count is C(2n+1, n).
    """
    l = make_chain(n)
    for part in all_interval_partitions(n):
        blocks = part.blocks()
        w = 0
        for lo, hi in blocks:
            w |= _block_w_bits(n, lo, hi)
        choices = [_block_choices(n, lo, hi) for lo, hi in blocks]
        for combo in product(*choices):
            af = 0
            ac = 0
            for af_b, ac_b in combo:
                af |= af_b
                ac |= ac_b
            c = l.llp(af)
            f = l.rlp(ac)
            yield ModelStructure(l, ArrowSet(l, w), ArrowSet(l, c), ArrowSet(l, f))


def count_premodels(n: int) -> int:
    """Number of premodel structures on [n]: 2/((n+1)(n+2)) * C(4n+5, n)."""
    num = 2 * comb(4 * n + 5, n)
    den = (n + 1) * (n + 2)
    q, r = divmod(num, den)
    assert r == 0, "premodel count is an exact integer"
    return q


def enumerate_premodels(n: int) -> Iterator[PremodelStructure]:
    """All nested pairs of weak factorization systems on [n]."""
    l = make_chain(n)
    systems = list(enumerate_transfer_systems(l))
    wfs = [wfs_from_transfer(l, s) for s in systems]
    for w1 in wfs:
        for w2 in wfs:
            if not w1.right.bits & ~w2.right.bits:
                yield premodel_from_wfs_pair(w1, w2)


def count_saturated_chain(n: int) -> int:
    """Saturated transfer systems on [n]: one per subset of the n covers."""
    return 2 ** n


@lru_cache(maxsize=None)
def _stirling2(k: int, j: int) -> int:
    if k == j:
        return 1
    if j <= 0 or j > k:
        return 0
    return j * _stirling2(k - 1, j) + _stirling2(k - 1, j - 1)


def count_saturated_grid(m: int, n: int) -> int:
    """Saturated transfer systems on the grid [m] x [n], by the Stirling sum."""
    total = 0
    for j in range(2, m + 3):
        sign = -1 if (m - j) % 2 else 1
        total += sign * _stirling2(m + 1, j - 1) * (_factorial(j) // 2) * j ** n
    return total


def _factorial(j: int) -> int:
    out = 1
    for i in range(2, j + 1):
        out *= i
    return out


def count_saturated_oracle(l: FiniteLattice, cap: int = 18) -> int:
    """Count saturated transfer systems by exhaustive enumeration.

    Uses the subset scan when the non-identity arrow count fits the cap and
    the closure-driven sweep otherwise; both are independent of the closed
    formulas.
    """
    nonid = l.n_arrows - l.size
    if nonid <= cap:
        return sum(1 for s in oracle_transfer_systems(l, cap=cap)
                   if is_saturated(l, s))
    return sum(1 for s in enumerate_transfer_systems(l) if is_saturated(l, s))


def oracle_transfer_systems(l: FiniteLattice, cap: int = 18) -> Iterator[TransferSystem]:
    """Subset scan over all reflexive arrow sets, keeping the transfer systems.

    The scan is 2^(#non-identity pairs); the cap bounds that exponent and the
    call refuses (OracleCapError) rather than hang.
    """
    nonid = [i for i, (x, y) in enumerate(l.arrows) if x != y]
    if len(nonid) > cap:
        raise OracleCapError(
            f"subset scan needs 2^{len(nonid)} candidates (cap 2^{cap})")
    for mask in range(1 << len(nonid)):
        bits = l.id_bits
        for pos, i in enumerate(nonid):
            if (mask >> pos) & 1:
                bits |= 1 << i
        aset = ArrowSet(l, bits)
        if is_transfer_system(l, aset)[0]:
            yield TransferSystem(l, aset)


def oracle_wfs(l: FiniteLattice, cap: int = 18) -> Iterator[Wfs]:
    """Brute-force weak factorization systems: scanned right classes, lifted lefts."""
    for s in oracle_transfer_systems(l, cap=cap):
        yield Wfs(left=left_class(l, s), right=s.rel)


def oracle_models(l: FiniteLattice, cap: int = 18) -> Iterator[ModelStructure]:
    """Scan all (w, c, f) triples of identity-containing arrow sets.

    Completely independent of the constructive enumeration: the only shared
    ingredient is the axiom checker.  The scan is 2^(3 * #non-identity
    pairs), so the cap bounds 3k; candidates for w are filtered by their own
    axioms before the inner loops purely as a speedup.
    """
    nonid = [i for i, (x, y) in enumerate(l.arrows) if x != y]
    k = len(nonid)
    if 3 * k > cap:
        raise OracleCapError(
            f"triple scan needs 2^{3 * k} candidates (cap 2^{cap})")
    subsets = []
    for mask in range(1 << k):
        bits = l.id_bits
        for pos, i in enumerate(nonid):
            if (mask >> pos) & 1:
                bits |= 1 << i
        subsets.append(bits)
    for wb in subsets:
        w = ArrowSet(l, wb)
        if not _weq_candidate_ok(l, wb):
            continue
        for cb in subsets:
            c = ArrowSet(l, cb)
            for fb in subsets:
                if verify_model(l, w, c, ArrowSet(l, fb)).ok:
                    yield ModelStructure(l, w, c, ArrowSet(l, fb))


def _weq_candidate_ok(l: FiniteLattice, wb: int) -> bool:
    from .model import _composition_witness, _two_of_three_witness
    rows = l.rows(wb)
    if _composition_witness(l, rows) is not None:
        return False
    return _two_of_three_witness(l, rows) is None


def q_over_p_ratio(n: int) -> Fraction:
    """Exact ratio of model structures to premodel structures on [n]."""
    return Fraction(count_models(n), count_premodels(n))
