"""Exact combinatorial complexity measures.

Sensitivity, block sensitivity, certificate complexity, influence,
alternation/decrease (via the hypercube DP), decision-tree depth, and the
negation counts that follow from the decrease value. Everything is exact;
the expensive searches carry explicit arity caps and are tuned so the
exhaustive small-arity sweeps stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional

import numpy as np

from . import chains
from .core import (
    BooleanFunction,
    CapExceededError,
    Point,
    TruthTable,
    materialize,
    point_index,
)

__all__ = [
    "BS_CAP_DEFAULT",
    "CERT_CAP_DEFAULT",
    "DT_CAP_DEFAULT",
    "AltDecrease",
    "MeasureReport",
    "alternation_decrease",
    "block_sensitivity",
    "certificate_complexity",
    "decision_tree_depth",
    "influence",
    "measure_report",
    "negation_complexity",
    "per_point_sensitivity",
    "sensitivity",
]

BS_CAP_DEFAULT = 12
CERT_CAP_DEFAULT = 12
DT_CAP_DEFAULT = 15

# Above this arity the all-points-at-once block matrices get large, so the
# block-sensitivity search falls back to a per-point pass.
_BS_MATRIX_MAX = 8


def per_point_sensitivity(f: TruthTable) -> np.ndarray:
    """s(f, x) for every point x, one vectorized pass per variable."""
    n = f.n
    v = f.values
    idx = np.arange(1 << n)
    s = np.zeros(1 << n, dtype=np.int32)
    for p in range(n):
        s += v[idx ^ (1 << p)] != v
    return s


def sensitivity(f: TruthTable, x: Optional[Point] = None) -> int:
    """Number of sensitive bits at x, or the maximum over all inputs."""
    if x is None:
        if f.n == 0:
            return 0
        return int(per_point_sensitivity(f).max())
    i = point_index(x, f.n)
    v = f.values
    return int(sum(v[i ^ (1 << p)] != v[i] for p in range(f.n)))


def _max_disjoint(blocks: list[int]) -> int:
    """Exact maximum number of pairwise-disjoint masks, branch and bound."""
    blocks = sorted(blocks, key=lambda b: b.bit_count())
    best = 0
    total = len(blocks)

    def rec(i: int, used: int, count: int) -> None:
        nonlocal best
        if count > best:
            best = count
        for j in range(i, total):
            if count + (total - j) <= best:
                return
            b = blocks[j]
            if not b & used:
                rec(j + 1, used | b, count + 1)

    rec(0, 0, 0)
    return best


@lru_cache(maxsize=8)
def _xor_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int32)
    t = idx[:, None] ^ idx[None, :]
    t.setflags(write=False)
    return t


@lru_cache(maxsize=16)
def _upper_halves(n: int) -> tuple[np.ndarray, ...]:
    """Per bit p, the masks that contain p (for submask sweeps)."""
    idx = np.arange(1 << n, dtype=np.int64)
    return tuple(idx[(idx & (1 << p)) != 0] for p in range(n))


def _minimal_from_sens(sens: np.ndarray, n: int) -> np.ndarray:
    """Rows = points, columns = blocks: keep inclusion-minimal sensitive ones.

    ``reach[B]`` marks blocks with a sensitive submask; a sensitive block is
    minimal iff no single-element deletion still reaches one.
    """
    reach = sens.copy()
    halves = _upper_halves(n)
    for p in range(n):
        hi = halves[p]
        reach[..., hi] |= reach[..., hi ^ (1 << p)]
    minimal = sens.copy()
    for p in range(n):
        hi = halves[p]
        minimal[..., hi] &= ~reach[..., hi ^ (1 << p)]
    return minimal


def block_sensitivity(
    f: TruthTable, x: Optional[Point] = None, cap: int = BS_CAP_DEFAULT
) -> int:
    """Maximum number of disjoint blocks whose joint flip changes f.

    Exact: enumerates the inclusion-minimal sensitive blocks, then solves the
    packing by branch and bound. Capped because the block lattice costs
    O(n * 4**n) to scan; near the cap the global maximum is slow but exact.
    """
    n = f.n
    if n > cap:
        raise CapExceededError(f"arity {n} exceeds block-sensitivity cap {cap}")
    v = f.values
    if x is not None:
        i = point_index(x, n)
        sens = v[np.arange(1 << n) ^ i] != v[i]
        blocks = np.nonzero(_minimal_from_sens(sens, n))[0].tolist()
        return _max_disjoint(blocks)
    if n <= _BS_MATRIX_MAX:
        sens = v[_xor_table(n)] != v[:, None]
        minimal = _minimal_from_sens(sens, n)
        return max(
            (_max_disjoint(np.nonzero(minimal[i])[0].tolist()) for i in range(1 << n)),
            default=0,
        )
    return max(block_sensitivity(f, i, cap) for i in range(1 << n))


def _certificate_at(packed: int, n: int, i: int) -> int:
    fx = (packed >> i) & 1
    core = 0
    for p in range(n):
        if ((packed >> (i ^ (1 << p))) & 1) != fx:
            core |= 1 << p
    free = [p for p in range(n) if not core & (1 << p)]
    full = (1 << n) - 1
    # Every sensitive coordinate belongs to every certificate, so grow the
    # sensitive core by increasing numbers of extra coordinates.
    for extra in range(len(free) + 1):
        for combo in combinations(free, extra):
            s_mask = core
            for p in combo:
                s_mask |= 1 << p
            comp = full ^ s_mask
            base = i & s_mask
            t = comp
            forced = True
            while True:
                if ((packed >> (base | t)) & 1) != fx:
                    forced = False
                    break
                if t == 0:
                    break
                t = (t - 1) & comp
            if forced:
                return s_mask.bit_count()
    return n  # pragma: no cover - fixing everything always certifies


def certificate_complexity(
    f: TruthTable, x: Optional[Point] = None, cap: int = CERT_CAP_DEFAULT
) -> int:
    """Size of the smallest forcing set at x, or the maximum over inputs."""
    if f.n > cap:
        raise CapExceededError(f"arity {f.n} exceeds certificate cap {cap}")
    packed = f.packed_int()
    if x is not None:
        return _certificate_at(packed, f.n, point_index(x, f.n))
    return max(
        (_certificate_at(packed, f.n, i) for i in range(1 << f.n)), default=0
    )


def influence(f: TruthTable) -> Fraction:
    """Average per-input sensitivity, as an exact rational."""
    if f.n == 0:
        return Fraction(0)
    return Fraction(int(per_point_sensitivity(f).sum()), 1 << f.n)


@dataclass(frozen=True)
class AltDecrease:
    """Alternation, decrease, and a chain witnessing the alternation."""

    alt: int
    dc: int
    witness: chains.Chain


def alternation_decrease(f: BooleanFunction, cap: Optional[int] = None) -> AltDecrease:
    """Alternation and decrease via the full-hypercube DP, plus a witness."""
    table = materialize(f, cap)
    A, D = chains.alternation_profile(table)
    witness = chains.max_alternation_witness(table, A)
    return AltDecrease(int(A[-1]), int(D[-1]), witness)


_DT_MEMO: dict[bytes, int] = {}


def _dt(values: np.ndarray, n: int) -> int:
    first = values[0]
    if not np.any(values != first):
        return 0
    key = values.tobytes()
    hit = _DT_MEMO.get(key)
    if hit is not None:
        return hit
    best = n
    for j in range(1, n + 1):
        shaped = values.reshape(1 << (j - 1), 2, 1 << (n - j))
        lo = shaped[:, 0, :].ravel()
        hi = shaped[:, 1, :].ravel()
        if not np.any(lo != hi):
            continue  # irrelevant variable, querying it cannot help
        d = 1 + max(_dt(lo, n - 1), _dt(hi, n - 1))
        if d < best:
            best = d
            if best == 1:
                break
    _DT_MEMO[key] = best
    return best


def decision_tree_depth(f: TruthTable, cap: int = DT_CAP_DEFAULT) -> int:
    """Depth of the shallowest decision tree, exact.

    Memoized on the canonical serialized subfunction, so identical
    subfunctions reached through different restriction orders share work.
    """
    if f.n > cap:
        raise CapExceededError(f"arity {f.n} exceeds decision-tree cap {cap}")
    return _dt(f.values, f.n)


def negation_complexity(f: BooleanFunction, cap: Optional[int] = None) -> tuple[int, int]:
    """(circuit, formula) negation counts derived from the decrease value.

    Circuits need ceil(log2(1 + dc)) negations; formulas need dc.
    """
    dc = alternation_decrease(f, cap).dc
    return dc.bit_length(), dc


@dataclass
class MeasureReport:
    """Exact values of every measure, with reasons for any skipped ones."""

    n: int
    s: int
    I: Fraction
    alt: int
    dc: int
    negs: int
    negs_formula: int
    bs: Optional[int] = None
    C: Optional[int] = None
    DT: Optional[int] = None
    skips: dict = field(default_factory=dict)
    per_point: Optional[dict] = None

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "s": self.s,
            "bs": self.bs,
            "C": self.C,
            "I": str(self.I),
            "alt": self.alt,
            "dc": self.dc,
            "DT": self.DT,
            "negs": self.negs,
            "negs_formula": self.negs_formula,
        }
        if self.skips:
            out["skips"] = dict(self.skips)
        if self.per_point is not None:
            out["per_point"] = self.per_point
        return out


def measure_report(
    f: BooleanFunction,
    bs_cap: int = BS_CAP_DEFAULT,
    cert_cap: int = CERT_CAP_DEFAULT,
    dt_cap: int = DT_CAP_DEFAULT,
    per_point: bool = False,
) -> MeasureReport:
    """All measures of one function, honoring the per-measure caps."""
    table = materialize(f)
    ad = alternation_decrease(table)
    skips: dict[str, str] = {}
    bs = c = dt = None
    if table.n <= bs_cap:
        bs = block_sensitivity(table, cap=bs_cap)
    else:
        skips["bs"] = f"arity {table.n} above cap {bs_cap}"
    if table.n <= cert_cap:
        c = certificate_complexity(table, cap=cert_cap)
    else:
        skips["C"] = f"arity {table.n} above cap {cert_cap}"
    if table.n <= dt_cap:
        dt = decision_tree_depth(table, cap=dt_cap)
    else:
        skips["DT"] = f"arity {table.n} above cap {dt_cap}"
    report = MeasureReport(
        n=table.n,
        s=sensitivity(table),
        I=influence(table),
        alt=ad.alt,
        dc=ad.dc,
        negs=ad.dc.bit_length(),
        negs_formula=ad.dc,
        bs=bs,
        C=c,
        DT=dt,
        skips=skips,
    )
    if per_point:
        report.per_point = {"s": per_point_sensitivity(table).tolist()}
    return report
