"""Maximal hypercube chains and the constructive chain procedures.

A chain walks from the all-zeros point to the all-ones point adding one bit
per step, so it is exactly a permutation of the variables. This module holds
the chain object, the level-by-level longest-alternation DP with witness
extraction, the recursive full-tree witness chain, the glued chain for block
compositions, and the XOR-of-monotone decomposition built on the same DP.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .core import (
    ArityMismatchError,
    BooleanFunction,
    TruthTable,
    evaluate,
    is_monotone,
    materialize,
    popcounts,
)
from .families import DecisionTreeShape

__all__ = [
    "Chain",
    "alternation_along",
    "alternation_profile",
    "gap_family_chain",
    "glued_composition_chain",
    "max_alternation_witness",
    "monotone_decomposition",
]


@dataclass(frozen=True)
class Chain:
    """Maximal increasing path 0^n -> 1^n stored as a permutation of [n].

    Point i of the induced sequence has exactly the variables
    ``order[0..i-1]`` set.
    """

    arity: int
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(1, self.arity + 1)):
            raise ValueError("chain order must be a permutation of 1..n")

    def points(self) -> Iterator[int]:
        """The n+1 point indices of the chain, bottom to top."""
        x = 0
        yield x
        for j in self.order:
            x |= 1 << (self.arity - j)
            yield x

    def to_json(self) -> list[int]:
        return list(self.order)

    @classmethod
    def from_json(cls, data: Sequence[int], arity: Optional[int] = None) -> "Chain":
        order = tuple(int(j) for j in data)
        return cls(arity if arity is not None else len(order), order)


def alternation_along(f: BooleanFunction, c: Chain) -> int:
    """Number of value changes of f along the n+1 chain points."""
    if f.arity != c.arity:
        raise ArityMismatchError(
            f"function arity {f.arity} != chain arity {c.arity}"
        )
    count = 0
    prev = None
    for x in c.points():
        v = evaluate(f, x)
        if prev is not None and v != prev:
            count += 1
        prev = v
    return count


def _level_pairs(n: int, w: int, level: np.ndarray):
    """(targets, predecessors) per variable bit for one Hamming-weight level."""
    for p in range(n):
        sel = level[(level >> p) & 1 == 1]
        if sel.size:
            yield sel, sel ^ (1 << p)


@lru_cache(maxsize=16)
def _level_plan(n: int):
    """Cached gather plan for small arities (levels 1..n)."""
    pc = popcounts(n)
    idx = np.arange(1 << n, dtype=np.int64)
    return tuple(
        tuple(_level_pairs(n, w, idx[pc == w])) for w in range(1, n + 1)
    )


def alternation_profile(f: TruthTable) -> tuple[np.ndarray, np.ndarray]:
    """Longest-alternation DP over the hypercube, level by Hamming weight.

    Returns ``(A, D)``: for every point x, ``A[x]`` is the maximum number of
    value changes of f along any increasing path from 0^n to x, and ``D[x]``
    the maximum counting only 1 -> 0 drops. One integer per point, so the
    whole profile is O(2**n) memory and O(n * 2**n) time.
    """
    n = f.n
    v = f.values
    A = np.zeros(1 << n, dtype=np.int32)
    D = np.zeros(1 << n, dtype=np.int32)
    if n <= 16:
        plan = _level_plan(n)
    else:
        pc = popcounts(n)
        idx = np.arange(1 << n, dtype=np.int64)
        plan = (tuple(_level_pairs(n, w, idx[pc == w])) for w in range(1, n + 1))
    for level in plan:
        for sel, pred in level:
            fv = v[sel]
            pv = v[pred]
            A[sel] = np.maximum(A[sel], A[pred] + (pv != fv))
            D[sel] = np.maximum(D[sel], D[pred] + ((pv == 1) & (fv == 0)))
    return A, D


def max_alternation_witness(f: TruthTable, profile: Optional[np.ndarray] = None) -> Chain:
    """A chain achieving the maximum alternation, recovered by backtracking."""
    n = f.n
    A = alternation_profile(f)[0] if profile is None else profile
    v = f.values
    order_rev: list[int] = []
    x = (1 << n) - 1
    while x:
        for p in range(n - 1, -1, -1):
            bit = 1 << p
            if x & bit:
                y = x ^ bit
                if A[y] + (v[y] != v[x]) == A[x]:
                    order_rev.append(n - p)
                    x = y
                    break
        else:  # pragma: no cover - DP invariant guarantees a predecessor
            raise AssertionError("no consistent predecessor during backtracking")
    return Chain(n, tuple(reversed(order_rev)))


def gap_family_chain(tree: DecisionTreeShape) -> Chain:
    """Witness chain for a full-tree function, built on the tree itself.

    Recursively: left-subtree chain, then the root variable, then the
    right-subtree chain. For a depth-k tree the result alternates 2**k - 1
    times, the maximum possible.
    """
    order = _collect_order(tree)
    n = len(order)
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("tree variables must be exactly 1..n, each once")
    return Chain(n, tuple(order))


def _collect_order(node: DecisionTreeShape) -> list[int]:
    if node.is_leaf or node.var is None:
        raise ValueError("malformed tree: expected an internal node")
    if node.low is None or node.high is None:
        raise ValueError("malformed tree: internal node missing children")
    if node.low.is_leaf or node.high.is_leaf:
        if not (node.low.is_leaf and node.high.is_leaf):
            raise ValueError("malformed tree: children at one node must match")
        if node.low.value != 0 or node.high.value != 1:
            raise ValueError("malformed tree: bottom leaves must be 0 (left) / 1 (right)")
        return [node.var]
    return _collect_order(node.low) + [node.var] + _collect_order(node.high)


def glued_composition_chain(f_chain: Chain, g_chain: Chain, g: BooleanFunction) -> Chain:
    """Chain for the block composition built by gluing copies of g's chain.

    Sweeps the blocks in f-chain order, walking g's chain inside each block;
    earlier blocks sit at all-ones, later ones at all-zeros. Requires
    g(0^n) != g(1^n); when g(0^n) = 1 the sweep order is reversed (the
    negated-g bookkeeping), and the returned chain is still for the original
    composition. Alternation along it is at least the product of the two
    chain alternations.
    """
    n = g_chain.arity
    if g.arity != n:
        raise ArityMismatchError(f"g arity {g.arity} != chain arity {n}")
    c0 = evaluate(g, 0)
    c1 = evaluate(g, (1 << n) - 1)
    if c0 == c1:
        raise ValueError("gluing requires g(0^n) != g(1^n)")
    blocks = f_chain.order if c0 == 0 else tuple(reversed(f_chain.order))
    order = tuple((b - 1) * n + p for b in blocks for p in g_chain.order)
    return Chain(f_chain.arity * n, order)


def monotone_decomposition(f: BooleanFunction) -> tuple[list[TruthTable], bool]:
    """Split f into alt(f) monotone functions whose XOR reconstructs f.

    Part i is the indicator of alternation-profile value >= i; the profile is
    monotone along the order, so each part is monotone, and telescoping the
    parities gives f back (negated when f(0^n) = 1, reported by the flag).
    Each part is verified monotone and the XOR verified exact before
    returning.
    """
    table = materialize(f)
    n = table.n
    A, _ = alternation_profile(table)
    k = int(A[-1])
    parts = [TruthTable(n, (A >= i).astype(np.uint8)) for i in range(1, k + 1)]
    negate = bool(table.values[0])

    acc = np.zeros(1 << n, dtype=np.uint8)
    for part in parts:
        if not is_monotone(part):  # pragma: no cover - construction guarantees it
            raise AssertionError("decomposition part failed monotonicity check")
        acc ^= part.values
    if negate:
        acc ^= 1
    if not np.array_equal(acc, table.values):  # pragma: no cover
        raise AssertionError("decomposition XOR does not reconstruct the function")
    return parts, negate
