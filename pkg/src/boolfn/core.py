"""Exact representations of Boolean functions.

Dense truth tables (the value at every one of the 2**n inputs) and lazy
point-evaluation rules, plus the operations everything else builds on:
evaluation, restriction, composition, materialization, and text
serialization.

Conventions used throughout the package:

* An input point is an integer index in ``[0, 2**n)``. Variable ``x_1`` is
  the most significant bit of the index and ``x_n`` the least significant,
  so the bit string ``"101000"`` denotes ``x_1=1, x_2=0, x_3=1, ...`` and
  equals ``int("101000", 2)``.
* ``TruthTable.values[i]`` is f at the point with index ``i``.
* Text form is ``n:HEX`` where HEX packs the 2**n values little-endian by
  input index into exactly ``ceil(2**n / 4)`` hex digits.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

__all__ = [
    "DEFAULT_DENSE_CAP",
    "DENSE_CAP_ENV",
    "ArityMismatchError",
    "CapExceededError",
    "FormatError",
    "LazyFunction",
    "Restriction",
    "TruthTable",
    "compose",
    "dense_cap",
    "depends_on_all",
    "evaluate",
    "is_monotone",
    "materialize",
    "parse",
    "parse_corpus",
    "point_index",
    "popcounts",
    "serialize",
]

DEFAULT_DENSE_CAP = 24
DENSE_CAP_ENV = "BOOLFN_DENSE_CAP"

_TEXT_RE = re.compile(r"^(\d+):([0-9A-Fa-f]+)$")


class FormatError(ValueError):
    """Malformed truth-table text."""


class ArityMismatchError(ValueError):
    """A point's width does not match the function's arity."""


class CapExceededError(ValueError):
    """An operation would materialize a table above the dense cap."""


def dense_cap() -> int:
    """Current dense materialization cap; BOOLFN_DENSE_CAP overrides it."""
    raw = os.environ.get(DENSE_CAP_ENV)
    return int(raw) if raw else DEFAULT_DENSE_CAP


@lru_cache(maxsize=32)
def popcounts(n: int) -> np.ndarray:
    """Read-only array of Hamming weights for all indices in [0, 2**n)."""
    idx = np.arange(1 << n, dtype=np.uint32)
    pc = np.zeros(1 << n, dtype=np.uint8)
    for p in range(n):
        pc += ((idx >> p) & 1).astype(np.uint8)
    pc.setflags(write=False)
    return pc


Point = Union[int, str, Sequence[int]]


def point_index(x: Point, n: int) -> int:
    """Normalize a point (index, bit string, or bit sequence) to an index."""
    if isinstance(x, (int, np.integer)):
        i = int(x)
        if not 0 <= i < (1 << n):
            raise ArityMismatchError(f"point {x!r} out of range for arity {n}")
        return i
    if isinstance(x, str):
        if len(x) != n or (n and any(c not in "01" for c in x)):
            raise ArityMismatchError(f"point {x!r} is not an {n}-bit string")
        return int(x, 2) if n else 0
    bits = [int(b) for b in x]
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ArityMismatchError(f"point {x!r} is not an {n}-bit sequence")
    i = 0
    for b in bits:
        i = (i << 1) | b
    return i


class TruthTable:
    """Dense table of a total Boolean function on ``n`` variables.

    Immutable once constructed; the value array is read-only and safe to
    share across workers.
    """

    __slots__ = ("n", "values")

    def __init__(self, n: int, values) -> None:
        cap = dense_cap()
        if n < 0:
            raise ValueError("arity must be nonnegative")
        if n > cap:
            raise CapExceededError(f"arity {n} exceeds dense cap {cap}")
        arr = np.array(values, dtype=np.uint8, copy=True).ravel()
        if arr.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} values for arity {n}, got {arr.size}")
        if arr.size and arr.max() > 1:
            raise ValueError("table entries must be bits")
        arr.setflags(write=False)
        self.n = n
        self.values = arr

    @property
    def arity(self) -> int:
        return self.n

    @classmethod
    def from_packed_int(cls, n: int, packed: int) -> "TruthTable":
        """Build from an integer whose bit ``i`` is the value at index ``i``."""
        size = 1 << n
        if packed < 0 or packed >> size:
            raise ValueError(f"packed value out of range for arity {n}")
        nbytes = (size + 7) // 8
        raw = np.frombuffer(packed.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:size]
        return cls(n, bits)

    @classmethod
    def from_evaluator(cls, n: int, fn: Callable[[int], int]) -> "TruthTable":
        return cls(n, [fn(i) & 1 for i in range(1 << n)])

    @classmethod
    def constant(cls, n: int, bit: int) -> "TruthTable":
        return cls(n, np.full(1 << n, bit & 1, dtype=np.uint8))

    def evaluate(self, x: Point) -> int:
        return int(self.values[point_index(x, self.n)])

    def packed_int(self) -> int:
        """Values packed little-endian by input index into one integer."""
        raw = np.packbits(self.values, bitorder="little").tobytes()
        return int.from_bytes(raw, "little")

    def key(self) -> bytes:
        """Canonical memoization key (arity is implied by the length)."""
        return self.values.tobytes()

    def negate(self) -> "TruthTable":
        return TruthTable(self.n, 1 - self.values)

    def __invert__(self) -> "TruthTable":
        return self.negate()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.n, self.values.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 6:
            return f"TruthTable({serialize(self)!r})"
        return f"TruthTable(n={self.n})"


@dataclass(frozen=True)
class LazyFunction:
    """Arity plus a pure point-evaluation rule.

    Holds compositions too large to tabulate; ``descriptor`` is an optional
    JSON-able summary of how the function was built.
    """

    arity: int
    evaluator: Callable[[int], int]
    descriptor: dict | None = None

    @property
    def n(self) -> int:
        return self.arity

    def evaluate(self, x: Point) -> int:
        return int(self.evaluator(point_index(x, self.arity))) & 1


BooleanFunction = Union[TruthTable, LazyFunction]


@dataclass(frozen=True)
class Restriction:
    """Partial assignment fixing a subset of variables to bits.

    ``fixed`` maps 1-based variable indices to 0/1.
    """

    fixed: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        indices = [j for j, _ in self.fixed]
        if len(indices) != len(set(indices)):
            raise ValueError("duplicate restriction index")

    @classmethod
    def of(cls, assignment: Mapping[int, int]) -> "Restriction":
        items = tuple(sorted((int(j), int(b) & 1) for j, b in assignment.items()))
        return cls(items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.fixed)


def evaluate(f: BooleanFunction, x: Point) -> int:
    """Evaluate ``f`` at the point ``x``."""
    return f.evaluate(x)


def restrict(f: TruthTable, r: Restriction | Mapping[int, int]) -> TruthTable:
    """Subfunction with the given variables fixed.

    Surviving variables are renumbered in increasing original order.
    """
    fixed = r.as_dict() if isinstance(r, Restriction) else dict(r)
    n = f.n
    for j in fixed:
        if not 1 <= j <= n:
            raise ValueError(f"restriction index {j} out of range for arity {n}")
    arr = f.values
    m = n
    # Fix highest-numbered variables first so smaller indices stay valid.
    for j in sorted(fixed, reverse=True):
        b = fixed[j] & 1
        arr = arr.reshape(1 << (j - 1), 2, 1 << (m - j))[:, b, :].ravel()
        m -= 1
    return TruthTable(m, arr)


def compose(f: BooleanFunction, g: BooleanFunction) -> LazyFunction:
    """Block composition: ``f`` applied to ``g`` on m contiguous n-bit blocks.

    Block i of the mn-bit input feeds the i-th argument of ``f``; blocks are
    ordered most-significant first, matching the variable numbering.
    """
    m, n = f.arity, g.arity
    if m < 1 or n < 1:
        raise ValueError("composition requires arity >= 1 on both sides")
    mask = (1 << n) - 1
    f_eval = f.evaluate
    g_eval = g.evaluate

    def ev(x: int) -> int:
        y = 0
        for i in range(m):
            block = (x >> ((m - 1 - i) * n)) & mask
            y = (y << 1) | g_eval(block)
        return f_eval(y)

    return LazyFunction(m * n, ev, {"kind": "compose", "outer": describe(f), "inner": describe(g)})


def describe(f: BooleanFunction) -> dict:
    """JSON-able descriptor of a function (inline table text when dense)."""
    if isinstance(f, TruthTable):
        return {"kind": "table", "text": serialize(f)}
    return f.descriptor or {"kind": "opaque", "arity": f.arity}


def materialize(f: BooleanFunction, cap: int | None = None) -> TruthTable:
    """Tabulate a lazy function (identity on dense tables)."""
    if isinstance(f, TruthTable):
        return f
    cap = dense_cap() if cap is None else cap
    if f.arity > cap:
        raise CapExceededError(f"arity {f.arity} exceeds dense cap {cap}")
    return TruthTable(f.arity, [f.evaluator(i) & 1 for i in range(1 << f.arity)])


def _slices(f: TruthTable, j: int) -> tuple[np.ndarray, np.ndarray]:
    """The two half-tables of f along variable j (j in [1, n])."""
    shaped = f.values.reshape(1 << (j - 1), 2, 1 << (f.n - j))
    return shaped[:, 0, :], shaped[:, 1, :]


def depends_on(f: TruthTable, j: int) -> bool:
    lo, hi = _slices(f, j)
    return bool(np.any(lo != hi))


def depends_on_all(f: TruthTable) -> bool:
    """True iff every variable has some input where flipping it flips f."""
    return all(depends_on(f, j) for j in range(1, f.n + 1))


def is_monotone(f: TruthTable) -> bool:
    """Direct pairwise check: no single-bit increase ever decreases f."""
    for j in range(1, f.n + 1):
        lo, hi = _slices(f, j)
        if np.any(lo > hi):
            return False
    return True


def serialize(f: TruthTable) -> str:
    """Canonical text form ``n:HEX`` (values packed little-endian by index)."""
    digits = ((1 << f.n) + 3) // 4
    return f"{f.n}:{f.packed_int():0{digits}X}"


def parse(text: str) -> TruthTable:
    """Inverse of :func:`serialize`; rejects malformed input."""
    m = _TEXT_RE.match(text.strip())
    if not m:
        raise FormatError(f"malformed table text: {text!r}")
    n = int(m.group(1))
    cap = dense_cap()
    if n > cap:
        raise CapExceededError(f"arity {n} exceeds dense cap {cap}")
    hexpart = m.group(2)
    digits = ((1 << n) + 3) // 4
    if len(hexpart) != digits:
        raise FormatError(
            f"expected {digits} hex digits for arity {n}, got {len(hexpart)}"
        )
    packed = int(hexpart, 16)
    if packed >> (1 << n):
        raise FormatError(f"padding bits set in {text!r}")
    return TruthTable.from_packed_int(n, packed)


def parse_corpus(lines: Iterable[str]) -> Iterator[TruthTable]:
    """Parse a corpus: one table per line, blank lines and # comments skipped."""
    for line in lines:
        body = line.split("#", 1)[0].strip()
        if body:
            yield parse(body)
