"""Exact polynomial and Fourier algebra on dense truth tables.

Multilinear coefficients over the integers (and reduced mod m), the degrees
they induce, the integer-scaled Walsh spectrum of the +/-1-valued version of
a function, sparsity, and the weighted spectral sums. All arithmetic is
exact: the spectrum carries numerators at denominator 2**n and rationals
appear only at reporting time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

import numpy as np

from .core import TruthTable, popcounts

__all__ = [
    "FourierSpectrum",
    "MultilinearPoly",
    "SpectralSums",
    "degree",
    "fourier_transform",
    "influence_from_spectrum",
    "multilinear_coefficients",
    "sparsity",
    "spectral_sums",
    "subset_of_index",
]

Modulus = Union[str, int]


def subset_of_index(t: int, n: int) -> tuple[int, ...]:
    """Variable subset named by a coefficient index (x_1 = most significant)."""
    return tuple(j for j in range(1, n + 1) if t & (1 << (n - j)))


def _index_of_subset(vars_: Iterator[int], n: int) -> int:
    t = 0
    for j in vars_:
        if not 1 <= j <= n:
            raise ValueError(f"variable {j} out of range for arity {n}")
        t |= 1 << (n - j)
    return t


def _mobius(values: np.ndarray, n: int) -> np.ndarray:
    """In-place subset Moebius transform: c_S = sum over T <= S of +-f(T)."""
    a = values.astype(np.int64)
    for p in range(n):
        shaped = a.reshape(-1, 2, 1 << p)
        shaped[:, 1, :] -= shaped[:, 0, :]
    return a


def _zeta(coeffs: np.ndarray, n: int) -> np.ndarray:
    a = coeffs.astype(np.int64)
    for p in range(n):
        shaped = a.reshape(-1, 2, 1 << p)
        shaped[:, 1, :] += shaped[:, 0, :]
    return a


@dataclass(frozen=True)
class MultilinearPoly:
    """Exact coefficients of the unique multilinear representation.

    ``coeffs[t]`` is the coefficient of the monomial over the variables in
    ``subset_of_index(t, n)``; over Z_m the residues live in [0, m).
    """

    n: int
    coeffs: np.ndarray
    modulus: Optional[int] = None

    def coefficient(self, vars_) -> int:
        return int(self.coeffs[_index_of_subset(iter(vars_), self.n)])

    def degree(self) -> int:
        nz = np.nonzero(self.coeffs)[0]
        if nz.size == 0:
            return 0
        return int(popcounts(self.n)[nz].max())

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for t in np.nonzero(self.coeffs)[0]:
            yield subset_of_index(int(t), self.n), int(self.coeffs[t])

    def evaluate_all(self) -> np.ndarray:
        """Evaluate at every 0/1 point (zeta transform; reduced mod m)."""
        vals = _zeta(self.coeffs, self.n)
        if self.modulus is not None:
            vals %= self.modulus
        return vals

    def to_json_dict(self) -> dict:
        nz = np.nonzero(self.coeffs)[0]
        return {str(int(t)): int(self.coeffs[t]) for t in nz}


def _check_modulus(modulus: Modulus) -> Optional[int]:
    if modulus == "integers" or modulus is None:
        return None
    m = int(modulus)
    if m < 2:
        raise ValueError("modulus must be >= 2")
    return m


def multilinear_coefficients(f: TruthTable, modulus: Modulus = "integers") -> MultilinearPoly:
    """Moebius transform of the table; one pass serves Z and every Z_m.

    The zeta matrix is unipotent, so the canonical multilinear coefficients
    reduced mod m are the unique total-agreement representation over Z_m.
    """
    m = _check_modulus(modulus)
    coeffs = _mobius(f.values, f.n)
    if m is not None:
        coeffs %= m
    coeffs.setflags(write=False)
    return MultilinearPoly(f.n, coeffs, m)


def degree(f: TruthTable, modulus: Modulus = "integers") -> int:
    """Degree of the multilinear representation over Z (or over Z_m)."""
    return multilinear_coefficients(f, modulus).degree()


@dataclass(frozen=True)
class FourierSpectrum:
    """Integer-scaled spectrum of 1 - 2f: ``scaled[t]`` equals 2**n * fhat(S).

    Index convention matches :class:`MultilinearPoly`; the true coefficient
    of the character on subset S is ``scaled[t] / 2**n``.
    """

    n: int
    scaled: np.ndarray

    def coefficient(self, vars_) -> Fraction:
        return Fraction(int(self.scaled[_index_of_subset(iter(vars_), self.n)]), 1 << self.n)

    def support(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for t in np.nonzero(self.scaled)[0]:
            yield subset_of_index(int(t), self.n), int(self.scaled[t])

    def sparsity(self) -> int:
        return int(np.count_nonzero(self.scaled))

    def csv_rows(self) -> Iterator[list]:
        """CSV export: header then one (subset-mask, scaled-coefficient) row
        per nonzero entry; the true coefficient is scaled / 2**n."""
        yield ["subset-mask", "scaled-coefficient"]
        for t in np.nonzero(self.scaled)[0]:
            yield [int(t), int(self.scaled[t])]


def fourier_transform(f: TruthTable) -> FourierSpectrum:
    """Exact integer Walsh transform of the +/-1 value vector 1 - 2f."""
    n = f.n
    a = (1 - 2 * f.values.astype(np.int64))
    for p in range(n):
        shaped = a.reshape(-1, 2, 1 << p)
        lo = shaped[:, 0, :].copy()
        shaped[:, 0, :] += shaped[:, 1, :]
        shaped[:, 1, :] = lo - shaped[:, 1, :]
    a.setflags(write=False)
    return FourierSpectrum(n, a)


def sparsity(f: TruthTable) -> int:
    """Number of nonzero spectrum entries of 1 - 2f."""
    return fourier_transform(f).sparsity()


@dataclass(frozen=True)
class SpectralSums:
    """Exact rationals: sum |fhat|, sum |fhat||S|, and sum |S|^2 fhat^2."""

    l1: Fraction
    weighted: Fraction
    weighted2: Fraction


def spectral_sums(f: TruthTable) -> SpectralSums:
    spec = fourier_transform(f)
    return spectral_sums_of(spec)


def spectral_sums_of(spec: FourierSpectrum) -> SpectralSums:
    n = spec.n
    pc = popcounts(n).astype(np.int64)
    scaled = spec.scaled
    if n <= 16:
        abssum = int(np.abs(scaled).sum())
        wsum = int((np.abs(scaled) * pc).sum())
        w2sum = int(((scaled * scaled) * (pc * pc)).sum())
    else:
        abssum = wsum = w2sum = 0
        for t in np.nonzero(scaled)[0]:
            c = int(scaled[t])
            w = int(pc[t])
            abssum += abs(c)
            wsum += abs(c) * w
            w2sum += c * c * w * w
    denom = 1 << n
    return SpectralSums(
        l1=Fraction(abssum, denom),
        weighted=Fraction(wsum, denom),
        weighted2=Fraction(w2sum, denom * denom),
    )


def influence_from_spectrum(spec: FourierSpectrum) -> Fraction:
    """Influence via the spectral identity sum |S| fhat(S)^2."""
    n = spec.n
    pc = popcounts(n).astype(np.int64)
    scaled = spec.scaled
    if n <= 16:
        total = int((scaled * scaled * pc).sum())
    else:
        total = 0
        for t in np.nonzero(scaled)[0]:
            c = int(scaled[t])
            total += c * c * int(pc[t])
    return Fraction(total, 1 << (2 * n))
