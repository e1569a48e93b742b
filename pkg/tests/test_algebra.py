"""Polynomial and spectral algebra: transforms, degrees, exact identities."""

import random
from fractions import Fraction

import pytest

from boolfn import algebra, families, measures
from boolfn.algebra import (
    degree,
    fourier_transform,
    influence_from_spectrum,
    multilinear_coefficients,
    sparsity,
    spectral_sums,
)
from boolfn.core import TruthTable, materialize

import oracles


def random_table(rng, n):
    return TruthTable.from_packed_int(n, rng.getrandbits(1 << n))


def test_mobius_examples():
    and2 = families.named_basics("and", 2)
    poly = multilinear_coefficients(and2)
    assert dict(poly.items()) == {(1, 2): 1}
    assert poly.coefficient(()) == 0 and poly.coefficient((1,)) == 0

    p2 = families.named_basics("parity", 2)
    poly = multilinear_coefficients(p2)
    assert dict(poly.items()) == {(1,): 1, (2,): 1, (1, 2): -2}

    mod2 = multilinear_coefficients(p2, 2)
    assert dict(mod2.items()) == {(1,): 1, (2,): 1}


def test_mobius_modulus_validation():
    p2 = families.named_basics("parity", 2)
    with pytest.raises(ValueError):
        multilinear_coefficients(p2, 1)


def test_mobius_matches_oracle():
    rng = random.Random(11)
    for _ in range(15):
        f = random_table(rng, rng.randrange(1, 5))
        for modulus in (None, 2, 3, 6):
            got = multilinear_coefficients(f, "integers" if modulus is None else modulus)
            want = oracles.brute_mobius(f, modulus)
            assert {s: c for s, c in want.items() if c != 0} == dict(got.items())


def test_mobius_zeta_round_trip():
    rng = random.Random(21)
    for _ in range(30):
        n = rng.randrange(0, 11)
        f = random_table(rng, n)
        for modulus in ("integers", 2, 3, 4, 5, 6):
            poly = multilinear_coefficients(f, modulus)
            # bits are their own residues mod m >= 2, so both cases compare equal
            assert list(poly.evaluate_all()) == list(f.values)


def test_degree_examples():
    for k in (1, 2, 3, 4):
        fk, _ = families.gap_family(k)
        assert degree(materialize(fk)) == k
    for n in (2, 3, 5):
        p = families.named_basics("parity", n)
        assert degree(p) == n
        assert degree(p, 2) == 1
    maj3 = families.named_basics("majority", 3)
    assert oracles.brute_degree(maj3, 2) == 2
    assert degree(maj3, 2) == 2


def test_fourier_examples():
    for n in (1, 2, 4):
        p = families.named_basics("parity", n)
        spec = fourier_transform(p)
        assert spec.sparsity() == 1
        assert abs(spec.coefficient(range(1, n + 1))) == 1

    and2 = families.named_basics("and", 2)
    spec = fourier_transform(and2)
    assert spec.sparsity() == 4
    # every coefficient of AND_2 has magnitude 1/2, i.e. scaled magnitude 2
    assert all(abs(scaled) == 2 for _, scaled in spec.support())
    assert oracles.brute_fourier_scaled(and2) == {
        (): 2, (1,): 2, (2,): 2, (1, 2): -2,
    }

    const0 = TruthTable.constant(3, 0)
    spec = fourier_transform(const0)
    assert spec.coefficient(()) == 1
    assert spec.sparsity() == 1


def test_fourier_matches_oracle():
    rng = random.Random(31)
    for _ in range(15):
        f = random_table(rng, rng.randrange(1, 5))
        spec = fourier_transform(f)
        want = oracles.brute_fourier_scaled(f)
        got = {s: c for s, c in spec.support()}
        assert got == {s: c for s, c in want.items() if c != 0}


def test_sparsity_examples():
    assert sparsity(families.named_basics("parity", 5)) == 1
    assert sparsity(families.named_basics("and", 2)) == 4
    f4, _ = families.gap_family(4)
    assert sparsity(materialize(f4)) >= 16


def test_parseval_random():
    rng = random.Random(41)
    for _ in range(30):
        f = random_table(rng, rng.randrange(0, 11))
        scaled = fourier_transform(f).scaled
        assert int((scaled.astype("int64") ** 2).sum()) == 1 << (2 * f.n)


def test_spectral_sums_examples():
    for n in (1, 3, 5):
        p = families.named_basics("parity", n)
        sums = spectral_sums(p)
        assert sums.weighted == n  # single weight-n coefficient, tight
    maj3 = families.named_basics("majority", 3)
    sums = spectral_sums(maj3)
    per_point = measures.per_point_sensitivity(maj3)
    assert sums.weighted2 == Fraction(int((per_point.astype("int64") ** 2).sum()), 8) == 3
    assert spectral_sums(TruthTable.constant(4, 0)).weighted == 0


def test_influence_identity_random():
    rng = random.Random(51)
    for _ in range(30):
        f = random_table(rng, rng.randrange(0, 11))
        spec = fourier_transform(f)
        assert influence_from_spectrum(spec) == measures.influence(f)


def test_weighted2_identity_random():
    rng = random.Random(61)
    for _ in range(30):
        f = random_table(rng, rng.randrange(1, 11))
        sums = spectral_sums(f)
        pps = measures.per_point_sensitivity(f).astype("int64")
        assert sums.weighted2 == Fraction(int((pps * pps).sum()), 1 << f.n)


def test_poly_export():
    and2 = families.named_basics("and", 2)
    assert multilinear_coefficients(and2).to_json_dict() == {"3": 1}
