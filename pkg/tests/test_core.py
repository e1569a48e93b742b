"""Representation, evaluation, restriction, composition, serialization."""

import random

import pytest

from boolfn import core, families
from boolfn.core import (
    ArityMismatchError,
    CapExceededError,
    FormatError,
    Restriction,
    TruthTable,
    compose,
    depends_on_all,
    evaluate,
    materialize,
    parse,
    parse_corpus,
    restrict,
    serialize,
)


def random_table(rng, n):
    return TruthTable.from_packed_int(n, rng.getrandbits(1 << n))


def test_evaluate_examples():
    parity3 = families.named_basics("parity", 3)
    assert evaluate(parity3, "101") == 0
    addr2 = families.address(2)
    assert evaluate(addr2, "101000") == 0  # address 10 selects y_2 = 0
    const0 = TruthTable.constant(3, 0)
    for x in range(8):
        assert evaluate(const0, x) == 0


def test_evaluate_arity_mismatch():
    parity3 = families.named_basics("parity", 3)
    with pytest.raises(ArityMismatchError):
        evaluate(parity3, "10")
    with pytest.raises(ArityMismatchError):
        evaluate(parity3, 8)


def test_restrict_examples():
    and2 = families.named_basics("and", 2)
    assert restrict(and2, {1: 0}) == TruthTable.constant(1, 0)
    # fixing the first input of AND to 1 leaves the identity on the second
    assert restrict(and2, {1: 1}) == parse("1:2")

    f2, _ = families.gap_family(2)
    left = restrict(f2, {1: 0})
    assert serialize(left) == "2:C"
    # brute-force the same subfunction straight from the table
    expected = [f2.evaluate((0 << 2) | (a << 1) | b) for a in (0, 1) for b in (0, 1)]
    assert list(left.values) == expected


def test_restrict_errors():
    and2 = families.named_basics("and", 2)
    with pytest.raises(ValueError):
        restrict(and2, {3: 0})
    with pytest.raises(ValueError):
        restrict(and2, {0: 0})
    with pytest.raises(ValueError, match="duplicate"):
        Restriction(((1, 0), (1, 1)))


def test_restrict_commutes():
    rng = random.Random(424)
    for _ in range(40):
        n = rng.randrange(2, 9)
        f = random_table(rng, n)
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        bi, bj = rng.randrange(2), rng.randrange(2)
        a = restrict(restrict(f, {i: bi}), {j - 1: bj})
        b = restrict(restrict(f, {j: bj}), {i: bi})
        assert a == b
        both = restrict(f, Restriction.of({i: bi, j: bj}))
        assert a == both


def test_compose_examples():
    p2 = families.named_basics("parity", 2)
    comp = compose(p2, p2)
    assert materialize(comp) == families.named_basics("parity", 4)

    addr2 = families.address(2)
    g2 = compose(addr2, addr2)
    assert g2.arity == 36

    ident = parse("1:2")
    p3 = families.named_basics("parity", 3)
    assert materialize(compose(ident, p3)) == p3


def test_compose_pointwise_random():
    rng = random.Random(99)
    for _ in range(30):
        m = rng.randrange(1, 4)
        n = rng.randrange(1, 5)
        if m * n > 12:
            continue
        f = random_table(rng, m)
        g = random_table(rng, n)
        comp = materialize(compose(f, g))
        for x in range(1 << (m * n)):
            blocks = [(x >> ((m - 1 - i) * n)) & ((1 << n) - 1) for i in range(m)]
            y = 0
            for b in blocks:
                y = (y << 1) | g.evaluate(b)
            assert comp.evaluate(x) == f.evaluate(y)


def test_materialize_examples():
    p3 = core.LazyFunction(3, lambda x: x.bit_count() & 1)
    table = materialize(p3)
    assert list(table.values) == [0, 1, 1, 0, 1, 0, 0, 1]

    addr2 = families.address(2)
    lazy_addr = core.LazyFunction(6, addr2.evaluate)
    assert materialize(lazy_addr) == addr2

    big = compose(families.address(2), families.address(2))
    with pytest.raises(CapExceededError, match="24"):
        materialize(big)


def test_materialize_respects_env_cap(monkeypatch):
    monkeypatch.setenv(core.DENSE_CAP_ENV, "4")
    lazy = core.LazyFunction(5, lambda x: 0)
    with pytest.raises(CapExceededError, match="4"):
        materialize(lazy)
    monkeypatch.delenv(core.DENSE_CAP_ENV)
    assert materialize(lazy).n == 5


def test_negation_involution():
    rng = random.Random(5)
    for _ in range(20):
        f = random_table(rng, rng.randrange(0, 8))
        assert f.negate().negate() == f


def test_depends_on_all():
    assert depends_on_all(families.named_basics("parity", 5))
    projection = parse("2:C")  # f(x1, x2) = x1
    assert not depends_on_all(projection)
    for k in (1, 2, 3):
        fk, _ = families.gap_family(k)
        assert depends_on_all(materialize(fk))


def test_serialize_examples():
    assert serialize(families.named_basics("and", 2)) == "2:8"
    assert serialize(TruthTable.constant(2, 1)) == "2:F"
    with pytest.raises(FormatError):
        parse("3:G1")
    with pytest.raises(FormatError):
        parse("3:9")  # wrong digit count
    with pytest.raises(FormatError):
        parse("nonsense")


def test_serialize_round_trip_random():
    rng = random.Random(1234)
    for _ in range(60):
        f = random_table(rng, rng.randrange(0, 11))
        assert parse(serialize(f)) == f


def test_parse_corpus():
    lines = ["# header", "2:8", "", "2:F  # trailing comment"]
    tables = list(parse_corpus(lines))
    assert len(tables) == 2
    assert serialize(tables[0]) == "2:8"
    assert serialize(tables[1]) == "2:F"


def test_truth_table_validation():
    with pytest.raises(ValueError):
        TruthTable(2, [0, 1, 1])
    with pytest.raises(ValueError):
        TruthTable(1, [0, 2])
    with pytest.raises(CapExceededError):
        TruthTable(30, [])
