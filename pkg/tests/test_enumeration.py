import pytest

from qseries_lab.enumeration import (
    MAX_ORACLE_LIMIT,
    ConstraintSyntaxError,
    PartitionConstraint,
    Tag,
    count,
    cubic_partitions_of,
    listing,
    oracle_series,
    oracle_table,
    parse_constraint,
    partitions_of,
)


def euler_p(n):
    """p(0..n) from the pentagonal-number recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


class TestPartitions:
    def test_zero(self):
        assert list(partitions_of(0)) == [()]

    def test_four(self):
        assert list(partitions_of(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_fifty(self):
        assert sum(1 for _ in partitions_of(50)) == 204226

    def test_against_recurrence(self):
        p = euler_p(30)
        assert [sum(1 for _ in partitions_of(n)) for n in range(31)] == p

    def test_each_partition_is_valid_and_unique(self):
        seen = set()
        for lam in partitions_of(15):
            assert sum(lam) == 15
            assert list(lam) == sorted(lam, reverse=True)
            seen.add(lam)
        assert len(seen) == 176

    def test_negative(self):
        with pytest.raises(ValueError):
            list(partitions_of(-1))


class TestConstraints:
    @pytest.mark.parametrize(
        "text,tag,param",
        [("reg:4", Tag.REG, 4), ("ped", Tag.PED, None), ("DEGEQ:3", Tag.DE_GEQ, 3), ("deeExact:1", Tag.DEE_EXACT, 1)],
    )
    def test_parse(self, text, tag, param):
        assert parse_constraint(text) == PartitionConstraint(tag, param)

    @pytest.mark.parametrize("text", ["bogus", "reg", "reg:1", "reg:x", "ped:2", "deGeq:0"])
    def test_parse_errors(self, text):
        with pytest.raises(ConstraintSyntaxError):
            parse_constraint(text)

    def test_str_round_trip(self):
        for text in ("reg:4", "deExact:2", "cubic"):
            assert str(parse_constraint(text)) == text

    def test_predicates(self):
        de1 = parse_constraint("de1")
        assert de1((5, 2, 1))
        assert not de1((4, 1))  # largest part even
        assert not de1((3, 2, 2))  # repeated even part
        assert parse_constraint("de2")((3, 3, 1))
        assert parse_constraint("de3")((3, 2, 1, 1))
        assert not parse_constraint("reg:4")((4, 1))

    def test_empty_partition_convention(self):
        empty = ()
        for text in ("dee", "deeGeq:1", "deeGeq:2", "deeAny", "deeAtLeast:3"):
            assert parse_constraint(text)(empty), text
        for text in ("de1", "de2", "de3", "deGeq:1", "deExact:1", "deeExact:1"):
            assert not parse_constraint(text)(empty), text

    def test_dee_multiplicity(self):
        dee = parse_constraint("dee")
        assert dee((4, 4, 1))
        assert not dee((2, 2, 2))
        assert parse_constraint("deeAny")((2, 2, 2))
        assert not dee((6, 2, 2))  # smaller even part repeated

    def test_cubic_has_no_predicate(self):
        with pytest.raises(TypeError):
            parse_constraint("cubic")((1,))


class TestCounts:
    @pytest.mark.parametrize(
        "text,n,value",
        [
            ("de1", 7, 7), ("de2", 7, 2), ("de3", 7, 5), ("deExact:2", 10, 3), ("deGeq:3", 10, 2),
            ("reg:4", 5, 6), ("reg:4", 10, 29), ("ped", 5, 6), ("deeExact:1", 6, 4), ("deeGeq:2", 6, 2),
            ("dee", 6, 5), ("deeAny", 6, 6), ("reg4gt1", 7, 3), ("cubic", 6, 23), ("reg:4", 0, 1),
        ],
    )
    def test_values(self, text, n, value):
        assert count(n, parse_constraint(text)) == value

    def test_negative_n(self):
        assert count(-3, parse_constraint("ped")) == 0

    def test_listing_de_exact(self):
        got = listing(10, parse_constraint("deExact:2"))
        assert sorted(got) == sorted([(3, 3, 2, 1, 1), (3, 3, 1, 1, 1, 1), (5, 5)])

    def test_listing_dee_any(self):
        got = set(listing(6, parse_constraint("deeAny")))
        assert got == {(6,), (4, 2), (4, 1, 1), (2, 2, 2), (2, 2, 1, 1), (2, 1, 1, 1, 1)}

    def test_cubic_pairs(self):
        pairs = list(cubic_partitions_of(6))
        assert len(pairs) == count(6, parse_constraint("cubic"))
        for lam, mu in pairs:
            assert sum(lam) + sum(mu) == 6
            assert all(x % 2 == 0 for x in mu)
        assert len(set(pairs)) == len(pairs)


class TestOracleSeries:
    def test_reg4(self):
        assert oracle_series(parse_constraint("reg:4"), 10)[5] == 6

    def test_dee_geq2(self):
        assert oracle_series(parse_constraint("deeGeq:2"), 6)[6] == 2

    def test_de_geq3(self):
        assert oracle_series(parse_constraint("deGeq:3"), 10)[10] == 2

    def test_table_matches_individual(self):
        cs = [parse_constraint(t) for t in ("ped", "cubic", "de2")]
        table = oracle_table(cs, 15)
        for c in cs:
            assert table[c] == oracle_series(c, 15)

    def test_limit(self):
        with pytest.raises(ValueError):
            oracle_series(parse_constraint("ped"), MAX_ORACLE_LIMIT + 1)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            oracle_series(parse_constraint("ped"), -1)
