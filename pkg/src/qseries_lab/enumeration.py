"""Brute-force partition enumeration: the independent oracle for the generators.

Nothing here touches the power-series code paths except to package counts into
a :class:`~qseries_lab.series.Series` at the very end.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .series import Series

Partition = tuple[int, ...]

DEFAULT_ORACLE_LIMIT = 40
MAX_ORACLE_LIMIT = 60


def partitions_of(n: int) -> Iterator[Partition]:
    """Yield every partition of n as a weakly decreasing tuple.

    Order is reverse lexicographic: ``(n,)`` first, ``(1,)*n`` last.  n = 0
    yields the single empty partition.
    """
    if n < 0:
        raise ValueError(f"cannot partition a negative integer ({n})")
    if n == 0:
        yield ()
        return
    # Zoghbi-Stojmenovic ZS1 on a list of parts; m is the number of parts and
    # h the index of the last part greater than 1.
    x = [1] * (n + 1)
    x[0] = n
    m, h = 0, 0
    yield (n,)
    while x[0] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield tuple(x[: m + 1])


class Tag(enum.Enum):
    REG = "reg"
    PED = "ped"
    DE1 = "de1"
    DE2 = "de2"
    DE3 = "de3"
    DE_GEQ = "deGeq"
    DE_EXACT = "deExact"
    DEE = "dee"
    DEE_EXACT = "deeExact"
    DEE_GEQ = "deeGeq"
    REG4_GT1 = "reg4gt1"
    CUBIC = "cubic"
    # the even-largest-part families with no upper bound on the multiplicity
    DEE_ANY = "deeAny"
    DEE_ATLEAST = "deeAtLeast"


_PARAMETRIC = {Tag.REG, Tag.DE_GEQ, Tag.DE_EXACT, Tag.DEE_EXACT, Tag.DEE_GEQ, Tag.DEE_ATLEAST}


class ConstraintSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionConstraint:
    """A decidable predicate selecting one partition family.

    Even-largest-part families follow what their generating functions count:
    in ``DEE`` the largest part occurs once or twice, in ``DEE_GEQ(k)`` it occurs
    k or k+1 times (one copy may come from the distinct-even-parts factor).
    ``DEE_ANY`` and ``DEE_ATLEAST(k)`` drop the upper bound.

    ``CUBIC`` selects pairs of partitions rather than single partitions, so it
    has no predicate form; :func:`count` enumerates the pairs directly.
    """

    tag: Tag
    param: int | None = None

    def __post_init__(self):
        if self.tag in _PARAMETRIC:
            if self.param is None:
                raise ConstraintSyntaxError(f"{self.tag.value} needs a parameter")
            lower = 2 if self.tag is Tag.REG else 1
            if self.param < lower:
                raise ConstraintSyntaxError(
                    f"{self.tag.value} parameter must be >= {lower}, got {self.param}"
                )
        elif self.param is not None:
            raise ConstraintSyntaxError(f"{self.tag.value} takes no parameter")

    def __str__(self) -> str:
        return self.tag.value if self.param is None else f"{self.tag.value}:{self.param}"

    def __call__(self, parts: Sequence[int]) -> bool:
        return _matches(self, _Shape.of(parts))


@dataclass(frozen=True)
class _Shape:
    parts: tuple[int, ...]
    largest: int  # 0 for the empty partition
    top_mult: int
    counts: Counter

    @classmethod
    def of(cls, parts: Sequence[int]) -> _Shape:
        parts = tuple(parts)
        counts = Counter(parts)
        largest = max(parts, default=0)
        return cls(parts, largest, counts.get(largest, 0), counts)

    def evens_distinct(self, *, except_largest: bool = False) -> bool:
        for p, c in self.counts.items():
            if p % 2 == 0 and c > 1 and not (except_largest and p == self.largest):
                return False
        return True


def _matches(c: PartitionConstraint, s: _Shape) -> bool:
    tag, k = c.tag, c.param
    empty = not s.parts
    if tag is Tag.REG:
        return all(p % k for p in s.parts)
    if tag is Tag.REG4_GT1:
        return all(p % 4 and p > 1 for p in s.parts)
    if tag is Tag.PED:
        return s.evens_distinct()
    if tag in (Tag.DE1, Tag.DE2, Tag.DE3, Tag.DE_GEQ, Tag.DE_EXACT):
        if empty or s.largest % 2 == 0 or not s.evens_distinct():
            return False
        m = s.top_mult
        return {
            Tag.DE1: True,
            Tag.DE2: m >= 2,
            Tag.DE3: m == 1,
            Tag.DE_GEQ: m >= (k or 0),
            Tag.DE_EXACT: m == k,
        }[tag]
    if tag in (Tag.DEE, Tag.DEE_EXACT, Tag.DEE_GEQ, Tag.DEE_ANY, Tag.DEE_ATLEAST):
        if empty:
            # empty partition: the n = 0 term of the sums for DEE / DEE_GEQ
            return tag in (Tag.DEE, Tag.DEE_GEQ, Tag.DEE_ANY, Tag.DEE_ATLEAST)
        if s.largest % 2 or not s.evens_distinct(except_largest=True):
            return False
        m = s.top_mult
        return {
            Tag.DEE: m in (1, 2),
            Tag.DEE_EXACT: m == k,
            Tag.DEE_GEQ: m in (k, (k or 0) + 1),
            Tag.DEE_ANY: True,
            Tag.DEE_ATLEAST: m >= (k or 0),
        }[tag]
    if tag is Tag.CUBIC:
        raise TypeError("cubic partitions are pairs; use count() or cubic_partitions_of()")
    raise AssertionError(tag)  # pragma: no cover


_ALIASES = {t.value.lower(): t for t in Tag}


def parse_constraint(text: str) -> PartitionConstraint:
    """Read CLI syntax: ``reg:4``, ``ped``, ``deGeq:3``, ``deeExact:1`` ..."""
    head, sep, arg = text.strip().partition(":")
    tag = _ALIASES.get(head.lower())
    if tag is None:
        raise ConstraintSyntaxError(
            f"unknown constraint {text!r}; expected one of "
            + ", ".join(t.value + (":k" if t in _PARAMETRIC else "") for t in Tag)
        )
    if not sep:
        return PartitionConstraint(tag)
    try:
        param = int(arg)
    except ValueError:
        raise ConstraintSyntaxError(f"parameter of {text!r} is not an integer") from None
    return PartitionConstraint(tag, param)


def cubic_partitions_of(n: int) -> Iterator[tuple[Partition, Partition]]:
    """Pairs (lam, mu) with |lam| + 2|mu| = n: the second colour is only for even parts."""
    for half in range(n // 2 + 1):
        for mu in partitions_of(half):
            for lam in partitions_of(n - 2 * half):
                yield lam, tuple(2 * p for p in mu)


def count(n: int, c: PartitionConstraint) -> int:
    if n < 0:
        return 0
    if c.tag is Tag.CUBIC:
        # |lam| + 2|mu| = n factorises over the split point
        plain = [sum(1 for _ in partitions_of(m)) for m in range(n + 1)]
        return sum(plain[h] * plain[n - 2 * h] for h in range(n // 2 + 1))
    return sum(1 for p in partitions_of(n) if _matches(c, _Shape.of(p)))


def listing(n: int, c: PartitionConstraint) -> list:
    if c.tag is Tag.CUBIC:
        return list(cubic_partitions_of(n))
    return [p for p in partitions_of(n) if _matches(c, _Shape.of(p))]


def _check_limit(order: int, allow_large: bool):
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > MAX_ORACLE_LIMIT and not allow_large:
        raise ValueError(
            f"oracle order {order} exceeds the practical cap {MAX_ORACLE_LIMIT}; "
            "pass allow_large=True to override"
        )


def oracle_series(c: PartitionConstraint, order: int, *, allow_large: bool = False) -> Series:
    _check_limit(order, allow_large)
    return oracle_table([c], order, allow_large=allow_large)[c]


def oracle_table(
    constraints: Sequence[PartitionConstraint], order: int, *, allow_large: bool = False
) -> dict[PartitionConstraint, Series]:
    """Count several families in one sweep over the partitions of 0..order."""
    _check_limit(order, allow_large)
    plain = [c for c in constraints if c.tag is not Tag.CUBIC]
    rows = {c: [0] * (order + 1) for c in constraints}
    for n in range(order + 1):
        for p in partitions_of(n):
            shape = _Shape.of(p)
            for c in plain:
                if _matches(c, shape):
                    rows[c][n] += 1
        for c in constraints:
            if c.tag is Tag.CUBIC:
                rows[c][n] = count(n, c)
    return {c: Series(v, order) for c, v in rows.items()}
