"""Named checks for the DE-family identities, recurrences and congruences.

Every check returns a :class:`~qseries_lab.report.VerificationReport`.  Statements
are evaluated literally: a relation that does not hold is reported as FAIL with
its first failing index, never adjusted until it passes.

Conventions shared by all checks:

* ``expected`` in a mismatch is the right-hand side of the relation as written,
  ``actual`` the left-hand side.
* Sequence values at negative arguments are 0.
* Congruence sums over an exceptional offset set (triangular numbers, 2j^2, ...)
  drop terms whose argument would be negative.
"""

from __future__ import annotations

import enum
import re
import time
from dataclasses import replace
from functools import lru_cache
from typing import Callable, Iterable

from . import series as S
from .enumeration import DEFAULT_ORACLE_LIMIT, oracle_table, parse_constraint
from .qproducts import (
    INFINITE,
    Monomial,
    P,
    ThetaKind,
    _times_poch,
    asv_check,
    euler,
    jacobi_triple_product_check,
    lebesgue_check,
    poch,
    poch_quotient,
    poch_split_check,
    qbinomial_check,
    resolve,
    theta,
)
from .report import VerificationReport, combine, first_failing, from_comparison, timed
from .series import Series

# tables are built a few terms past the working order so that lookups such as
# DE_e(n + 1) stay exact at n = order
MARGIN = 3


class TheoremError(ValueError):
    pass


class Tables:
    """Lazily built coefficient tables shared by the checks of one run.

    Names use registry syntax (``"dee"``, ``"degeq:3"``).  :meth:`put` replaces a
    table, which is how negative controls inject corrupted coefficients.
    """

    def __init__(self, order: int):
        if order < 0:
            raise TheoremError("order must be non-negative")
        self.order = order
        self._cache: dict[str, Series] = {}

    def series(self, name: str) -> Series:
        key = name.strip().lower()
        if key not in self._cache:
            self._cache[key] = resolve(key, self.order + MARGIN)
        return self._cache[key]

    def put(self, name: str, value: Series):
        if value.order < self.order + MARGIN:
            raise TheoremError(
                f"replacement for {name} has order {value.order}, need {self.order + MARGIN}"
            )
        self._cache[name.strip().lower()] = value

    def seq(self, name: str) -> Callable[[int], int]:
        coeffs = self.series(name).coeffs

        def at(n: int) -> int:
            return 0 if n < 0 else coeffs[n]

        return at


def _tables(order: int, tables: Tables | None) -> Tables:
    if tables is None:
        return Tables(order)
    if tables.order < order:
        raise TheoremError(f"tables built for order {tables.order}, need {order}")
    return tables


def _need(order: int, minimum: int):
    if order < minimum:
        raise TheoremError(f"order must be at least {minimum}, got {order}")


# ---------------------------------------------------------------------------
# exceptional sets


class ExceptionalSet(enum.Enum):
    TRIANGULAR = "triangular"  # j(j+1)/2
    PRONIC = "pronic"  # j(j+1)
    SQUARE = "square"  # k^2
    TWICE_SQUARE = "twice_square"  # 2k^2
    FOUR_SQUARE = "four_square"  # 4k^2
    SQ_PLUS_2SQ = "sq_plus_2sq"  # k^2 + 2l^2

    def members(self, bound: int) -> frozenset[int]:
        return _members(self, bound)

    def contains(self, n: int) -> bool:
        return n in _members(self, max(n, 0))


@lru_cache(maxsize=None)
def _members(kind: ExceptionalSet, bound: int) -> frozenset[int]:
    out = set()
    j = 0
    if kind is ExceptionalSet.SQ_PLUS_2SQ:
        while j * j <= bound:
            l = 0
            while j * j + 2 * l * l <= bound:
                out.add(j * j + 2 * l * l)
                l += 1
            j += 1
        return frozenset(out)
    value = {
        ExceptionalSet.TRIANGULAR: lambda j: j * (j + 1) // 2,
        ExceptionalSet.PRONIC: lambda j: j * (j + 1),
        ExceptionalSet.SQUARE: lambda j: j * j,
        ExceptionalSet.TWICE_SQUARE: lambda j: 2 * j * j,
        ExceptionalSet.FOUR_SQUARE: lambda j: 4 * j * j,
    }[kind]
    while value(j) <= bound:
        out.add(value(j))
        j += 1
    return frozenset(out)


def in_any(n: int, kinds: Iterable[ExceptionalSet]) -> bool:
    return any(k.contains(n) for k in kinds)


# ---------------------------------------------------------------------------
# product-form identities for the odd families


def check_geq_k_identity(k: int, order: int, tables: Tables | None = None) -> VerificationReport:
    """DE_{>=k} generating function against its product-and-sum expression.

    R (q;q)_{k-1} sum_n (q^k;q^2)_n (q^{k+1};q^2)_n q^{2n}/(q^4;q^4)_n
        - R/(1+q) (q^2;q^2)_{k-1}/(-q^3;q^2)_{k-1},   R = (q^4;q^4)/(q;q).
    """
    if k < 1:
        raise TheoremError(f"k must be >= 1, got {k}")
    t = _tables(order, tables)
    with timed() as stamp:
        R = t.series("reg4").truncate(order)
        total = S.zero(order)
        term = S.one(order)
        n = 0
        while 2 * n <= order:
            total = total + term
            term = S.times_binomial(term, 1, k + 2 * n)
            term = S.times_binomial(term, 1, k + 1 + 2 * n)
            term = S.over_binomial(S.shift(term, 2), 1, 4 * n + 4)
            n += 1
        first = R * _times_poch(total, 1, 1, 1, k - 1)
        second = S.over_binomial(R, -1, 1)
        second = _times_poch(second, 1, 2, 2, k - 1)
        second = _times_poch(second, -1, 3, 2, k - 1, divide=True)
        rhs = first - second
        lhs = t.series(f"degeq:{k}")
        cmp = S.equal_up_to(rhs, lhs, order)
        return stamp(from_comparison(f"geq-k-identity[k={k}]", cmp, order))


def check_exact_k_identity(k: int, order: int, tables: Tables | None = None) -> VerificationReport:
    """DE_k generating function against its product-and-sum expression.

    q^k R sum_n (q;q)_{2n+k-1} q^{4n}/(q^4;q^4)_n
        - R q^{2k} (q;q)_inf/((1-q)(q^6;q^4)_inf) (-q^{3+2k};q^2)_inf/(q^{2k};q^2)_inf.
    """
    if k < 1:
        raise TheoremError(f"k must be >= 1, got {k}")
    t = _tables(order, tables)
    with timed() as stamp:
        R = t.series("reg4").truncate(order)
        total = S.zero(order)
        term = _times_poch(S.one(order), 1, 1, 1, k - 1)
        n = 0
        while 4 * n <= order:
            total = total + term
            term = S.times_binomial(term, 1, 2 * n + k)
            term = S.times_binomial(term, 1, 2 * n + k + 1)
            term = S.over_binomial(S.shift(term, 4), 1, 4 * n + 4)
            n += 1
        first = S.shift(R * total, k)
        second = S.over_binomial(euler(order), 1, 1)
        second = _times_poch(second, 1, 6, 4, INFINITE, divide=True)
        second = _times_poch(second, -1, 3 + 2 * k, 2, INFINITE)
        second = _times_poch(second, 1, 2 * k, 2, INFINITE, divide=True)
        second = S.shift(R * second, 2 * k)
        rhs = first - second
        lhs = t.series(f"deexact:{k}")
        cmp = S.equal_up_to(rhs, lhs, order)
        return stamp(from_comparison(f"exact-k-identity[k={k}]", cmp, order))


# ---------------------------------------------------------------------------
# coefficient recurrences


def _shifted_sum(seq: Callable[[int], int], terms: dict[int, int], n: int) -> int:
    return sum(c * seq(n - s) for s, c in terms.items())


# DE_2 side and reg_4 side, as {shift: coefficient}
EXACT2_LHS = {3: 1, 4: -1, 6: 1, 7: -1, 8: 1, 9: -1, 11: 1, 12: -1}
EXACT2_RHS = {2: 1, 3: 1, 4: -2, 5: -1, 6: 1, 8: 2, 9: -1, 10: -2, 11: 1}
GEQ3_LHS = {1: 1, 2: -1, 4: 1, 5: -1, 6: 1, 7: -1, 9: 1, 10: -1}
GEQ3_RHS = {0: -1, 1: -3, 2: 3, 5: -1, 6: 1}


def check_exact2_recurrence(order: int, tables: Tables | None = None) -> VerificationReport:
    """Eight-term DE_2 combination against the nine-term reg_4 combination, n >= 12."""
    _need(order, 12)
    t = _tables(order, tables)
    with timed() as stamp:
        d, r = t.seq("deexact:2"), t.seq("reg4")
        pairs = (
            (n, _shifted_sum(r, EXACT2_RHS, n), _shifted_sum(d, EXACT2_LHS, n))
            for n in range(12, order + 1)
        )
        return stamp(first_failing("exact2-recurrence", order, 12, order, pairs))


def check_geq3_recurrence(order: int, tables: Tables | None = None) -> VerificationReport:
    """Eight-term DE_{>=3} combination against a five-term reg_4 combination, n >= 10."""
    _need(order, 10)
    t = _tables(order, tables)
    with timed() as stamp:
        d, r = t.seq("degeq:3"), t.seq("reg4")
        pairs = (
            (n, _shifted_sum(r, GEQ3_RHS, n), _shifted_sum(d, GEQ3_LHS, n))
            for n in range(10, order + 1)
        )
        return stamp(first_failing("geq3-recurrence", order, 10, order, pairs))


def check_dee_alternating(order: int, tables: Tables | None = None) -> VerificationReport:
    """DE_e(n) = sum_{i=0}^{floor((n-1)/3)} (-1)^i reg_4(n-1-3i) for n >= 3."""
    _need(order, 3)
    t = _tables(order, tables)
    with timed() as stamp:
        d, r = t.seq("dee"), t.seq("reg4")
        pairs = (
            (n, sum((-1) ** i * r(n - 1 - 3 * i) for i in range((n - 1) // 3 + 1)), d(n))
            for n in range(3, order + 1)
        )
        return stamp(first_failing("dee-alternating", order, 3, order, pairs))


def check_dee1_alternating(order: int, tables: Tables | None = None) -> VerificationReport:
    """DE_{e1}(n) = sum_{i=0}^{n-2} (-1)^i reg_4(n-1-i) for n >= 2."""
    _need(order, 2)
    t = _tables(order, tables)
    with timed() as stamp:
        d, r = t.seq("deeexact:1"), t.seq("reg4")
        pairs = (
            (n, sum((-1) ** i * r(n - 1 - i) for i in range(n - 1)), d(n))
            for n in range(2, order + 1)
        )
        return stamp(first_failing("dee1-alternating", order, 2, order, pairs))


def check_dee_geq2_alternating(order: int, tables: Tables | None = None) -> VerificationReport:
    """DE_{e>=2}(n-2) + DE_{>=3}(n) = sum_{i=0}^{n-1} (-1)^i reg_{4>1}(n-3i) for n >= 2."""
    _need(order, 2)
    t = _tables(order, tables)
    with timed() as stamp:
        e, g, r = t.seq("deegeq:2"), t.seq("degeq:3"), t.seq("reg4gt1")
        pairs = (
            (n, sum((-1) ** i * r(n - 3 * i) for i in range(n)), e(n - 2) + g(n))
            for n in range(2, order + 1)
        )
        return stamp(first_failing("dee-geq2-alternating", order, 2, order, pairs))


def check_de_reg4_relations(order: int, tables: Tables | None = None) -> VerificationReport:
    """The four DE1/DE2/DE3 relations with reg_4 and reg_{4>1}."""
    _need(order, 4)
    t = _tables(order, tables)
    with timed() as stamp:
        de1, de2, de3 = t.seq("de1"), t.seq("de2"), t.seq("de3")
        r, r1 = t.seq("reg4"), t.seq("reg4gt1")
        parts = [
            first_failing(
                "(i) DE1(n)+DE1(n-1)=reg4(n)", order, 1, order,
                ((n, r(n), de1(n) + de1(n - 1)) for n in range(1, order + 1)),
            ),
            first_failing(
                "(ii) DE2(n)+DE2(n-3)=reg4gt1(n)", order, 1, order,
                ((n, r1(n), de2(n) + de2(n - 3)) for n in range(1, order + 1)),
            ),
            first_failing(
                "(iii) DE3(n+2)+DE3(n-1)=reg4(n)", order, 2, order - 2,
                ((n, r(n), de3(n + 2) + de3(n - 1)) for n in range(2, order - 1)),
            ),
            first_failing(
                "(iv) DE3(n+2)+DE3(n-1)=DE1(n)+DE1(n-1)", order, 2, order - 2,
                ((n, de1(n) + de1(n - 1), de3(n + 2) + de3(n - 1)) for n in range(2, order - 1)),
            ),
        ]
        return stamp(combine("de-reg4-relations", parts, order))


# ---------------------------------------------------------------------------
# mod 2: theta-function identities and the congruences read off from them


def _boundary_e(t: Tables) -> tuple[Callable[[int], int], Callable[[int], int]]:
    """Split reg_4(m) = DE_e(m+1) + DE_e(m-2) into its two halves.

    The split is valid for m >= 2; at m = 0, 1 the whole reg_4(m) goes to the
    left half.
    """
    d, r = t.seq("dee"), t.seq("reg4")

    def left(m: int) -> int:
        if m < 0:
            return 0
        return r(m) if m < 2 else d(m + 1)

    def right(m: int) -> int:
        return d(m - 2) if m >= 2 else 0

    return left, right


def _boundary_e1(t: Tables) -> tuple[Callable[[int], int], Callable[[int], int]]:
    """Split reg_4(m) = DE_{e1}(m+1) + DE_{e1}(m), valid for m >= 1.

    Left half is DE_{e1}(m), right half DE_{e1}(m+1); at m = 0 the left half
    carries reg_4(0).
    """
    d, r = t.seq("deeexact:1"), t.seq("reg4")

    def left(m: int) -> int:
        if m < 0:
            return 0
        return r(0) if m == 0 else d(m)

    def right(m: int) -> int:
        return d(m + 1) if m >= 1 else 0

    return left, right


def _combined_series(left, right, order: int) -> Series:
    return Series([left(m) + right(m) for m in range(order + 1)], order)


def _theta_exact(name: str, multiplier: ThetaKind, target: ThetaKind, order: int, t: Tables):
    th = theta(multiplier, order)
    goal = theta(target, order)
    parts = []
    for label, split in (("dee", _boundary_e), ("dee1", _boundary_e1)):
        left, right = split(t)
        lhs = _combined_series(left, right, order) * th
        parts.append(from_comparison(f"{name}:exact:{label}", S.equal_up_to(goal, lhs, order), order))
    return parts


def _offsets(kind: str, bound: int) -> list[int]:
    """Offsets of a congruence sum, with multiplicity.

    ``"triangular"``: T_j for j >= 0.  ``"twice-square"``: 2j^2 for j in Z, so
    every nonzero value appears twice.
    """
    out = []
    j = 0
    if kind == "triangular":
        while j * (j + 1) // 2 <= bound:
            out.append(j * (j + 1) // 2)
            j += 1
    else:
        while 2 * j * j <= bound:
            out.extend([2 * j * j] if j == 0 else [2 * j * j, 2 * j * j])
            j += 1
    return out


def _mod2_congruence(name, offsets_kind, excluded: ExceptionalSet, order, t: Tables):
    parts = []
    for label, split in (("dee", _boundary_e), ("dee1", _boundary_e1)):
        left, right = split(t)

        def pairs():
            for n in range(order + 1):
                if excluded.contains(n):
                    continue
                offs = _offsets(offsets_kind, n)
                lsum = sum(left(n - s) for s in offs)
                rsum = sum(right(n - s) for s in offs)
                yield n, rsum % 2, lsum % 2

        parts.append(
            first_failing(
                f"{name}:congruence:{label}", order, 0, order, pairs(),
                detail=f"mod 2, n not {excluded.value}",
            )
        )
    return parts


def check_mod2_triangular(
    order: int, layer: str | None = None, tables: Tables | None = None
) -> VerificationReport:
    """Mod-2 congruences over triangular offsets, excluding pronic n.

    Layer ``"exact"``: (sum_n c(n) q^n) * sum_n (-1)^ceil(n/2) q^{T_n} = sum_n q^{n(n+1)}
    where c is reg_4 rewritten through DE_e (or DE_{e1}).
    Layer ``"congruence"``: the coefficientwise mod-2 statement off the pronic numbers.
    """
    _need(order, 8)
    t = _tables(order, tables)
    with timed() as stamp:
        parts = []
        if layer in (None, "exact"):
            parts += _theta_exact(
                "mod2-triangular", ThetaKind.TRIANGULAR_SIGNED, ThetaKind.PRONIC, order, t
            )
        if layer in (None, "congruence"):
            parts += _mod2_congruence(
                "mod2-triangular", "triangular", ExceptionalSet.PRONIC, order, t
            )
        suffix = "" if layer is None else f":{layer}"
        return stamp(combine(f"mod2-triangular{suffix}", parts, order))


def check_mod2_square(
    order: int, layer: str | None = None, tables: Tables | None = None
) -> VerificationReport:
    """Mod-2 congruences over offsets 2j^2 (j in Z), excluding triangular n."""
    _need(order, 8)
    t = _tables(order, tables)
    with timed() as stamp:
        parts = []
        if layer in (None, "exact"):
            parts += _theta_exact(
                "mod2-square", ThetaKind.SQUARE_ALT, ThetaKind.TRIANGULAR, order, t
            )
        if layer in (None, "congruence"):
            parts += _mod2_congruence(
                "mod2-square", "twice-square", ExceptionalSet.TRIANGULAR, order, t
            )
        suffix = "" if layer is None else f":{layer}"
        return stamp(combine(f"mod2-square{suffix}", parts, order))


# (a, b, r): DE(a) + DE(b) is claimed to be r mod 2
SMALL_CASES_DEE = ((0, 3, 0), (1, 4, 1), (2, 5, 0), (3, 6, 0), (4, 7, 1), (5, 8, 0))
SMALL_CASES_DEE1 = ((0, 1, 1), (1, 2, 1), (2, 3, 0), (3, 4, 1), (4, 5, 0), (5, 6, 0), (6, 7, 1))


def check_mod2_small_cases(tables: Tables | None = None) -> list[VerificationReport]:
    """The listed parities of DE_e(n)+DE_e(n+3) and DE_{e1}(n)+DE_{e1}(n+1), small n.

    Each mismatch reports the smaller argument as its index.
    """
    t = _tables(8, tables)
    out = []
    for label, name, cases in (
        ("dee", "dee", SMALL_CASES_DEE),
        ("dee1", "deeexact:1", SMALL_CASES_DEE1),
    ):
        with timed() as stamp:
            d = t.seq(name)
            pairs = ((a, r, (d(a) + d(b)) % 2) for a, b, r in cases)
            hi = max(b for _, b, _ in cases)
            out.append(stamp(first_failing(f"mod2-small-cases:{label}", hi, 0, hi, pairs)))
    return out


def check_mod2_iff_triangular(order: int, tables: Tables | None = None) -> VerificationReport:
    """Both directions of: parity agreement holds exactly when n is not triangular.

    dee:  DE_e(n+1) = DE_e(n-2) mod 2, n in [2, order-1].
    dee1: DE_{e1}(n) = DE_{e1}(n+1) mod 2, n in [0, order-1].
    ``expected`` is 1 when n is not triangular, ``actual`` 1 when the parities agree.
    """
    _need(order, 5)
    t = _tables(order, tables)
    tri = ExceptionalSet.TRIANGULAR
    with timed() as stamp:
        de, d1 = t.seq("dee"), t.seq("deeexact:1")
        parts = [
            first_failing(
                "dee", order, 2, order - 1,
                (
                    (n, int(not tri.contains(n)), int((de(n + 1) - de(n - 2)) % 2 == 0))
                    for n in range(2, order)
                ),
            ),
            first_failing(
                "dee1", order, 0, order - 1,
                (
                    (n, int(not tri.contains(n)), int((d1(n) - d1(n + 1)) % 2 == 0))
                    for n in range(0, order)
                ),
            ),
        ]
        return stamp(combine("mod2-iff-triangular", parts, order))


# ---------------------------------------------------------------------------
# mod 4 / mod 8: reg_4 convolved with cubic partitions


def cubic_product(t: Tables, order: int) -> Series:
    """A(q) = (sum reg_4(n) q^n)(sum a(n) q^n)."""
    return t.series("reg4").truncate(order) * t.series("cubic").truncate(order)


def _indicator(values: Iterable[int], order: int, weight: int) -> Series:
    out = [0] * (order + 1)
    for v in values:
        if 0 <= v <= order:
            out[v] += weight
    return Series(out, order)


def _squares_from_one(order: int, scale: int = 1, odd_only: bool = False, even_only: bool = False):
    n = 1
    while scale * n * n <= order:
        if not (odd_only and n % 2 == 0) and not (even_only and n % 2):
            yield scale * n * n
        n += 1


def mod4_target(order: int) -> Series:
    """1 + 2 sum_{n>=1} q^{n^2} + 6 sum_{n>=1} q^{2n^2}."""
    return (
        S.one(order)
        + _indicator(_squares_from_one(order), order, 2)
        + _indicator(_squares_from_one(order, 2), order, 6)
    )


def mod8_target(order: int) -> Series:
    """1 + 2 sum q^{n^2} + 6 sum q^{2(2n-1)^2} + 18 sum q^{2(2n)^2} + 24 sum q^{4n^2}
    + 12 sum_{m,n>=1} q^{n^2+2m^2}."""
    mixed = []
    n = 1
    while n * n + 2 <= order:
        m = 1
        while n * n + 2 * m * m <= order:
            mixed.append(n * n + 2 * m * m)
            m += 1
        n += 1
    return (
        S.one(order)
        + _indicator(_squares_from_one(order), order, 2)
        + _indicator(_squares_from_one(order, 2, odd_only=True), order, 6)
        + _indicator(_squares_from_one(order, 2, even_only=True), order, 18)
        + _indicator(_squares_from_one(order, 4), order, 24)
        + _indicator(mixed, order, 12)
    )


def phi_product(order: int) -> Series:
    """(q^2;q^2)^5 / ((q;q)^2 (q^4;q^4)^2)."""
    return poch_quotient([P(1, 2, 2)] * 5, [P(1, 1, 1)] * 2 + [P(1, 4, 4)] * 2, order)


def _cubic_functional_equation(t: Tables, order: int, check_id: str) -> VerificationReport:
    A = cubic_product(t, order)
    phi = theta(ThetaKind.PHI, order)
    A2 = S.dilate(A, 2)
    rhs = phi * S.dilate(phi, 2) * A2 * A2
    return from_comparison(check_id, S.equal_up_to(rhs, A, order), order)


def _convolution_congruence(name, modulus, excluded, order, t: Tables, times3: bool):
    a = t.seq("cubic")
    parts = []
    for label, split in (("dee", _boundary_e), ("dee1", _boundary_e1)):
        left, right = split(t)

        def pairs():
            for n in range(order + 1):
                if in_any(n, excluded):
                    continue
                lsum = sum(left(n - j) * a(j) for j in range(n + 1))
                rsum = sum(right(n - j) * a(j) for j in range(n + 1))
                if times3:
                    yield n, (3 * rsum) % modulus, lsum % modulus
                else:
                    yield n, 0, (lsum + rsum) % modulus

        form = "L = 3R" if times3 else "L + R = 0"
        parts.append(
            first_failing(
                f"{name}:congruence:{label}", order, 0, order, pairs(),
                detail=f"{form} mod {modulus}",
            )
        )
    return parts


MOD4_EXCLUDED = (ExceptionalSet.SQUARE, ExceptionalSet.TWICE_SQUARE)
MOD8_EXCLUDED = (
    ExceptionalSet.SQUARE,
    ExceptionalSet.TWICE_SQUARE,
    ExceptionalSet.FOUR_SQUARE,
    ExceptionalSet.SQ_PLUS_2SQ,
)


def check_mod4_cubic(
    order: int, layer: str | None = None, tables: Tables | None = None
) -> VerificationReport:
    """reg_4 * cubic modulo 4, and the convolution congruences off {k^2, 2k^2}."""
    _need(order, 16)
    t = _tables(order, tables)
    with timed() as stamp:
        parts = []
        if layer in (None, "exact"):
            A = cubic_product(t, order)
            parts.append(
                from_comparison(
                    "mod4-cubic:exact", S.equal_up_to(mod4_target(order), A, order, modulus=4), order
                )
            )
            parts.append(_cubic_functional_equation(t, order, "functional-equation"))
        if layer in (None, "congruence"):
            parts += _convolution_congruence("mod4-cubic", 4, MOD4_EXCLUDED, order, t, False)
        suffix = "" if layer is None else f":{layer}"
        return stamp(combine(f"mod4-cubic{suffix}", parts, order))


def check_mod8_cubic(
    order: int, layer: str | None = None, tables: Tables | None = None, *, times3: bool = False
) -> VerificationReport:
    """reg_4 * cubic modulo 8, and the convolution congruences off {k^2+2l^2, ...}.

    The congruence layer checks L + R = 0 mod 8 by default; ``times3=True``
    checks L = 3R instead, which is a different statement modulo 8.
    """
    _need(order, 16)
    t = _tables(order, tables)
    with timed() as stamp:
        parts = []
        if layer in (None, "exact"):
            A = cubic_product(t, order)
            parts.append(
                from_comparison(
                    "mod8-cubic:exact", S.equal_up_to(mod8_target(order), A, order, modulus=8), order
                )
            )
            parts.append(_cubic_functional_equation(t, order, "functional-equation"))
        if layer in (None, "congruence"):
            parts += _convolution_congruence("mod8-cubic", 8, MOD8_EXCLUDED, order, t, times3)
        suffix = "" if layer is None else f":{layer}"
        if times3:
            suffix += "[L=3R]"
        return stamp(combine(f"mod8-cubic{suffix}", parts, order))


# ---------------------------------------------------------------------------
# intermediate identities used in deriving the statements above


def _series_eq(name: str, lhs: Series, rhs: Series, order: int, detail: str = ""):
    return from_comparison(f"step:{name}", S.equal_up_to(rhs, lhs, order), order, detail=detail)


def _poly(coeffs: dict[int, int], order: int) -> Series:
    out = [0] * (order + 1)
    for e, c in coeffs.items():
        if e <= order:
            out[e] += c
    return Series(out, order)


def _odd_factorial_sum(order: int) -> Series:
    """sum_n (q;q)_{2n+1} q^{4n} / (q^4;q^4)_n."""
    total = S.zero(order)
    term = S.times_binomial(S.one(order), 1, 1)
    n = 0
    while 4 * n <= order:
        total = total + term
        term = S.times_binomial(term, 1, 2 * n + 2)
        term = S.times_binomial(term, 1, 2 * n + 3)
        term = S.over_binomial(S.shift(term, 4), 1, 4 * n + 4)
        n += 1
    return total


def intermediate_reports(order: int, tables: Tables | None = None) -> list[VerificationReport]:
    _need(order, 12)
    t = _tables(order, tables)
    N = order
    R = t.series("reg4").truncate(N)
    tr = lambda name: t.series(name).truncate(N)  # noqa: E731
    out: list[VerificationReport] = []

    def add(build):
        with timed() as stamp:
            out.append(stamp(build()))

    add(lambda: _series_eq("ped-equals-reg4", tr("ped"), R, N))
    add(lambda: _series_eq(
        "dee-is-de3-over-q", tr("dee"), S.shift_down(t.series("de3"), 1).truncate(N), N))
    add(lambda: _series_eq(
        "de3-times-(1+q^3)", S.times_binomial(tr("de3"), -1, 3),
        S.shift(R, 2) - _poly({2: 1, 1: -1}, N), N))
    de, d1, r = t.seq("dee"), t.seq("deeexact:1"), t.seq("reg4")
    add(lambda: first_failing(
        "step:dee-recurrence", N, 3, N,
        ((n, r(n - 1) - de(n - 3), de(n)) for n in range(3, N + 1))))
    add(lambda: _series_eq("dee1-is-q-de1", tr("deeexact:1"), S.shift(tr("de1"), 1), N))
    add(lambda: _series_eq("de1-times-(1+q)", S.times_binomial(tr("de1"), -1, 1), R - 1, N))
    add(lambda: first_failing(
        "step:dee1-recurrence", N, 1, N,
        ((n, r(n) - d1(n), d1(n + 1)) for n in range(1, N + 1)),
        detail="DE_e1(n+1) = reg4(n) - DE_e1(n)"))
    eg2, g2, g3 = t.seq("deegeq:2"), t.seq("degeq:2"), t.seq("degeq:3")
    add(lambda: first_failing(
        "step:dee-geq2-difference", N, 2, N,
        ((n, g2(n) - g3(n), eg2(n - 2)) for n in range(2, N + 1))))
    r1 = t.seq("reg4gt1")
    add(lambda: first_failing(
        "step:de2-recurrence", N, 1, N,
        ((n, r1(n) - g2(n - 3), g2(n)) for n in range(1, N + 1))))

    def shift_laws():
        parts = []
        for k in range(1, 5):
            ek, gk = t.seq(f"deeexact:{k}"), t.seq(f"degeq:{k}")
            egk, xk = t.seq(f"deegeq:{k}"), t.seq(f"deexact:{k}")
            parts.append(first_failing(
                f"exact-shift[k={k}]", N, 0, N - k,
                ((n, gk(n), ek(n + k)) for n in range(0, N - k + 1))))
            parts.append(first_failing(
                f"geq-shift[k={k}]", N, 0, N,
                ((n, xk(n), egk(n - k)) for n in range(0, N + 1))))
        return combine("step:shift-laws", parts, N)

    add(shift_laws)

    # theta products
    q4sq_over_q2 = poch_quotient([P(1, 4, 4), P(1, 4, 4)], [P(1, 2, 2)], N)
    q2sq_over_q = poch_quotient([P(1, 2, 2), P(1, 2, 2)], [P(1, 1, 1)], N)
    ts = theta(ThetaKind.TRIANGULAR_SIGNED, N)
    sa = theta(ThetaKind.SQUARE_ALT, N)

    def pentagonal_like():
        lhs = poch_quotient([P(1, 4, 4), P(1, 3, 4), P(1, 1, 4)], [], N)
        rhs = [0] * (N + 1)
        for n in range(-N, N + 1):
            e = 2 * n * n + n
            if 0 <= e <= N:
                rhs[e] += (-1) ** (n % 2)
        return _series_eq("theta-2n^2+n-product", lhs, Series(rhs, N), N)

    add(pentagonal_like)
    add(lambda: _series_eq("reg4-times-signed-triangular", R * ts, q4sq_over_q2, N))
    add(lambda: _series_eq("pronic-product", q4sq_over_q2, theta(ThetaKind.PRONIC, N), N))
    add(lambda: _series_eq("reg4-signed-triangular-is-pronic", R * ts, theta(ThetaKind.PRONIC, N), N))
    add(lambda: _series_eq(
        "square-alt-product", poch_quotient([P(1, 2, 4), P(1, 2, 4), P(1, 4, 4)], [], N), sa, N))
    add(lambda: _series_eq("reg4-times-square-alt", R * sa, q2sq_over_q, N))
    add(lambda: _series_eq("triangular-product", q2sq_over_q, theta(ThetaKind.TRIANGULAR, N), N))
    add(lambda: _series_eq("reg4-square-alt-is-triangular", R * sa, theta(ThetaKind.TRIANGULAR, N), N))
    add(lambda: _series_eq(
        "cubic-reg4-product", cubic_product(t, N),
        poch_quotient([P(1, 4, 4)], [P(1, 1, 1), P(1, 1, 1), P(1, 2, 2)], N), N))
    add(lambda: _series_eq("phi-product", theta(ThetaKind.PHI, N), phi_product(N), N))
    add(lambda: _cubic_functional_equation(t, N, "step:cubic-functional-equation"))

    # closed forms with rational prefactors, denominators cleared
    def odd_sum_closed_form():
        # q^3 (1+q^3) (q^4;q^4) * sum (q;q)_{2n+1} q^{4n}/(q^4;q^4)_n
        #     = (1 + q - q^2) ((1+q)(q^4;q^4) - (q^2;q)_inf)
        q44 = poch(P(1, 4, 4), N)
        lhs = S.shift(S.times_binomial(q44 * _odd_factorial_sum(N), -1, 3), 3)
        inner = S.times_binomial(q44, -1, 1) - poch(P(1, 2, 1), N)
        rhs = _poly({0: 1, 1: 1, 2: -1}, N) * inner
        return _series_eq("odd-sum-closed-form", lhs, rhs, N, detail="cleared of denominators")

    add(odd_sum_closed_form)

    D2 = tr("deexact:2")
    D3 = tr("degeq:3")
    c35 = _poly({0: 1, 3: 1, 5: 1, 8: 1}, N)  # (1+q^3)(1+q^5)

    def exact2_closed_form():
        # q^3 (1+q^3)(1+q^5)(1-q) DE_2 = (1+q^5)(q^5-q^3-q^2) + (1-q)(q^2+2q^3-q^5+2q^8+q^9-q^10) R
        lhs = S.shift(S.times_binomial(c35 * D2, 1, 1), 3)
        num = _poly({2: 1, 3: 2, 5: -1, 8: 2, 9: 1, 10: -1}, N)
        rhs = _poly({5: 1, 3: -1, 2: -1}, N) * _poly({0: 1, 5: 1}, N) + S.times_binomial(num * R, 1, 1)
        return _series_eq("exact2-closed-form", lhs, rhs, N, detail="cleared of denominators")

    def geq3_closed_form():
        # q (1-q)(1+q^3)(1+q^5) DE_{>=3} = (1-q)(-1-2q+q^2-q^5-q^7) R - 2q(1-q)(1+q^5) + (1+q^5)
        lhs = S.shift(S.times_binomial(c35 * D3, 1, 1), 1)
        num = _poly({0: -1, 1: -2, 2: 1, 5: -1, 7: -1}, N)
        q5 = _poly({0: 1, 5: 1}, N)
        rhs = S.times_binomial(num * R, 1, 1) - 2 * S.shift(S.times_binomial(q5, 1, 1), 1) + q5
        return _series_eq("geq3-closed-form", lhs, rhs, N, detail="cleared of denominators")

    def geq3_expanded():
        # q (1-q)(1+q^3)(1+q^5) DE_{>=3} = (-1-3q+3q^2-q^5+q^6) R - 2(q-q^2-q^7) + 1 - q^5
        lhs = S.shift(S.times_binomial(c35 * D3, 1, 1), 1)
        rhs = (
            _poly({0: -1, 1: -3, 2: 3, 5: -1, 6: 1}, N) * R
            - 2 * _poly({1: 1, 2: -1, 7: -1}, N)
            + _poly({0: 1, 5: -1}, N)
        )
        return _series_eq("geq3-expanded", lhs, rhs, N)

    add(exact2_closed_form)
    add(geq3_closed_form)
    add(geq3_expanded)
    return out


def check_intermediate_identities(order: int, tables: Tables | None = None) -> VerificationReport:
    with timed() as stamp:
        return stamp(combine("step:all", intermediate_reports(order, tables), order))


# ---------------------------------------------------------------------------
# oracle sweep and classical identities

ORACLE_FAMILIES = (
    "reg:2", "reg:3", "reg:4", "reg:5", "ped", "de1", "de2", "de3",
    *(f"deGeq:{k}" for k in range(1, 5)),
    *(f"deExact:{k}" for k in range(1, 5)),
    "dee",
    *(f"deeExact:{k}" for k in range(1, 5)),
    *(f"deeGeq:{k}" for k in range(1, 5)),
    "reg4gt1", "cubic", "deeAny", "deeAtLeast:2",
)


def check_oracles(
    limit: int = DEFAULT_ORACLE_LIMIT, families=ORACLE_FAMILIES, *, allow_large: bool = False
) -> list[VerificationReport]:
    """Generating-function coefficients against brute-force counts for 0..limit."""
    constraints = [parse_constraint(f) for f in families]
    start = time.perf_counter()
    table = oracle_table(constraints, limit, allow_large=allow_large)
    # the enumeration sweep is shared, so its cost is spread over the reports
    share = int((time.perf_counter() - start) * 1000) // max(len(constraints), 1)
    out = []
    for c in constraints:
        with timed() as stamp:
            cmp = S.equal_up_to(table[c], resolve(str(c), limit), limit)
            rep = stamp(from_comparison(f"oracle:{c}", cmp, limit, detail="expected = brute force"))
        out.append(replace(rep, runtime_ms=rep.runtime_ms + share))
    return out


def classical_reports(order: int) -> list[VerificationReport]:
    out = [poch_split_check(order), lebesgue_check(order)]
    m = Monomial
    for alpha, z in ((m(-1, 1), m(1, 1)), (m(1, 2), m(1, 3)), (m(-1, 2), m(-1, 1))):
        out.append(qbinomial_check(alpha, z, order))
    for alpha, beta in ((m(-1, 2), m(1, 1)), (m(-1, 3), m(1, 2)), (m(1, 3), m(-1, 2))):
        out.append(asv_check(alpha, beta, order))
    # q -> q^2, z -> -q  |  q -> q, z -> 1  |  q -> q, z -> -1
    out.append(jacobi_triple_product_check(-1, 1, order, base=2))
    out.append(jacobi_triple_product_check(1, 0, order))
    out.append(jacobi_triple_product_check(-1, 0, order))
    # f(a, b) forms: (q^2, q^2) | (-q^2, -q^2) | (q, 1)
    out.append(jacobi_triple_product_check(1, 0, order, base=2, form="ramanujan"))
    out.append(jacobi_triple_product_check(-1, 2, order, base=2, base_sign=-1, form="ramanujan"))
    out.append(jacobi_triple_product_check(1, 0, order, base=1, form="ramanujan"))
    return out


# ---------------------------------------------------------------------------
# the whole suite

_NUM = re.compile(r"(\d+)")


def natural_key(check_id: str):
    return [int(p) if p.isdigit() else p for p in _NUM.split(check_id)]


def run_all(
    order: int,
    k_max: int,
    *,
    oracle_limit: int | None = DEFAULT_ORACLE_LIMIT,
    classical: bool = True,
    tables: Tables | None = None,
    allow_large_oracle: bool = False,
) -> list[VerificationReport]:
    """Every check, sorted by check id.  ``oracle_limit=None`` skips the oracle sweep."""
    _need(order, 16)
    if k_max < 1:
        raise TheoremError(f"k_max must be >= 1, got {k_max}")
    t = _tables(order, tables)
    reports: list[VerificationReport] = []
    for k in range(1, k_max + 1):
        reports.append(check_geq_k_identity(k, order, t))
        reports.append(check_exact_k_identity(k, order, t))
    reports += [
        check_exact2_recurrence(order, t),
        check_geq3_recurrence(order, t),
        check_dee_alternating(order, t),
        check_dee1_alternating(order, t),
        check_dee_geq2_alternating(order, t),
        check_de_reg4_relations(order, t),
        check_mod2_triangular(order, "exact", t),
        check_mod2_triangular(order, "congruence", t),
        check_mod2_square(order, "exact", t),
        check_mod2_square(order, "congruence", t),
        check_mod2_iff_triangular(order, t),
        check_mod4_cubic(order, "exact", t),
        check_mod4_cubic(order, "congruence", t),
        check_mod8_cubic(order, "exact", t),
        check_mod8_cubic(order, "congruence", t),
    ]
    reports += check_mod2_small_cases(t)
    reports += intermediate_reports(order, t)
    if classical:
        reports += classical_reports(order)
    if oracle_limit is not None:
        reports += check_oracles(oracle_limit, allow_large=allow_large_oracle)
    return sorted(reports, key=lambda r: natural_key(r.check_id))


CHECK_GROUPS = (
    "geq-k-identity", "exact-k-identity", "exact2-recurrence", "geq3-recurrence",
    "dee-alternating", "dee1-alternating", "dee-geq2-alternating", "de-reg4-relations",
    "mod2-triangular", "mod2-square", "mod2-small-cases", "mod2-iff-triangular",
    "mod4-cubic", "mod8-cubic", "step", "classical", "oracle",
)
