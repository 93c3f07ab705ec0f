"""q-Pochhammer symbols, theta series and the partition generating functions.

Every parameter that the classical identities leave as a free complex number
(alpha, beta, z) is restricted here to a signed monomial ``±q^a``, which keeps
all arithmetic inside the integer power-series ring.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from . import series as S
from .report import VerificationReport, combine, from_comparison, timed
from .series import Series, SeriesError

INFINITE = math.inf


class QProductError(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    """``sign * q^exp``; the exponent may be negative in intermediate algebra."""

    sign: int
    exp: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise QProductError(f"monomial sign must be +1 or -1, got {self.sign}")

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self.sign * other.sign, self.exp + other.exp)

    def inverse(self) -> Monomial:
        return Monomial(self.sign, -self.exp)

    def __pow__(self, k: int) -> Monomial:
        return Monomial(self.sign ** (k % 2), self.exp * k)

    def __str__(self) -> str:
        body = "1" if self.exp == 0 else ("q" if self.exp == 1 else f"q^{self.exp}")
        return ("-" if self.sign < 0 else "") + body

    @classmethod
    def parse(cls, text: str) -> Monomial:
        """Read ``q``, ``-q^3``, ``1``, ``-1`` style text."""
        t = text.replace(" ", "")
        sign = 1
        if t.startswith(("+", "-")):
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        if t == "1":
            return cls(sign, 0)
        if t == "q":
            return cls(sign, 1)
        if t.startswith("q^"):
            try:
                return cls(sign, int(t[2:].strip("()")))
            except ValueError:
                pass
        raise QProductError(f"not a signed monomial: {text!r}")


@dataclass(frozen=True)
class PochhammerSymbol:
    """``(sign*q^base_exp; q^step_exp)_count``."""

    sign: int
    base_exp: int
    step_exp: int
    count: float | int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise QProductError(f"sign must be +1 or -1, got {self.sign}")
        if self.base_exp < 0:
            raise QProductError(f"base exponent must be >= 0, got {self.base_exp}")
        if self.step_exp < 1:
            raise QProductError(f"step exponent must be >= 1, got {self.step_exp}")
        if self.count != INFINITE and (self.count < 0 or int(self.count) != self.count):
            raise QProductError("count must be a non-negative integer or INFINITE")

    @property
    def infinite(self) -> bool:
        return self.count == INFINITE


def _times_poch(f: Series, c: int, a: int, b: int, count, *, divide: bool = False) -> Series:
    """Multiply (or divide) ``f`` by ``prod_j (1 - c*q^(a+j*b))``.

    Factors whose exponent exceeds the order are identically 1 and skipped, so
    an infinite count terminates.
    """
    n = f.order
    j = 0
    while count == INFINITE or j < count:
        e = a + j * b
        if e > n:
            break
        if divide:
            f = S.over_binomial(f, c, e)
        else:
            f = S.times_binomial(f, c, e)
        j += 1
    return f


def _times_mono_poch(f: Series, alpha: Monomial, step: Monomial) -> Series:
    """Multiply ``f`` by ``(alpha; step)_inf`` where step = ±q^s with s >= 1."""
    if step.exp < 1 or alpha.exp < 0:
        raise QProductError(f"({alpha}; {step})_inf is not a power series")
    term = alpha
    while term.exp <= f.order:
        f = S.times_binomial(f, term.sign, term.exp)
        term = term * step
    return f


def _validate(sym: PochhammerSymbol):
    if sym.base_exp == 0 and sym.sign == 1 and (sym.infinite or sym.count >= 1):
        raise QProductError("(1; q^b)_n with n >= 1 contains the zero factor (1 - 1)")


def poch(sym: PochhammerSymbol, order: int) -> Series:
    _validate(sym)
    return _times_poch(S.one(order), sym.sign, sym.base_exp, sym.step_exp, sym.count)


def poch_quotient(
    numer: list[PochhammerSymbol], denom: list[PochhammerSymbol], order: int
) -> Series:
    """Product of the numerator symbols over the product of the denominator ones."""
    f = S.one(order)
    for sym, divide in [(s, False) for s in numer] + [(s, True) for s in denom]:
        _validate(sym)
        f = _times_poch(f, sym.sign, sym.base_exp, sym.step_exp, sym.count, divide=divide)
    return f


def P(sign: int, a: int, b: int, count=INFINITE) -> PochhammerSymbol:
    return PochhammerSymbol(sign, a, b, count)


def euler(order: int, step: int = 1) -> Series:
    """``(q^step; q^step)_inf``."""
    return poch(P(1, step, step), order)


class ThetaKind(enum.Enum):
    PHI = "phi"  # sum over k in Z of q^(k^2)
    TRIANGULAR_SIGNED = "triangular_signed"  # sum n>=0 of (-1)^ceil(n/2) q^(n(n+1)/2)
    TRIANGULAR = "triangular"  # sum n>=0 of q^(n(n+1)/2)
    PRONIC = "pronic"  # sum n>=0 of q^(n(n+1))
    SQUARE_ALT = "square_alt"  # sum over n in Z of (-1)^n q^(2n^2)


def _terms_one_sided(expo: Callable[[int], int], sign: Callable[[int], int], order: int):
    n = 0
    while expo(n) <= order:
        yield expo(n), sign(n)
        n += 1


def theta(kind: ThetaKind, order: int) -> Series:
    if order < 0:
        raise SeriesError("order must be non-negative")
    out = [0] * (order + 1)
    if kind is ThetaKind.PHI:
        terms = [(0, 1)] + [(e, 2) for e, _ in _terms_one_sided(lambda k: (k + 1) ** 2, lambda k: 1, order)]
    elif kind is ThetaKind.SQUARE_ALT:
        terms = [(0, 1)] + [
            (e, 2 * s)
            for e, s in _terms_one_sided(lambda k: 2 * (k + 1) ** 2, lambda k: (-1) ** (k + 1), order)
        ]
    elif kind is ThetaKind.TRIANGULAR:
        terms = _terms_one_sided(lambda n: n * (n + 1) // 2, lambda n: 1, order)
    elif kind is ThetaKind.TRIANGULAR_SIGNED:
        terms = _terms_one_sided(lambda n: n * (n + 1) // 2, lambda n: (-1) ** ((n + 1) // 2), order)
    elif kind is ThetaKind.PRONIC:
        terms = _terms_one_sided(lambda n: n * (n + 1), lambda n: 1, order)
    else:  # pragma: no cover
        raise QProductError(f"unknown theta kind {kind}")
    for e, c in terms:
        out[e] += c
    return Series(out, order)


# ---------------------------------------------------------------------------
# classical identities

def _check_order(order: int, minimum: int = 0):
    if order < minimum:
        raise QProductError(f"order must be at least {minimum}, got {order}")


def _split_sides(alpha: Monomial, order: int, span: int = 6):
    c, a = alpha.sign, alpha.exp
    one = S.one(order)
    for m in range(span + 1):
        for n in range(span + 1):
            lhs = _times_poch(one, c, a, 1, n + m)
            rhs = _times_poch(_times_poch(one, c, a, 1, m), c, a + m, 1, n)
            yield f"finite[m={m},n={n}]", lhs, rhs
    full = _times_poch(one, c, a, 1, INFINITE)
    for n in range(span + 1):
        rhs = _times_poch(_times_poch(one, c, a, 1, n), c, a + n, 1, INFINITE)
        yield f"tail[n={n}]", full, rhs
    rhs = _times_poch(_times_poch(one, c, a, 2, INFINITE), c, a + 1, 2, INFINITE)
    yield "parity", full, rhs


SPLIT_ALPHAS = tuple(Monomial(s, e) for e in (1, 2, 3) for s in (1, -1))


def poch_split_check(order: int, alphas=SPLIT_ALPHAS) -> VerificationReport:
    """Concatenation, tail and even/odd splitting laws of Pochhammer products."""
    _check_order(order, 1)
    with timed() as stamp:
        parts = []
        for alpha in alphas:
            for label, lhs, rhs in _split_sides(alpha, order):
                cmp = S.equal_up_to(lhs, rhs, order)
                parts.append(from_comparison(f"alpha={alpha} {label}", cmp, order))
        return stamp(combine("classical:poch-split", parts, order))


def _bilateral(expo: Callable[[int], int], coef: Callable[[int], int], order: int) -> Series:
    # exponents must grow in |n| beyond n = 0, -1 so that scanning can stop
    out = [0] * (order + 1)
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        misses = 0
        while misses < 2:
            e = expo(n)
            if e < 0:
                raise QProductError(f"bilateral sum has negative exponent {e} at n={n}")
            if e <= order:
                out[e] += coef(n)
                misses = 0
            else:
                misses += 1
            n += direction
    return Series(out, order)


def jacobi_triple_product_check(
    z_sign: int,
    z_exp: int,
    order: int,
    *,
    base: int = 1,
    base_sign: int = 1,
    form: str = "jacobi",
) -> VerificationReport:
    """Jacobi triple product under ``q -> base_sign*q^base`` and ``z -> z_sign*q^z_exp``.

    ``form="jacobi"``: (q^2;q^2)(-zq;q^2)(-q/z;q^2) = sum z^n q^(n^2).
    ``form="ramanujan"``: (-q;qz)(-z;qz)(qz;qz) = sum q^(n(n+1)/2) z^(n(n-1)/2).
    """
    _check_order(order)
    Q = Monomial(base_sign, base)
    z = Monomial(z_sign, z_exp)
    if base < 1 and form == "jacobi":
        raise QProductError("jacobi form needs q -> ±q^b with b >= 1")
    one = S.one(order)
    if form == "jacobi":
        step = Q * Q
        first = Monomial(-1, 0) * z * Q
        second = Monomial(-1, 0) * Q * z.inverse()
        if first.exp < 0 or second.exp < 0:
            raise QProductError(
                f"z = {z} with q -> {Q} leaves negative exponents in the product"
            )
        lhs = _times_mono_poch(one, step, step)
        lhs = _times_mono_poch(lhs, first, step)
        lhs = _times_mono_poch(lhs, second, step)
        rhs = _bilateral(
            lambda n: z.exp * n + Q.exp * n * n,
            lambda n: (z.sign * Q.sign) ** (n % 2),
            order,
        )
        label = f"JTP[z={z},q->{Q}]"
    elif form == "ramanujan":
        a, b = Q, z
        ab = a * b
        if a.exp < 0 or b.exp < 0 or ab.exp < 1:
            raise QProductError(
                f"f({a}, {b}) is not a power series (need exponents >= 0 summing to >= 1)"
            )
        minus = Monomial(-1, 0)
        lhs = _times_mono_poch(one, minus * a, ab)
        lhs = _times_mono_poch(lhs, minus * b, ab)
        lhs = _times_mono_poch(lhs, ab, ab)
        rhs = _bilateral(
            lambda n: a.exp * (n * (n + 1) // 2) + b.exp * (n * (n - 1) // 2),
            lambda n: a.sign ** ((n * (n + 1) // 2) % 2) * b.sign ** ((n * (n - 1) // 2) % 2),
            order,
        )
        label = f"RTP[a={a},b={b}]"
    else:
        raise QProductError(f"unknown form {form!r}")
    with timed() as stamp:
        return stamp(from_comparison(f"classical:{label}", S.equal_up_to(lhs, rhs, order), order))


def qbinomial_check(alpha: Monomial, z: Monomial, order: int) -> VerificationReport:
    """sum_n (alpha;q)_n/(q;q)_n z^n  versus  (alpha z;q)_inf/(z;q)_inf."""
    _check_order(order)
    if z.exp < 1:
        raise QProductError(f"z = {z} must have positive valuation")
    if alpha.exp < 0:
        raise QProductError(f"alpha = {alpha} must be a power series")
    with timed() as stamp:
        lhs = S.zero(order)
        term = S.one(order)  # (alpha;q)_n z^n / (q;q)_n
        n = 0
        while n * z.exp <= order:
            lhs = lhs + term
            n += 1
            term = S.times_binomial(term, alpha.sign, alpha.exp + n - 1)
            term = S.over_binomial(term, 1, n)
            term = S.shift(term, z.exp) * z.sign
        az = alpha * z
        rhs = _times_poch(S.one(order), az.sign, az.exp, 1, INFINITE)
        rhs = _times_poch(rhs, z.sign, z.exp, 1, INFINITE, divide=True)
        cmp = S.equal_up_to(lhs, rhs, order)
        return stamp(from_comparison(f"classical:qbinomial[alpha={alpha},z={z}]", cmp, order))


def asv_check(alpha: Monomial, beta: Monomial, order: int, *, start: int = 0) -> VerificationReport:
    """sum_n (alpha;q)_n/(beta;q)_n q^n against its closed form, monomial parameters.

    Both sides are multiplied by ``q^(b-1)`` (``beta = ±q^b``) so that the
    division by beta stays inside the power-series ring.  The identity holds for
    the sum starting at ``n = 0``; ``start=1`` evaluates the other summation
    range for comparison.
    """
    _check_order(order)
    a, b = alpha.exp, beta.exp
    if b < 1:
        raise QProductError(f"beta = {beta}: (beta;q)_n must be invertible, need exponent >= 1")
    if alpha.exp < 0:
        raise QProductError(f"alpha = {alpha} must be a power series")
    ratio = alpha * beta.inverse() * Monomial(1, 1)  # alpha*q/beta
    if ratio.exp < 1:
        raise QProductError(
            f"alpha*q/beta = {ratio} must have positive valuation for 1/(1 - alpha q/beta)"
        )
    with timed() as stamp:
        lhs = S.zero(order)
        term = S.one(order)  # (alpha;q)_n/(beta;q)_n q^n
        n = 0
        while n <= order:
            if n >= start:
                lhs = lhs + term
            term = S.times_binomial(term, alpha.sign, a + n)
            term = S.over_binomial(term, beta.sign, b + n)
            term = S.shift(term, 1)
            n += 1
        lhs = S.shift(lhs, b - 1)
        # q^(b-1) * RHS = sign_b (alpha;q)_inf / ((beta;q)_inf (1 - r)) + (q^(b-1) - sign_b)/(1 - r)
        first = _times_poch(S.one(order), alpha.sign, a, 1, INFINITE)
        first = _times_poch(first, beta.sign, b, 1, INFINITE, divide=True)
        first = S.over_binomial(first, ratio.sign, ratio.exp) * beta.sign
        second = S.over_binomial(S.monomial(1, b - 1, order) - beta.sign, ratio.sign, ratio.exp)
        rhs = first + second
        label = f"classical:ratio-sum[alpha={alpha},beta={beta}]" + ("" if start == 0 else f"[start={start}]")
        cmp = S.equal_up_to(lhs, rhs, order)
        return stamp(from_comparison(label, cmp, order, detail=f"both sides times q^{b - 1}"))


def lebesgue_check(order: int, *, perturb: Series | None = None) -> VerificationReport:
    """(-q^2;q^2)_inf (-q;q)_inf = (q^4;q^4)_inf / (q;q)_inf.

    ``perturb`` is added to the right-hand side; it exists for negative controls.
    """
    _check_order(order, 1)
    with timed() as stamp:
        lhs = poch_quotient([P(-1, 2, 2), P(-1, 1, 1)], [], order)
        rhs = gen_reg(4, order)
        if perturb is not None:
            rhs = rhs + perturb
        return stamp(from_comparison("classical:lebesgue", S.equal_up_to(lhs, rhs, order), order))


# ---------------------------------------------------------------------------
# generating functions

def gen_reg(t: int, order: int) -> Series:
    """(q^t;q^t)_inf / (q;q)_inf."""
    if t < 2:
        raise QProductError(f"t-regular partitions need t >= 2, got {t}")
    return poch_quotient([P(1, t, t)], [P(1, 1, 1)], order)


def gen_reg4_gt1(order: int) -> Series:
    return S.times_binomial(gen_reg(4, order), 1, 1)


def gen_ped(order: int) -> Series:
    return poch_quotient([P(-1, 2, 2)], [P(1, 1, 2)], order)


def gen_cubic(order: int) -> Series:
    return poch_quotient([], [P(1, 1, 1), P(1, 2, 2)], order)


def _de_sum(order: int, exponent: Callable[[int], int], extra_odd: int) -> Series:
    """sum_{n>=0} (-q^2;q^2)_n q^exponent(n) / (q;q^2)_(n + extra_odd).

    ``exponent`` must be strictly increasing; the sum stops at the first n with
    exponent(n) > order, after which every term vanishes modulo q^(order+1).
    """
    out = S.zero(order)
    ratio = _times_poch(S.one(order), 1, 1, 2, extra_odd, divide=True)
    n = 0
    while True:
        e = exponent(n)
        if e > order:
            return out
        out = out + S.shift(ratio, e)
        # advance (-q^2;q^2)_n / (q;q^2)_(n+extra) to index n+1
        ratio = S.times_binomial(ratio, -1, 2 * n + 2)
        ratio = S.over_binomial(ratio, 1, 2 * (n + extra_odd) + 1)
        n += 1


def _need_k(k: int):
    if k < 1:
        raise QProductError(f"multiplicity parameter k must be >= 1, got {k}")


def gen_DE1(order: int) -> Series:
    return _de_sum(order, lambda n: 2 * n + 1, 1)


def gen_DE2(order: int) -> Series:
    return _de_sum(order, lambda n: 4 * n + 2, 1)


def gen_DE3(order: int) -> Series:
    return _de_sum(order, lambda n: 2 * n + 1, 0)


def gen_DE_geq(k: int, order: int) -> Series:
    _need_k(k)
    return _de_sum(order, lambda n: (2 * n + 1) * k, 1)


def gen_DE_exact(k: int, order: int) -> Series:
    _need_k(k)
    return _de_sum(order, lambda n: (2 * n + 1) * k, 0)


def gen_DEe(order: int) -> Series:
    return _de_sum(order, lambda n: 2 * n, 0)


def gen_DEe_exact(k: int, order: int) -> Series:
    _need_k(k)
    return _de_sum(order, lambda n: (2 * n + 2) * k, 1)


def gen_DEe_geq(k: int, order: int) -> Series:
    _need_k(k)
    return _de_sum(order, lambda n: 2 * n * k, 0)


def gen_DEe_atleast(k: int, order: int) -> Series:
    """Even largest part 2n repeated at least k times, smaller even parts distinct.

    1 + sum_{n>=1} (-q^2;q^2)_(n-1) q^(2nk) / ((1 - q^(2n)) (q;q^2)_n), which
    counts the multiplicity of the largest part without an upper bound.
    """
    _need_k(k)
    out = S.one(order)
    ratio = S.one(order)  # (-q^2;q^2)_(n-1) / (q;q^2)_n at n = 1 before the odd factor
    n = 1
    while 2 * n * k <= order:
        ratio = S.over_binomial(ratio, 1, 2 * n - 1)
        out = out + S.shift(S.over_binomial(ratio, 1, 2 * n), 2 * n * k)
        ratio = S.times_binomial(ratio, -1, 2 * n)
        n += 1
    return out


def gen_DEe_any(order: int) -> Series:
    return gen_DEe_atleast(1, order)


# ---------------------------------------------------------------------------
# named-series registry

_FIXED: dict[str, Callable[[int], Series]] = {
    "reg4": lambda N: gen_reg(4, N),
    "ped": gen_ped,
    "cubic": gen_cubic,
    "de1": gen_DE1,
    "de2": gen_DE2,
    "de3": gen_DE3,
    "dee": gen_DEe,
    "reg4gt1": gen_reg4_gt1,
    "deeany": gen_DEe_any,
}

_PARAMETERIZED: dict[str, Callable[[int, int], Series]] = {
    "reg": gen_reg,
    "degeq": gen_DE_geq,
    "deexact": gen_DE_exact,
    "deeexact": gen_DEe_exact,
    "deegeq": gen_DEe_geq,
    "deeatleast": gen_DEe_atleast,
}

REGISTRY_NAMES = (
    "reg4", "reg:t", "ped", "cubic", "DE1", "DE2", "DE3", "DEgeq:k", "DEexact:k",
    "DEe", "DEeExact:k", "DEeGeq:k", "reg4gt1", "DEeAny", "DEeAtLeast:k",
)


class UnknownSeries(KeyError):
    pass


def resolve(name: str, order: int) -> Series:
    """Expand a registry name such as ``"DE3"`` or ``"DEgeq:3"`` (case-insensitive)."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key](order)
    head, sep, arg = key.partition(":")
    if sep and head in _PARAMETERIZED:
        try:
            param = int(arg)
        except ValueError:
            raise UnknownSeries(f"bad parameter in {name!r}") from None
        return _PARAMETERIZED[head](param, order)
    raise UnknownSeries(f"unknown series {name!r}; known: {', '.join(REGISTRY_NAMES)}")


def is_registry_name(name: str) -> bool:
    key = name.strip().lower()
    head, sep, _ = key.partition(":")
    return key in _FIXED or (bool(sep) and head in _PARAMETERIZED)
