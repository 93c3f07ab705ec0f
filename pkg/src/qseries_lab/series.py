"""Truncated formal power series in q with exact integer coefficients.

A :class:`Series` carries its truncation order explicitly: coefficients are
meaningful for exponents ``0..order`` inclusive.  Binary operations on series of
different orders truncate to the smaller one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class SeriesError(ValueError):
    """Raised on invalid series construction or a non-series result."""


class Series:
    __slots__ = ("_coeffs", "_order")

    def __init__(self, coeffs: Iterable[int], order: int):
        if order < 0:
            raise SeriesError(f"order must be non-negative, got {order}")
        values = [int(c) for c in coeffs]
        if len(values) > order + 1:
            raise SeriesError(
                f"{len(values)} coefficients do not fit in order {order}"
            )
        values.extend([0] * (order + 1 - len(values)))
        self._coeffs = tuple(values)
        self._order = order

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    def __len__(self) -> int:
        return self._order + 1

    def __iter__(self):
        return iter(self._coeffs)

    def __getitem__(self, n: int) -> int:
        return coeff(self, n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Series):
            return self._order == other._order and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._order, self._coeffs))

    def __repr__(self) -> str:
        return f"Series({list(self._coeffs)!r}, order={self._order})"

    def __str__(self) -> str:
        terms = []
        for e, c in enumerate(self._coeffs):
            if c == 0:
                continue
            if e == 0:
                body = str(abs(c))
            else:
                mono = "q" if e == 1 else f"q^{e}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            text = "0"
        else:
            text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                text += f" {sign} {body}"
        return f"{text} + O(q^{self._order + 1})"

    def _coerce(self, other) -> Series | None:
        if isinstance(other, Series):
            return other
        if isinstance(other, int):
            return constant(other, self._order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else sub(other, self)

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        if isinstance(other, Series):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return power(self, k)

    def truncate(self, order: int) -> Series:
        if order > self._order:
            raise SeriesError(f"cannot extend order {self._order} to {order}")
        return Series(self._coeffs[: order + 1], order)

    def valuation(self) -> int | None:
        """Smallest exponent with a nonzero coefficient, None for the zero series."""
        for e, c in enumerate(self._coeffs):
            if c:
                return e
        return None

    def to_json(self) -> str:
        return json.dumps(to_dict(self))


def series_from_coeffs(values: Sequence[int], order: int) -> Series:
    return Series(values, order)


def constant(c: int, order: int) -> Series:
    return Series([c], order)


def one(order: int) -> Series:
    return Series([1], order)


def zero(order: int) -> Series:
    return Series([], order)


def monomial(c: int, e: int, order: int) -> Series:
    """``c * q^e`` truncated; exponents above the order give the zero series."""
    if e < 0:
        raise SeriesError(f"negative exponent {e}")
    if e > order:
        return zero(order)
    values = [0] * (e + 1)
    values[e] = c
    return Series(values, order)


def _raw(values: list[int], order: int) -> Series:
    # trusted fast path: values already has length order+1 and holds ints
    s = Series.__new__(Series)
    s._coeffs = tuple(values)
    s._order = order
    return s


def add(f: Series, g: Series) -> Series:
    n = min(f.order, g.order)
    return _raw([a + b for a, b in zip(f.coeffs[: n + 1], g.coeffs)], n)


def sub(f: Series, g: Series) -> Series:
    n = min(f.order, g.order)
    return _raw([a - b for a, b in zip(f.coeffs[: n + 1], g.coeffs)], n)


def neg(f: Series) -> Series:
    return _raw([-a for a in f.coeffs], f.order)


def scale(f: Series, c: int) -> Series:
    return _raw([c * a for a in f.coeffs], f.order)


def mul(f: Series, g: Series) -> Series:
    """Cauchy product truncated at the smaller order."""
    n = min(f.order, g.order)
    a = f.coeffs
    b = g.coeffs
    out = [0] * (n + 1)
    for i in range(n + 1):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return _raw(out, n)


def power(f: Series, k: int) -> Series:
    if k < 0:
        return power(invert(f), -k)
    result = one(f.order)
    base = f
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def invert(f: Series) -> Series:
    """Reciprocal of a series whose constant term is +1 or -1."""
    a = f.coeffs
    f0 = a[0]
    if f0 not in (1, -1):
        raise SeriesError(
            f"constant term {f0} is not a unit; series is not invertible over the integers"
        )
    n = f.order
    g = [0] * (n + 1)
    g[0] = f0
    support = [j for j in range(1, n + 1) if a[j]]
    for m in range(1, n + 1):
        acc = 0
        for j in support:
            if j > m:
                break
            acc += a[j] * g[m - j]
        g[m] = -f0 * acc
    return _raw(g, n)


def divide(f: Series, g: Series) -> Series:
    return mul(f, invert(g))


def times_binomial(f: Series, c: int, e: int) -> Series:
    """``f * (1 - c*q^e)`` for e >= 0, in linear time."""
    if e < 0:
        raise SeriesError(f"negative exponent {e}")
    a = f.coeffs
    out = list(a)
    if e == 0:
        return _raw([(1 - c) * x for x in a], f.order)
    for i in range(e, f.order + 1):
        out[i] -= c * a[i - e]
    return _raw(out, f.order)


def over_binomial(f: Series, c: int, e: int) -> Series:
    """``f / (1 - c*q^e)`` for e >= 1, in linear time."""
    if e < 1:
        raise SeriesError(f"(1 - c*q^{e}) is not a unit power series")
    out = list(f.coeffs)
    for i in range(e, f.order + 1):
        out[i] += c * out[i - e]
    return _raw(out, f.order)


def shift(f: Series, a: int) -> Series:
    """Multiply by ``q^a``; coefficients pushed past the order are dropped."""
    if a < 0:
        raise SeriesError(f"shift amount must be non-negative, got {a} (use shift_down)")
    n = f.order
    if a > n:
        return zero(n)
    return _raw([0] * a + list(f.coeffs[: n + 1 - a]), n)


def shift_down(f: Series, a: int) -> Series:
    """Divide by ``q^a``; requires the coefficients of ``q^0..q^(a-1)`` to vanish.

    The result has order ``order - a``.
    """
    if a < 0:
        raise SeriesError(f"shift amount must be non-negative, got {a}")
    if a > f.order:
        raise SeriesError(f"cannot divide a series of order {f.order} by q^{a}")
    low = f.coeffs[:a]
    for e, c in enumerate(low):
        if c:
            raise SeriesError(
                f"cannot divide by q^{a}: coefficient of q^{e} is {c}, not 0"
            )
    return _raw(list(f.coeffs[a:]), f.order - a)


def dilate(f: Series, m: int) -> Series:
    """Substitute ``q -> q^m`` (m >= 1), keeping the order."""
    if m < 1:
        raise SeriesError(f"dilation factor must be positive, got {m}")
    n = f.order
    out = [0] * (n + 1)
    for i, c in enumerate(f.coeffs):
        if i * m > n:
            break
        out[i * m] = c
    return _raw(out, n)


def coeff(f: Series, n: int) -> int:
    if not 0 <= n <= f.order:
        raise IndexError(f"exponent {n} outside 0..{f.order}")
    return f.coeffs[n]


def reduce_mod(f: Series, m: int) -> Series:
    if m < 2:
        raise SeriesError(f"modulus must be at least 2, got {m}")
    return _raw([c % m for c in f.coeffs], f.order)


@dataclass(frozen=True)
class Mismatch:
    index: int
    expected: int
    actual: int


@dataclass(frozen=True)
class Comparison:
    equal: bool
    mismatch: Mismatch | None = None

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to(f: Series, g: Series, n: int, modulus: int | None = None) -> Comparison:
    """Compare coefficients of ``q^0..q^n``; report the first disagreement.

    ``expected`` is taken from ``f`` and ``actual`` from ``g``.  With a modulus the
    comparison is of residues.
    """
    if n > min(f.order, g.order):
        raise SeriesError(
            f"cannot compare to q^{n}: orders are {f.order} and {g.order}"
        )
    a, b = f.coeffs, g.coeffs
    for i in range(n + 1):
        x, y = a[i], b[i]
        same = x == y if modulus is None else (x - y) % modulus == 0
        if not same:
            return Comparison(False, Mismatch(i, x, y))
    return Comparison(True)


def to_dict(f: Series) -> dict:
    return {"order": f.order, "coeffs": [str(c) for c in f.coeffs]}


def from_dict(data: dict) -> Series:
    try:
        order = int(data["order"])
        values = [int(c) for c in data["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SeriesError(f"malformed series object: {exc}") from exc
    if len(values) != order + 1:
        raise SeriesError(
            f"series object has {len(values)} coefficients for order {order}"
        )
    return Series(values, order)


def from_json(text: str) -> Series:
    return from_dict(json.loads(text))
