"""Truncated Laurent series over a prime field GF(q).

An element of F = GF(q)((t)) is stored as ``(val, coeffs, prec)``: the series
``sum(coeffs[k] * t**(val + k)) + O(t**prec)``.  ``prec is None`` marks an
exact element (a Laurent polynomial).  Exact elements stay exact under ring
operations; only inversion of a non-monomial produces a truncated series,
whose relative precision is bounded by the field's coefficient window.

Normal form: ``coeffs[0] != 0`` unless the element is zero.  An exact zero has
``coeffs == ()`` and ``prec is None``; an indeterminate zero (every known
coefficient vanishes) has ``coeffs == ()`` and ``val == prec``.
"""

from __future__ import annotations

import os
from functools import lru_cache

from .errors import PrecisionExhausted

INFINITY = float("inf")

DEFAULT_Q = 3
DEFAULT_PRECISION = 24


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def default_precision() -> int:
    env = os.environ.get("BTEMBED_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


class Field:
    """The local field GF(q)((t)) with a fixed coefficient window."""

    __slots__ = ("q", "precision", "_zero", "_one")

    def __init__(self, q: int = DEFAULT_Q, precision: int | None = None):
        if not _is_prime(q) or q == 2:
            raise ValueError(f"q must be an odd prime, got {q}")
        self.q = q
        self.precision = default_precision() if precision is None else int(precision)
        if self.precision < 1:
            raise ValueError("precision window must be positive")
        self._zero = LaurentScalar(self, 0, (), None)
        self._one = LaurentScalar(self, 0, (1,), None)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.q, self.precision) == (other.q, other.precision)

    def __hash__(self):
        return hash((self.q, self.precision))

    def __repr__(self):
        return f"Field(q={self.q}, precision={self.precision})"

    @property
    def zero(self) -> LaurentScalar:
        return self._zero

    @property
    def one(self) -> LaurentScalar:
        return self._one

    def t(self, k: int = 1) -> LaurentScalar:
        return LaurentScalar(self, k, (1,), None)

    def scalar(self, c: int) -> LaurentScalar:
        c %= self.q
        return LaurentScalar(self, 0, (c,), None) if c else self._zero

    def laurent(self, coeffs, val: int = 0, prec: int | None = None) -> LaurentScalar:
        return _normalize(self, val, [c % self.q for c in coeffs], prec)

    def coerce(self, x) -> LaurentScalar:
        if isinstance(x, LaurentScalar):
            if x.field != self:
                raise ValueError("scalars from different fields")
            return x
        if isinstance(x, int):
            return self.scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")


def _normalize(field: Field, val: int, coeffs: list, prec: int | None) -> LaurentScalar:
    start = 0
    n = len(coeffs)
    while start < n and coeffs[start] == 0:
        start += 1
    if prec is not None:
        n = min(n, prec - val)
    if start >= n:
        if prec is None:
            return field._zero
        return LaurentScalar(field, prec, (), prec)
    end = n
    if prec is None:
        while coeffs[end - 1] == 0:
            end -= 1
    return LaurentScalar(field, val + start, tuple(coeffs[start:end]), prec)


@lru_cache(maxsize=None)
def _inv_mod(c: int, q: int) -> int:
    return pow(c, q - 2, q)


class LaurentScalar:
    """An element of GF(q)((t)) with tracked absolute precision."""

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field: Field, val: int, coeffs: tuple, prec: int | None):
        self.field = field
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # --- predicates -------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.prec is None

    @property
    def is_determinate(self) -> bool:
        """True unless this is an indeterminate zero ``O(t^prec)``."""
        return bool(self.coeffs) or self.prec is None

    def valuation(self):
        if self.coeffs:
            return self.val
        if self.prec is None:
            return INFINITY
        raise PrecisionExhausted(f"cannot decide whether O(t^{self.prec}) is zero")

    def is_zero(self) -> bool:
        if self.coeffs:
            return False
        if self.prec is None:
            return True
        raise PrecisionExhausted(f"cannot decide whether O(t^{self.prec}) is zero")

    def val_at_least(self, m: int) -> bool:
        """Certified test ``valuation(self) >= m``."""
        if self.coeffs:
            return self.val >= m
        if self.prec is None or self.prec >= m:
            return True
        raise PrecisionExhausted(f"O(t^{self.prec}) cannot be compared with t^{m}")

    def lower_bound(self):
        """Valuation if determinate, else the precision floor (a lower bound)."""
        if self.coeffs:
            return self.val
        return INFINITY if self.prec is None else self.prec

    # --- ring operations ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentScalar):
            other = self.field.coerce(other)
        if other.is_exact_zero:
            return self
        if self.is_exact_zero:
            return other
        q = self.field.q
        a, b = self, other
        if a.prec is None and b.prec is None:
            prec = None
            lo = min(a.val, b.val)
            hi = max(a.val + len(a.coeffs), b.val + len(b.coeffs))
        else:
            prec = min(p for p in (a.prec, b.prec) if p is not None)
            lo = min(a.val, b.val)
            hi = prec
        if hi <= lo:
            return LaurentScalar(self.field, prec, (), prec)
        out = [0] * (hi - lo)
        for x in (a, b):
            off = x.val - lo
            for k, c in enumerate(x.coeffs):
                idx = off + k
                if idx >= len(out):
                    break
                out[idx] = (out[idx] + c) % q
        return _normalize(self.field, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        q = self.field.q
        return LaurentScalar(self.field, self.val, tuple((q - c) % q for c in self.coeffs), self.prec)

    def __sub__(self, other):
        if not isinstance(other, LaurentScalar):
            other = self.field.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentScalar):
            other = self.field.coerce(other)
        a, b = self, other
        if a.is_exact_zero or b.is_exact_zero:
            return self.field._zero
        q = self.field.q
        if a.prec is None and b.prec is None:
            prec = None
            length = len(a.coeffs) + len(b.coeffs) - 1
        else:
            cands = []
            if a.prec is not None:
                cands.append(a.prec + b.lower_bound())
            if b.prec is not None:
                cands.append(b.prec + a.lower_bound())
            prec = min(cands)
            if not a.coeffs or not b.coeffs:
                return LaurentScalar(self.field, prec, (), prec)
            length = min(len(a.coeffs) + len(b.coeffs) - 1, prec - a.val - b.val)
        val = a.val + b.val
        if length <= 0:
            return LaurentScalar(self.field, prec, (), prec)
        if len(a.coeffs) == 1:
            c = a.coeffs[0]
            out = [(c * x) % q for x in b.coeffs[:length]]
        elif len(b.coeffs) == 1:
            c = b.coeffs[0]
            out = [(c * x) % q for x in a.coeffs[:length]]
        else:
            out = [0] * length
            for i, x in enumerate(a.coeffs):
                if i >= length:
                    break
                if not x:
                    continue
                for j, y in enumerate(b.coeffs):
                    k = i + j
                    if k >= length:
                        break
                    out[k] += x * y
            out = [c % q for c in out]
        return _normalize(self.field, val, out, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> LaurentScalar:
        """Multiply by ``t**k``."""
        if self.is_exact_zero or k == 0:
            return self
        prec = None if self.prec is None else self.prec + k
        return LaurentScalar(self.field, self.val + k, self.coeffs, prec)

    def inverse(self) -> LaurentScalar:
        if not self.coeffs:
            if self.prec is None:
                raise ZeroDivisionError("inverse of exact zero")
            raise PrecisionExhausted("inverse of an indeterminate zero")
        q = self.field.q
        c0inv = _inv_mod(self.coeffs[0], q)
        if len(self.coeffs) == 1 and self.prec is None:
            return LaurentScalar(self.field, -self.val, (c0inv,), None)
        rel = self.field.precision
        if self.prec is not None:
            rel = min(rel, self.prec - self.val)
        c = self.coeffs
        out = [c0inv]
        for k in range(1, rel):
            acc = 0
            for j in range(1, min(k, len(c) - 1) + 1):
                acc += c[j] * out[k - j]
            out.append((-c0inv * acc) % q)
        return _normalize(self.field, -self.val, out, -self.val + rel)

    def __truediv__(self, other):
        if not isinstance(other, LaurentScalar):
            other = self.field.coerce(other)
        if other.prec is None and len(other.coeffs) == 1:
            c = _inv_mod(other.coeffs[0], self.field.q)
            return (self * c).shift(-other.val) if c != 1 else self.shift(-other.val)
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # --- truncation -----------------------------------------------------------
    def truncate_below(self, m: int) -> LaurentScalar:
        """Exact Laurent polynomial of the terms of degree ``< m``."""
        if self.prec is not None and self.prec < m:
            raise PrecisionExhausted(f"need coefficients below t^{m}, known only below t^{self.prec}")
        n = max(0, m - self.val)
        return _normalize(self.field, self.val, list(self.coeffs[:n]), None)

    def unit_part(self) -> LaurentScalar:
        """``self / t**valuation``; raises for zero."""
        if not self.coeffs:
            self.valuation()
            raise ZeroDivisionError("unit part of zero")
        return self.shift(-self.val)

    # --- comparison / hashing ---------------------------------------------------
    def key(self):
        return (self.val, self.coeffs, self.prec)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.coerce(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        q = self.field.q
        coeffs = [c if 2 * c <= q else c - q for c in self.coeffs]
        if self.prec is None:
            return [coeffs, self.val]
        return [coeffs, self.val, self.prec]

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.val + k
            if e == 0:
                terms.append(str(c))
            else:
                mono = "t" if e == 1 else f"t^{e}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        if self.prec is not None:
            terms.append(f"O(t^{self.prec})")
        return " + ".join(terms) if terms else "0"


def scalar_from_json(field: Field, data) -> LaurentScalar:
    """Decode ``int`` or ``[[c0, c1, ...], val]`` (optionally ``, prec``)."""
    if isinstance(data, int):
        return field.scalar(data)
    if isinstance(data, (list, tuple)) and len(data) in (2, 3) and isinstance(data[0], list):
        prec = data[2] if len(data) == 3 else None
        return field.laurent([int(c) for c in data[0]], int(data[1]), prec)
    raise ValueError(f"bad scalar encoding: {data!r}")


def valuation(a: LaurentScalar):
    return a.valuation()
