"""Exact coefficient arithmetic and truncated Puiseux series.

Scalars live in QQ (arbitrary-precision rationals) or in a prime field F_p,
always in canonical form: reduced fractions, or representatives 0..p-1.
Puiseux series are finite sums of terms c * t^q with q rational, together
with a truncation order below which the series is trusted.  A truncation of
``None`` means the series is exact (all omitted coefficients are zero);
declared arc data normally carries a finite truncation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, InputError


class Infinite:
    """Singleton for infinite orders, indices and pseudo-values."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __gt__(self, other):
        return not isinstance(other, Infinite)

    def __lt__(self, other):
        return False

    def __ge__(self, other):
        return True

    def __le__(self, other):
        return isinstance(other, Infinite)


INFINITE = Infinite()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: QQ for characteristic 0, F_p for prime p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not is_prime(p):
            raise InputError(f"characteristic must be 0 or prime, got {p}")

    @property
    def modular(self) -> bool:
        return self.characteristic != 0

    def scalar(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise InputError("scalar from a different field")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, int):
            value = Fraction(value)
        if not isinstance(value, Fraction):
            raise InputError(f"cannot build scalar from {value!r}")
        if not self.modular:
            return Scalar(self, value)
        p = self.characteristic
        den = value.denominator % p
        if den == 0:
            raise DivisionByZero(f"denominator divisible by {p}")
        return Scalar(self, value.numerator * pow(den, -1, p) % p)

    @property
    def zero(self) -> "Scalar":
        return self.scalar(0)

    @property
    def one(self) -> "Scalar":
        return self.scalar(1)


@dataclass(frozen=True)
class Scalar:
    """Canonical field element; arithmetic is exact, never rounded."""

    field: FieldSpec
    value: object  # Fraction (char 0) or int in 0..p-1 (char p)

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise InputError("mixed-field scalar arithmetic")
            return other
        return self.field.scalar(other)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other):
        other = self._coerce(other)
        if self.field.modular:
            return Scalar(self.field, (self.value + other.value) % self.field.characteristic)
        return Scalar(self.field, self.value + other.value)

    __radd__ = __add__

    def __neg__(self):
        if self.field.modular:
            return Scalar(self.field, (-self.value) % self.field.characteristic)
        return Scalar(self.field, -self.value)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.field.modular:
            return Scalar(self.field, (self.value * other.value) % self.field.characteristic)
        return Scalar(self.field, self.value * other.value)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        if self.field.modular:
            return Scalar(self.field, pow(self.value, -1, self.field.characteristic))
        return Scalar(self.field, 1 / self.value)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise InputError("scalar powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Scalar({self.value}, char={self.field.characteristic})"


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Dispatch form of field arithmetic: op in {add, mul, div}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise InputError(f"unknown scalar op {op!r}")


def _tmin(a, b):
    # min of truncations where None means +infinity
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _tadd(a, b):
    if a is None or b is None:
        return None
    return a + b


class PuiseuxSeries:
    """Finite sum of terms c * t^q with rational q, trusted below ``trunc``.

    The ramification index N is always normalized to the lcm of the exponent
    denominators (including the truncation order when finite), so equal
    series compare equal.  Exponents may be negative in intermediate
    computations; declared arc components are checked elsewhere.
    """

    __slots__ = ("field", "terms", "trunc", "ram")

    def __init__(self, field: FieldSpec, terms=None, trunc=None):
        self.field = field
        if trunc is not None and not isinstance(trunc, Fraction):
            trunc = Fraction(trunc)
        self.trunc = trunc
        clean = {}
        for q, c in (terms or {}).items():
            if not isinstance(q, Fraction):
                q = Fraction(q)
            c = field.scalar(c)
            if c.is_zero:
                continue
            if trunc is not None and q >= trunc:
                continue
            if q in clean:
                s = clean[q] + c
                if s.is_zero:
                    del clean[q]
                else:
                    clean[q] = s
            else:
                clean[q] = c
        self.terms = clean
        dens = [q.denominator for q in clean]
        if trunc is not None:
            dens.append(trunc.denominator)
        self.ram = math.lcm(*dens) if dens else 1

    @classmethod
    def zero(cls, field, trunc=None):
        return cls(field, {}, trunc)

    @classmethod
    def monomial(cls, field, exponent, coeff=1, trunc=None):
        return cls(field, {Fraction(exponent): field.scalar(coeff)}, trunc)

    @property
    def is_zero(self) -> bool:
        """True when no term survives below the truncation."""
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return self.trunc is None

    def order(self):
        """Minimum exponent with nonzero coefficient, or None if empty."""
        if not self.terms:
            return None
        return min(self.terms)

    def leading_coeff(self) -> Scalar:
        q = self.order()
        if q is None:
            raise DivisionByZero("leading coefficient of a zero series")
        return self.terms[q]

    def _effective_order(self):
        # For truncation propagation: a zero series counts as its truncation.
        q = self.order()
        if q is not None:
            return q
        return self.trunc  # may be None = exactly zero

    def _coerce(self, other):
        if isinstance(other, PuiseuxSeries):
            if other.field != self.field:
                raise InputError("mixed-field series arithmetic")
            return other
        return PuiseuxSeries(self.field, {Fraction(0): self.field.scalar(other)})

    def __add__(self, other):
        other = self._coerce(other)
        trunc = _tmin(self.trunc, other.trunc)
        terms = dict(self.terms)
        for q, c in other.terms.items():
            if q in terms:
                terms[q] = terms[q] + c
            else:
                terms[q] = c
        return PuiseuxSeries(self.field, terms, trunc)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.field, {q: -c for q, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        trunc = _tmin(
            _tadd(self.trunc, other._effective_order()),
            _tadd(other.trunc, self._effective_order()),
        )
        terms = {}
        for q1, c1 in self.terms.items():
            for q2, c2 in other.terms.items():
                q = q1 + q2
                c = c1 * c2
                if q in terms:
                    terms[q] = terms[q] + c
                else:
                    terms[q] = c
        return PuiseuxSeries(self.field, terms, trunc)

    __rmul__ = __mul__

    def inverse(self, window=None) -> "PuiseuxSeries":
        """Multiplicative inverse.

        For an exact single-term series the inverse is exact.  Otherwise the
        geometric expansion needs a finite window: the series' own truncation
        when it has one, else the explicit ``window`` argument.
        """
        q = self.order()
        if q is None:
            raise DivisionByZero("inverse of a zero series")
        lead = self.terms[q]
        if len(self.terms) == 1 and self.is_exact:
            return PuiseuxSeries.monomial(self.field, -q, lead.inverse())
        head = PuiseuxSeries.monomial(self.field, -q, lead.inverse())
        u = self * head - self.field.one  # order > 0
        if u.trunc is None:
            if u.is_zero:
                return head
            if window is None:
                raise InputError("inverse of an exact multi-term series needs a window")
            u = PuiseuxSeries(self.field, u.terms, Fraction(window))
        du = u.order()
        acc = PuiseuxSeries(self.field, {Fraction(0): self.field.one}, u.trunc)
        power = acc
        if du is not None:
            k = 1
            while k * du < u.trunc:
                power = power * (-u)
                acc = acc + power
                k += 1
        return acc * head

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise InputError("series powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        result = PuiseuxSeries(self.field, {Fraction(0): self.field.one})
        base = self
        if k == 0:
            return result
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def truncated(self, trunc) -> "PuiseuxSeries":
        return PuiseuxSeries(self.field, self.terms, _tmin(self.trunc, Fraction(trunc)))

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.terms == other.terms
            and self.trunc == other.trunc
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items()), self.trunc))

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"PuiseuxSeries({format_series(self)!r})"


_TERM_RE = re.compile(
    r"^t(?:\^(?:\((?P<paren>-?\d+(?:/\d+)?)\)|(?P<plain>-?\d+(?:/\d+)?)))?"
    r"(?:\*(?P<coeff>-?\d+(?:/\d+)?))?$"
)
_CONST_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_series(field: FieldSpec, text: str, default_trunc=None) -> PuiseuxSeries:
    """Parse the series literal grammar: ``t^(3/2)*1 + t^2*-1 | trunc 5 | N 2``.

    The coefficient suffix ``*c`` defaults to 1, the exponent to 1 (bare
    ``t``); a bare rational is a constant term.  The ``N`` part is advisory:
    the ramification index is recomputed from the content.
    """
    parts = [p.strip() for p in text.split("|")]
    trunc = default_trunc
    for extra in parts[1:]:
        if extra.startswith("trunc"):
            trunc = Fraction(extra[len("trunc"):].strip())
        elif extra.startswith("N"):
            int(extra[1:].strip())  # validated, then recomputed
        elif extra:
            raise InputError(f"unknown series annotation {extra!r}")
    body = parts[0].strip()
    terms = {}
    if body not in ("", "0"):
        for chunk in body.split("+"):
            chunk = chunk.strip()
            if _CONST_RE.match(chunk):
                q, c = Fraction(0), Fraction(chunk)
            else:
                m = _TERM_RE.match(chunk)
                if not m:
                    raise InputError(f"bad series term {chunk!r}")
                exp = m.group("paren") or m.group("plain")
                q = Fraction(exp) if exp is not None else Fraction(1)
                c = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
            sc = field.scalar(c)
            terms[q] = terms.get(q, field.zero) + sc
    return PuiseuxSeries(field, terms, trunc)


def format_series(s: PuiseuxSeries, with_annotations: bool = False) -> str:
    """Canonical form: ascending exponents, explicit ``*c`` coefficients."""
    if not s.terms:
        body = "0"
    else:
        chunks = []
        for q in sorted(s.terms):
            c = s.terms[q]
            if q == 0:
                chunks.append(str(c))
                continue
            if q.denominator == 1 and q >= 0:
                head = "t" if q == 1 else f"t^{q}"
            else:
                head = f"t^({q})"
            chunks.append(f"{head}*{c}")
        body = " + ".join(chunks)
    if with_annotations:
        extra = []
        if s.trunc is not None:
            extra.append(f"trunc {s.trunc}")
        extra.append(f"N {s.ram}")
        return " | ".join([body] + extra)
    return body
