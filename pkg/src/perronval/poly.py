"""Sparse multivariate polynomials with a distinguished last variable.

Polynomials are finite maps from exponent vectors to nonzero scalars over a
variable frame x_1..x_m.  The last variable carries the hypersurface
structure: expansion in x_m, order of f(0,..,0,x_m), translation, and the
strict transform after a monomial substitution.  Canonical printing uses
graded lexicographic order with x_m least significant, so traces and golden
files are deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import DivisionByZero, FrameMismatch, InputError
from .scalars import INFINITE, FieldSpec, PuiseuxSeries, Scalar

Mono = tuple  # exponent vector of length frame.m


@dataclass(frozen=True)
class VariableFrame:
    """m variables x_1..x_m, the first n rationally independent for the
    active valuation; generation counts the renamings x_i(1), x_i(2), ...
    """

    m: int
    n: int
    generation: int = 0

    def __post_init__(self):
        if not (1 <= self.n <= self.m):
            raise InputError(f"need 1 <= n <= m, got n={self.n}, m={self.m}")
        if self.generation < 0:
            raise InputError("negative generation")

    def var_name(self, i: int) -> str:
        base = f"x{i + 1}"
        return f"{base}({self.generation})" if self.generation else base

    def bumped(self) -> "VariableFrame":
        return replace(self, generation=self.generation + 1)


def _mono_key(mono: Mono):
    # graded lexicographic, x_1 most significant, x_m last
    return (sum(mono), mono)


class Polynomial:
    __slots__ = ("frame", "field", "terms")

    def __init__(self, frame: VariableFrame, field: FieldSpec, terms=None):
        self.frame = frame
        self.field = field
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != frame.m:
                raise InputError("exponent vector length does not match frame")
            if any(e < 0 for e in mono):
                raise InputError("negative exponent in polynomial")
            coeff = field.scalar(coeff)
            if coeff.is_zero:
                continue
            if mono in clean:
                s = clean[mono] + coeff
                if s.is_zero:
                    del clean[mono]
                else:
                    clean[mono] = s
            else:
                clean[mono] = coeff
        self.terms = clean

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, frame, field):
        return cls(frame, field, {})

    @classmethod
    def constant(cls, frame, field, c):
        return cls(frame, field, {(0,) * frame.m: c})

    @classmethod
    def one(cls, frame, field):
        return cls.constant(frame, field, 1)

    @classmethod
    def variable(cls, frame, field, i: int):
        if not 0 <= i < frame.m:
            raise InputError(f"variable index {i} out of range")
        mono = [0] * frame.m
        mono[i] = 1
        return cls(frame, field, {tuple(mono): 1})

    @classmethod
    def monomial(cls, frame, field, exponents, coeff=1):
        return cls(frame, field, {tuple(exponents): coeff})

    # -- ring structure -------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.frame != self.frame or other.field != self.field:
                raise FrameMismatch("mixed-frame polynomial arithmetic")
            return other
        return Polynomial.constant(self.frame, self.field, other)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            if mono in terms:
                terms[mono] = terms[mono] + c
            else:
                terms[mono] = c
        return Polynomial(self.frame, self.field, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.frame, self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            c0 = self.field.scalar(other)
            return Polynomial(
                self.frame, self.field, {m: c * c0 for m, c in self.terms.items()}
            )
        other = self._coerce(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                if mono in terms:
                    terms[mono] = terms[mono] + c
                else:
                    terms[mono] = c
        return Polynomial(self.frame, self.field, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial powers must be nonnegative integers")
        result = Polynomial.one(self.frame, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.frame, self.field, frozenset(self.terms.items())))

    # -- structure in the last variable ----------------------------------

    def degree_in_last(self) -> int:
        if self.is_zero:
            return -1
        return max(m[-1] for m in self.terms)

    def ord_last(self):
        """Order of f(0,..,0,x_m): smallest i with a pure x_m^i term,
        INFINITE when f(0,..,0,x_m) vanishes identically."""
        best = None
        for mono in self.terms:
            if all(e == 0 for e in mono[:-1]):
                if best is None or mono[-1] < best:
                    best = mono[-1]
        return INFINITE if best is None else best

    def coefficient_of_last(self, i: int) -> "Polynomial":
        terms = {}
        for mono, c in self.terms.items():
            if mono[-1] == i:
                terms[mono[:-1] + (0,)] = c
        return Polynomial(self.frame, self.field, terms)

    def expand_last(self) -> "CoefficientExpansion":
        e = max(self.degree_in_last(), 0)
        coeffs = tuple(self.coefficient_of_last(i) for i in range(e + 1))
        lead = coeffs[e] if coeffs else Polynomial.zero(self.frame, self.field)
        monic = lead == Polynomial.one(self.frame, self.field)
        return CoefficientExpansion(e=e, coeffs=coeffs, monic=monic, source_frame=self.frame)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.frame.m, self.field.zero)

    def partial_last(self) -> "Polynomial":
        terms = {}
        for mono, c in self.terms.items():
            k = mono[-1]
            if k == 0:
                continue
            terms[mono[:-1] + (k - 1,)] = c * k
        return Polynomial(self.frame, self.field, terms)

    # -- divisibility -----------------------------------------------------

    def min_exponents(self) -> Mono:
        if self.is_zero:
            raise DivisionByZero("no exponents in the zero polynomial")
        return tuple(min(m[i] for m in self.terms) for i in range(self.frame.m))

    def divide_by_monomial(self, exps: Mono) -> "Polynomial":
        terms = {}
        for mono, c in self.terms.items():
            shifted = tuple(a - b for a, b in zip(mono, exps))
            if any(e < 0 for e in shifted):
                raise DivisionByZero("monomial does not divide the polynomial")
            terms[shifted] = c
        return Polynomial(self.frame, self.field, terms)

    def divmod_last(self, divisor: "Polynomial"):
        """Division in x_m by a divisor whose x_m-leading coefficient is a
        nonzero constant: f = q * divisor + r with deg_xm(r) < deg_xm(divisor).
        """
        divisor = self._coerce(divisor)
        d = divisor.degree_in_last()
        if d < 0:
            raise DivisionByZero("division by zero polynomial")
        lead = divisor.coefficient_of_last(d)
        if len(lead.terms) != 1 or any(e != 0 for e in next(iter(lead.terms))):
            raise InputError("divisor is not monic-like in the last variable")
        lc = lead.constant_term()
        q = Polynomial.zero(self.frame, self.field)
        r = self
        while not r.is_zero and r.degree_in_last() >= d:
            k = r.degree_in_last()
            top = r.coefficient_of_last(k)
            shift = [0] * self.frame.m
            shift[-1] = k - d
            piece = top * Polynomial.monomial(self.frame, self.field, shift, lc.inverse())
            q = q + piece
            r = r - piece * divisor
        return q, r

    def divisible_by(self, divisor: "Polynomial") -> bool:
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            return self.is_zero
        if self.is_zero:
            return True
        if len(divisor.terms) == 1:
            exps = next(iter(divisor.terms))
            return all(
                all(a >= b for a, b in zip(mono, exps)) for mono in self.terms
            )
        _, r = self.divmod_last(divisor)
        return r.is_zero

    # -- substitution ------------------------------------------------------

    def substitute_map(self, images, target_frame=None) -> "Polynomial":
        """Ring homomorphism sending x_i to images[i] (all in one common
        target frame)."""
        if len(images) != self.frame.m:
            raise InputError("need one image per variable")
        if target_frame is None:
            target_frame = images[0].frame
        for img in images:
            if img.frame != target_frame or img.field != self.field:
                raise FrameMismatch("images live in different frames")
        result = Polynomial.zero(target_frame, self.field)
        powers = [{} for _ in range(self.frame.m)]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        for mono, c in self.terms.items():
            piece = Polynomial.constant(target_frame, self.field, c)
            for i, e in enumerate(mono):
                if e:
                    piece = piece * power(i, e)
            result = result + piece
        return result

    def translate_last(self, h: "Polynomial") -> "Polynomial":
        """Substitute x_m -> x_m + h, with h free of the last variable."""
        h = self._coerce(h)
        if h.degree_in_last() > 0:
            raise InputError("translation polynomial must not involve x_m")
        images = [
            Polynomial.variable(self.frame, self.field, i)
            for i in range(self.frame.m)
        ]
        images[-1] = images[-1] + h
        return self.substitute_map(images, self.frame)

    def rename(self, frame: VariableFrame) -> "Polynomial":
        """Same terms in another frame of the same shape (generation bump)."""
        if frame.m != self.frame.m:
            raise FrameMismatch("rename must preserve the variable count")
        return Polynomial(frame, self.field, dict(self.terms))

    # -- strict transform ---------------------------------------------------

    def strict_transform(self, c: Scalar):
        """Factor out the exceptional part after a Perron substitution:
        g = x_1^{c_1} .. x_{m-1}^{c_{m-1}} * (x_m + c)^lam * f_1 (for c != 0),
        or g = x_1^{c_1} .. x_m^{c_m} * f_1 (for c = 0), all parts maximal.
        Returns (exponents, lam, f_1).
        """
        if self.is_zero:
            raise DivisionByZero("strict transform of zero")
        c = self.field.scalar(c)
        mins = self.min_exponents()
        exps = list(mins)
        lam = 0
        if not c.is_zero:
            exps[-1] = 0
        f1 = self.divide_by_monomial(tuple(exps))
        if not c.is_zero:
            unit = Polynomial.variable(self.frame, self.field, self.frame.m - 1) + c
            while True:
                q, r = f1.divmod_last(unit)
                if r.is_zero and not q.is_zero:
                    f1 = q
                    lam += 1
                else:
                    break
        return tuple(exps), lam, f1

    # -- arc evaluation -------------------------------------------------------

    def evaluate_at_arc(self, arc) -> PuiseuxSeries:
        if len(arc) != self.frame.m:
            raise InputError("arc length must equal the variable count")
        field = self.field
        result = PuiseuxSeries.zero(field)
        powers = [{} for _ in range(self.frame.m)]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = arc[i] ** k
            return cache[k]

        for mono, coeff in self.terms.items():
            piece = PuiseuxSeries(field, {Fraction(0): coeff})
            for i, e in enumerate(mono):
                if e:
                    piece = piece * power(i, e)
            result = result + piece
        return result

    # -- printing ---------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


@dataclass(frozen=True)
class CoefficientExpansion:
    """f = a_e x_m^e + ... + a_0 with the a_i free of x_m."""

    e: int
    coeffs: tuple
    monic: bool
    source_frame: VariableFrame

    def reconstruct(self) -> Polynomial:
        frame = self.source_frame
        field = self.coeffs[0].field
        xm = Polynomial.variable(frame, field, frame.m - 1)
        total = Polynomial.zero(frame, field)
        for i, a in enumerate(self.coeffs):
            total = total + a * xm**i
        return total


# ---------------------------------------------------------------------------
# Canonical printing and parsing

def _format_coeff(c: Scalar) -> str:
    return str(c.value)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero:
        return "0"
    frame = f.frame
    chunks = []
    for mono in sorted(f.terms, key=_mono_key, reverse=True):
        c = f.terms[mono]
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(frame.var_name(i))
            elif e > 1:
                factors.append(f"{frame.var_name(i)}^{e}")
        body = "*".join(factors)
        if f.field.modular:
            text = f"{c}*{body}" if body and c.value != 1 else (body or str(c))
            chunks.append(("+", text))
            continue
        val = c.value
        sign = "-" if val < 0 else "+"
        mag = abs(val)
        if body and mag == 1:
            text = body
        elif body:
            text = f"{mag}*{body}"
        else:
            text = str(mag)
        chunks.append((sign, text))
    first_sign, first = chunks[0]
    out = first if first_sign == "+" else f"-{first}"
    for sign, text in chunks[1:]:
        out += f" {sign} {text}"
    return out


_VAR_RE = re.compile(r"^x(?P<idx>\d+)(?:\((?P<gen>\d+)\))?(?:\^(?P<exp>\d+))?$")
_RAT_RE = re.compile(r"^\d+(?:/\d+)?$")


def parse_polynomial(frame: VariableFrame, field: FieldSpec, text: str) -> Polynomial:
    """Parse terms joined by + and -; a term is an optional rational
    coefficient times ``x<i>[^k]`` factors joined by ``*``."""
    text = text.strip()
    if not text:
        raise InputError("empty polynomial literal")
    if text == "0":
        return Polynomial.zero(frame, field)
    tokens = re.findall(r"([+-]?)\s*([^+-]+)", text)
    if not tokens or "".join(s + t for s, t in tokens).replace(" ", "") != text.replace(" ", ""):
        raise InputError(f"cannot tokenize polynomial {text!r}")
    result = Polynomial.zero(frame, field)
    for sign, chunk in tokens:
        chunk = chunk.strip()
        if not chunk:
            raise InputError(f"dangling sign in {text!r}")
        coeff = Fraction(-1 if sign == "-" else 1)
        mono = [0] * frame.m
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise InputError(f"empty factor in term {chunk!r}")
            if _RAT_RE.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _VAR_RE.match(factor)
            if not m:
                raise InputError(f"bad factor {factor!r}")
            idx = int(m.group("idx")) - 1
            if not 0 <= idx < frame.m:
                raise InputError(f"variable x{idx + 1} outside the frame")
            gen = m.group("gen")
            if gen is not None and int(gen) != frame.generation:
                raise InputError(
                    f"generation ({gen}) does not match frame generation "
                    f"{frame.generation}"
                )
            mono[idx] += int(m.group("exp") or 1)
        term = Polynomial.monomial(frame, field, mono, field.scalar(coeff))
        result = result + term
    return result


_RING_RE = re.compile(
    r"^ring\s+m=(?P<m>\d+)\s+char=(?P<char>\d+)(?:\s+n=(?P<n>\d+))?"
    r"(?:\s+gen=(?P<gen>\d+))?$"
)


def parse_ring_header(line: str):
    """Parse ``ring m=<m> char=<p> [n=<n>] [gen=<g>]`` into (frame, field)."""
    m = _RING_RE.match(line.strip())
    if not m:
        raise InputError(f"bad ring header {line!r}")
    mm = int(m.group("m"))
    n = int(m.group("n")) if m.group("n") else max(mm - 1, 1)
    gen = int(m.group("gen")) if m.group("gen") else 0
    frame = VariableFrame(m=mm, n=n, generation=gen)
    field = FieldSpec(characteristic=int(m.group("char")))
    return frame, field


def format_ring_header(frame: VariableFrame, field: FieldSpec) -> str:
    head = f"ring m={frame.m} char={field.characteristic} n={frame.n}"
    if frame.generation:
        head += f" gen={frame.generation}"
    return head
