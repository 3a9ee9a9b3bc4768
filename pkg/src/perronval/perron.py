"""Perron transforms: unimodular nonnegative monomial substitutions.

Two kinds.  A6 acts on the independent block x_1..x_n as a pure monomial
Cremona map; A1 additionally mixes in the last variable through a translated
factor (x_m(1) + c) with c a nonzero residue.  Matrices are built by
generalized subtractive (Euclidean) steps on the value vector: at each step
the coordinate of minimal positive value is subtracted from another
coordinate, composing elementary unimodular matrices.  For a single
independent variable this is exactly the continued-fraction expansion of
the dependent value and terminates; in higher rank the divisibility goal of
the A6 loop terminates by the classical Perron-algorithm argument, and a
step bound guards the A1 loop in higher rank, where only existence is
classical and the subtractive walk may wander.

The Cramer identity checker uses the sign-corrected consequence of the
equal-value linear system: with A the transposed matrix and
gamma = sum_i a_{i,n+1} (e_i - d_i), equal-value exponent vectors d, e
satisfy d_i - e_i = (-1)^(n+i) * gamma * Det(A_{n+1,i}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InputError,
    PreconditionError,
    StepBoundExceeded,
    Unsupported,
    ValueMismatch,
)
from .poly import Polynomial, VariableFrame
from .scalars import FieldSpec, PuiseuxSeries, Scalar
from .valgroup import (
    Value,
    det_int,
    identity_matrix,
    rational_relation,
    unimodular_inverse,
)

DEFAULT_STEP_BOUND = 10_000


@dataclass(frozen=True)
class PerronTransform:
    """Substitution data: rows are old active variables (x_1..x_n and, for
    A1, x_m), columns the new ones (x_1(1)..x_n(1) and the (x_m(1)+c) slot).
    """

    kind: str  # "A6" | "A1"
    matrix: tuple
    frame: VariableFrame  # frame the transform acts on
    c: Scalar | None = None

    def __post_init__(self):
        n = self.frame.n
        size = n if self.kind == "A6" else n + 1
        if self.kind not in ("A6", "A1"):
            raise InputError(f"unknown transform kind {self.kind!r}")
        if len(self.matrix) != size or any(len(r) != size for r in self.matrix):
            raise InputError(f"{self.kind} matrix must be {size}x{size}")
        if any(e < 0 for row in self.matrix for e in row):
            raise InputError("Perron matrices have nonnegative entries")
        if det_int([list(r) for r in self.matrix]) != 1:
            raise InputError("Perron matrices have determinant 1")
        if self.kind == "A1":
            if self.c is None or self.c.is_zero:
                raise InputError("A1 transforms need a nonzero constant c")
        elif self.c is not None:
            raise InputError("A6 transforms take no constant")

    @property
    def size(self) -> int:
        return len(self.matrix)

    def active_indices(self):
        n = self.frame.n
        idx = list(range(n))
        if self.kind == "A1":
            idx.append(self.frame.m - 1)
        return idx

    def new_frame(self) -> VariableFrame:
        return self.frame.bumped()

    def images(self, field: FieldSpec):
        """Images of the old variables in the new frame."""
        frame1 = self.new_frame()
        n = self.frame.n
        out = []
        unit = None
        if self.kind == "A1":
            unit = Polynomial.variable(frame1, field, self.frame.m - 1) + self.c
        for i in range(self.frame.m):
            if i < n or (self.kind == "A1" and i == self.frame.m - 1):
                row = self.matrix[i if i < n else n]
                img = Polynomial.one(frame1, field)
                for j in range(n):
                    if row[j]:
                        img = img * Polynomial.variable(frame1, field, j) ** row[j]
                if self.kind == "A1" and row[n]:
                    img = img * unit ** row[n]
                out.append(img)
            else:
                out.append(Polynomial.variable(frame1, field, i))
        return out

    def substitute(self, f: Polynomial) -> Polynomial:
        if f.frame != self.frame:
            raise InputError("polynomial frame does not match the transform")
        return f.substitute_map(self.images(f.field))

    def inverse_matrix(self):
        return unimodular_inverse([list(r) for r in self.matrix])

    def transformed_weights(self, values):
        """Values of the new variables given the old active values.

        For A6 pass the n active values; for A1 pass (w_1..w_n, gamma_m).
        The returned vector solves M v' = v; for A1 its last slot is the
        value 0 of the unit (x_m(1) + c).
        """
        if len(values) != self.size:
            raise InputError("value count does not match the matrix size")
        inv = self.inverse_matrix()
        context = values[0].context
        out = []
        for i in range(self.size):
            total = context.zero()
            for j in range(self.size):
                if inv[i][j]:
                    total = total + values[j].scale(inv[i][j])
            out.append(total)
        if self.kind == "A1" and not out[-1].is_zero:
            raise InputError("A1 inverse did not send the unit slot to value 0")
        return out

    def transform_arc(self, arc, window=None):
        """Arc components of the new variables, inverting the monomial map.

        Intermediate Laurent factors may need series inversion; ``window``
        bounds the expansion when a component is exact but not monomial.
        """
        field = arc[0].field
        inv = self.inverse_matrix()
        n = self.frame.n
        active = self.active_indices()
        old_active = [arc[i] for i in active]
        new_active = []
        for i in range(self.size):
            piece = PuiseuxSeries(field, {Fraction(0): field.one})
            for j in range(self.size):
                e = inv[i][j]
                if e > 0:
                    piece = piece * old_active[j] ** e
                elif e < 0:
                    piece = piece * old_active[j].inverse(window) ** (-e)
            new_active.append(piece)
        out = list(arc)
        for j in range(n):
            out[active[j]] = new_active[j]
        if self.kind == "A1":
            out[self.frame.m - 1] = new_active[n] - self.c
        return tuple(out)

    def document(self) -> dict:
        doc = {"kind": self.kind, "matrix": [list(r) for r in self.matrix]}
        if self.c is not None:
            doc["c"] = str(self.c)
        return doc

    @classmethod
    def from_document(cls, doc: dict, frame: VariableFrame, field: FieldSpec):
        c = field.scalar(Fraction(doc["c"])) if "c" in doc else None
        return cls(
            kind=doc["kind"],
            matrix=tuple(tuple(int(e) for e in row) for row in doc["matrix"]),
            frame=frame,
            c=c,
        )


def _elementary_step(matrix, values, i_sub, j_from):
    """values[j_from] -= values[i_sub]; column i_sub of the matrix absorbs
    column j_from, keeping old = matrix * values invariant."""
    values[j_from] = values[j_from] - values[i_sub]
    for r in range(len(matrix)):
        matrix[r][i_sub] += matrix[r][j_from]


def build_a6_divide(m1, m2, weights, frame: VariableFrame,
                    bound: int = DEFAULT_STEP_BOUND) -> PerronTransform:
    """Perron transform of type A6 making the substituted M1 divide the
    substituted M2 (Lemma-11 style divisibility for value-ordered monomials
    supported on x_1..x_n)."""
    n = frame.n
    m1 = tuple(m1)
    m2 = tuple(m2)
    if len(m1) < n or len(m2) < n:
        raise InputError("exponent vectors shorter than the active block")
    if any(e for e in m1[n:]) or any(e for e in m2[n:]):
        raise PreconditionError("monomials must be supported on x_1..x_n")
    if len(weights) < n:
        raise InputError("need a weight per active variable")
    w = list(weights[:n])
    context = w[0].context

    def pairing(exps):
        total = context.zero()
        for e, wt in zip(exps, w):
            if e:
                total = total + wt.scale(e)
        return total

    if not pairing(m1) < pairing(m2):
        raise PreconditionError("need value(M1) < value(M2)")
    delta = [m2[j] - m1[j] for j in range(n)]
    matrix = identity_matrix(n)
    steps = 0
    while any(d < 0 for d in delta):
        if steps >= bound:
            raise StepBoundExceeded("A6 divisibility loop exceeded the bound")
        i_sub = min(range(n), key=lambda i: (w[i], i))
        candidates = [j for j in range(n) if j != i_sub and w[j] > w[i_sub]]
        if not candidates:
            raise StepBoundExceeded("no legal subtractive step remains")
        j_from = max(candidates, key=lambda j: (w[j], -j))
        # subtract w[i_sub] from w[j_from]; exponents move the other way
        w[j_from] = w[j_from] - w[i_sub]
        delta[i_sub] += delta[j_from]
        for r in range(n):
            matrix[r][i_sub] += matrix[r][j_from]
        steps += 1
    return PerronTransform(kind="A6", matrix=tuple(tuple(r) for r in matrix),
                           frame=frame)


def build_a1(weights, gamma: Value, frame: VariableFrame, *, residue=None,
             c: Scalar | None = None,
             bound: int = DEFAULT_STEP_BOUND) -> PerronTransform:
    """Perron transform of type A1 for active values (w_1..w_n) and a
    rationally dependent positive gamma = value(x_m).

    ``residue`` is a callable taking the Laurent exponent vector of the unit
    monomial over (x_1..x_n, x_m) and returning its residue; it supplies the
    nonzero constant c unless ``c`` is given directly.
    """
    n = frame.n
    if len(weights) < n:
        raise InputError("need a weight per active variable")
    w = list(weights[:n])
    context = w[0].context
    if gamma.context != context:
        raise InputError("gamma from a different context")
    if gamma.sign() <= 0:
        raise PreconditionError("gamma must be positive")
    rational_relation(w + [gamma])  # raises NO-RELATION / AMBIGUOUS
    values = w + [gamma]
    matrix = identity_matrix(n + 1)
    last = n
    steps = 0
    while values[last].sign() > 0:
        if steps >= bound:
            raise StepBoundExceeded("A1 construction exceeded the step bound")
        below = [i for i in range(n) if values[i] <= values[last]]
        if below:
            i_sub = max(below, key=lambda i: (values[i], -i))
            _elementary_step(matrix, values, i_sub, last)
        else:
            j_from = max(range(n), key=lambda j: (values[j], -j))
            _elementary_step(matrix, values, last, j_from)
        steps += 1
    for i in range(n):
        if values[i].sign() <= 0:
            raise StepBoundExceeded("subtractive loop lost positivity")
    if c is None:
        if residue is None:
            raise InputError("build_a1 needs a residue callable or explicit c")
        inv = unimodular_inverse(matrix)
        c = residue(tuple(inv[last]))
    if c.is_zero:
        raise InputError("the A1 constant must be nonzero")
    return PerronTransform(kind="A1", matrix=tuple(tuple(r) for r in matrix),
                           frame=frame, c=c)


@dataclass(frozen=True)
class MonomializeResult:
    transforms: tuple
    exponents: tuple
    unit: Polynomial


def monomialize(g: Polynomial, weights, frame: VariableFrame,
                bound: int = DEFAULT_STEP_BOUND) -> MonomializeResult:
    """Repeated Lemma-11 divisions turning g (supported on x_1..x_n up to
    unused variables) into monomial times unit."""
    if g.is_zero:
        raise PreconditionError("cannot monomialize zero")
    n = frame.n
    for mono in g.terms:
        if any(mono[j] for j in range(n, frame.m)):
            raise Unsupported(
                "monomialization needs support in the independent block"
            )
    w = list(weights[:n])
    context = w[0].context

    def pairing(exps):
        total = context.zero()
        for e, wt in zip(exps, w):
            if e:
                total = total + wt.scale(e)
        return total

    transforms = []
    current = g
    rounds = 0
    while True:
        if rounds > bound:
            raise StepBoundExceeded("monomialization exceeded the step bound")
        rounds += 1
        support = sorted(current.terms)
        values = [pairing(mono) for mono in support]
        best = min(range(len(support)), key=lambda i: values[i])
        ties = [i for i in range(len(support)) if values[i] == values[best]]
        if len(ties) > 1:
            raise Unsupported("minimal-value monomial is not unique")
        mmin = support[best]
        offender = None
        for mono in support:
            if any(a < b for a, b in zip(mono, mmin)):
                offender = mono
                break
        if offender is None:
            exponents = mmin
            unit = current.divide_by_monomial(mmin)
            if unit.constant_term().is_zero:
                raise Unsupported("residual factor is not a unit at the origin")
            return MonomializeResult(tuple(transforms), exponents, unit)
        tau = build_a6_divide(mmin, offender, w, frame, bound=bound)
        transforms.append(tau)
        new_active = tau.transformed_weights(w)
        current = tau.substitute(current)
        frame = tau.new_frame()
        w = new_active[:n]


def verify_cramer(tau: PerronTransform, d, e, values) -> bool:
    """Check the determinant identity for an equal-value exponent pair under
    an A1 transform; exact integer arithmetic, tolerance zero."""
    if tau.kind != "A1":
        raise InputError("the Cramer identity concerns A1 transforms")
    size = tau.size
    d = tuple(int(x) for x in d)
    e = tuple(int(x) for x in e)
    if len(d) != size or len(e) != size:
        raise InputError("exponent vectors must have length n+1")
    if len(values) != size:
        raise InputError("need the n+1 old active values")
    context = values[0].context
    vd = context.zero()
    ve = context.zero()
    for i in range(size):
        if d[i]:
            vd = vd + values[i].scale(d[i])
        if e[i]:
            ve = ve + values[i].scale(e[i])
    if vd != ve:
        raise ValueMismatch("the two monomials do not have equal value")
    matrix = [list(r) for r in tau.matrix]
    a = [[matrix[j][i] for j in range(size)] for i in range(size)]  # transpose
    n = size - 1
    gamma = sum(matrix[i][n] * (e[i] - d[i]) for i in range(size))
    for i in range(size):
        minor = [
            [a[r][cc] for cc in range(size) if cc != i]
            for r in range(size) if r != n
        ]
        # sign (-1)^(n+i) in 1-based indexing; i here is 0-based
        expected = (-1) ** (n + 1 + i) * gamma * det_int(minor)
        if d[i] - e[i] != expected:
            return False
    return True


def check_sigma_proportionality(tau: PerronTransform, sigmas, lambdas) -> bool:
    """(lambda_{sigma_i} - lambda_{sigma_1}) * d == sigma_i - sigma_1 with
    d the minor determinant of the matrix without its last row and column."""
    n = tau.size - 1
    d = det_int([list(r[:n]) for r in tau.matrix[:n]])
    s1 = sigmas[0]
    return all(
        (lambdas[s] - lambdas[s1]) * d == s - s1 for s in sigmas
    )
