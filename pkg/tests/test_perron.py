import random
from fractions import Fraction as F

import pytest

from perronval.errors import InputError, NoRelation, PreconditionError, ValueMismatch
from perronval.oracle import oracle_from_document
from perronval.perron import (
    PerronTransform,
    build_a1,
    build_a6_divide,
    monomialize,
    verify_cramer,
)
from perronval.poly import Polynomial, VariableFrame, parse_polynomial
from perronval.scalars import FieldSpec
from perronval.valgroup import RATIONAL, quadratic, unimodular_inverse

Q = FieldSpec(0)
FR1 = VariableFrame(m=2, n=1)
FR2 = VariableFrame(m=2, n=2)
Q2 = quadratic(2)
Q3 = quadratic(3)

CUSP_ORACLE = oracle_from_document({
    "version": 1, "kind": "arc", "ring": {"m": 2, "char": 0, "n": 1},
    "f": "x2^2 - x1^3", "arc": {"x1": "t^2", "x2": "t^3"}, "trunc": 40,
})


class TestTransformValidation:
    def test_det_must_be_one(self):
        with pytest.raises(InputError):
            PerronTransform("A6", ((1, 1), (1, 1)), FR2)

    def test_entries_nonnegative(self):
        with pytest.raises(InputError):
            PerronTransform("A6", ((1, -1), (0, 1)), FR2)

    def test_a1_needs_nonzero_c(self):
        with pytest.raises(InputError):
            PerronTransform("A1", ((2, 1), (3, 2)), FR1, c=Q.zero)
        PerronTransform("A1", ((2, 1), (3, 2)), FR1, c=Q.one)  # fine


class TestBuildA6Divide:
    def test_single_step(self):
        tau = build_a6_divide((1, 0), (0, 1), [Q2.value(1, 0), Q2.value(0, 1)], FR2)
        assert tau.matrix == ((1, 0), (1, 1))
        m1 = Polynomial.monomial(FR2, Q, (1, 0))
        m2 = Polynomial.monomial(FR2, Q, (0, 1))
        assert tau.substitute(m2).divisible_by(tau.substitute(m1))

    def test_empty_monomial_is_identity(self):
        tau = build_a6_divide((0, 0), (2, 1), [Q2.value(1, 0), Q2.value(0, 1)], FR2)
        assert tau.matrix == ((1, 0), (0, 1))

    def test_continued_fraction_instance(self):
        # value(x2) = sqrt(2) < 2 = value(x1^2)
        tau = build_a6_divide((0, 1), (2, 0), [Q2.value(1, 0), Q2.value(0, 1)], FR2)
        m1 = Polynomial.monomial(FR2, Q, (0, 1))
        m2 = Polynomial.monomial(FR2, Q, (2, 0))
        assert tau.substitute(m2).divisible_by(tau.substitute(m1))
        new_w = tau.transformed_weights([Q2.value(1, 0), Q2.value(0, 1)])
        assert all(w.sign() > 0 for w in new_w)

    def test_value_order_precondition(self):
        with pytest.raises(PreconditionError):
            build_a6_divide((2, 0), (0, 1), [Q2.value(1, 0), Q2.value(0, 1)], FR2)

    def test_lemma11_random_quadratic(self):
        rng = random.Random(2024)
        checked = 0
        for _ in range(400):
            inst = _random_lemma11_instance(rng)
            if inst is None:
                continue
            ctx, weights, m1, m2 = inst
            tau = build_a6_divide(m1, m2, weights, FR2)
            p1 = Polynomial.monomial(FR2, Q, m1)
            p2 = Polynomial.monomial(FR2, Q, m2)
            assert tau.substitute(p2).divisible_by(tau.substitute(p1))
            new_w = tau.transformed_weights(weights)
            assert all(w.sign() > 0 for w in new_w)
            checked += 1
        assert checked >= 100


class TestBuildA1:
    def test_cusp_matrix(self):
        tau = build_a1([RATIONAL.value(2)], RATIONAL.value(3), FR1,
                       residue=CUSP_ORACLE.monomial_residue)
        assert tau.matrix == ((2, 1), (3, 2))
        assert str(tau.c) == "1"

    def test_equal_values_single_step(self):
        tau = build_a1([RATIONAL.value(1)], RATIONAL.value(1), FR1, c=Q.one)
        assert tau.matrix == ((1, 0), (1, 1))

    def test_half_integer(self):
        tau = build_a1([RATIONAL.value(2)], RATIONAL.value(F(5, 2)), FR1, c=Q.one)
        new = tau.transformed_weights([RATIONAL.value(2), RATIONAL.value(F(5, 2))])
        assert str(new[0]) == "1/2" and new[1].is_zero

    def test_no_relation(self):
        with pytest.raises(NoRelation):
            build_a1([Q2.value(1, 0)], Q2.value(0, 1), FR1, c=Q.one)

    def test_new_values_positive_random(self):
        rng = random.Random(77)
        for _ in range(100):
            w = RATIONAL.value(F(rng.randint(1, 9), rng.randint(1, 5)))
            gamma = w.scale(F(rng.randint(1, 9), rng.randint(1, 9)))
            tau = build_a1([w], gamma, FR1, c=Q.one)
            new = tau.transformed_weights([w, gamma])
            assert new[0].sign() > 0 and new[1].is_zero

    def test_rank_two_simple_relation(self):
        # gamma = w1 + w2 terminates with the obvious matrix
        frame = VariableFrame(m=3, n=2)
        tau = build_a1([Q2.value(1, 0), Q2.value(0, 1)], Q2.value(1, 1),
                       frame, c=Q.one)
        assert tau.matrix == ((1, 0, 0), (0, 1, 0), (1, 1, 1))
        new = tau.transformed_weights([Q2.value(1, 0), Q2.value(0, 1), Q2.value(1, 1)])
        assert [str(v) for v in new] == ["1", "1*sqrt(2)", "0"]

    def test_rank_two_step_bound(self):
        # the subtractive loop is only guaranteed for n = 1; hard rank-2
        # relations stop at the safety bound rather than looping
        from perronval.errors import StepBoundExceeded
        frame = VariableFrame(m=3, n=2)
        with pytest.raises(StepBoundExceeded):
            build_a1([Q2.value(1, 0), Q2.value(0, 1)], Q2.value(2, 3),
                     frame, c=Q.one, bound=500)


class TestTransformedWeights:
    def test_cusp(self):
        tau = PerronTransform("A1", ((2, 1), (3, 2)), FR1, c=Q.one)
        new = tau.transformed_weights([RATIONAL.value(2), RATIONAL.value(3)])
        assert str(new[0]) == "1" and new[1].is_zero

    def test_identity(self):
        tau = PerronTransform("A6", ((1, 0), (0, 1)), FR2)
        vals = [Q2.value(1, 0), Q2.value(0, 1)]
        assert tau.transformed_weights(vals) == vals

    def test_subtraction(self):
        tau = PerronTransform("A6", ((1, 0), (1, 1)), FR2)
        new = tau.transformed_weights([Q2.value(1, 0), Q2.value(0, 1)])
        assert str(new[0]) == "1" and str(new[1]) == "-1 + 1*sqrt(2)"

    def test_value_conservation(self):
        rng = random.Random(6)
        weights = [Q2.value(1, 0), Q2.value(0, 1)]
        for _ in range(50):
            m1 = (rng.randint(0, 5), rng.randint(0, 5))
            m2 = (rng.randint(0, 5), rng.randint(0, 5))
            try:
                tau = build_a6_divide(m1, m2, weights, FR2)
            except PreconditionError:
                continue
            new_w = tau.transformed_weights(weights)
            for mono in [(1, 0), (0, 1), (3, 2), m1, m2]:
                old = Q2.zero()
                for e, w in zip(mono, weights):
                    old = old + w.scale(e)
                image = tau.substitute(Polynomial.monomial(FR2, Q, mono))
                (new_mono,) = image.terms
                new = Q2.zero()
                for e, w in zip(new_mono, new_w):
                    new = new + w.scale(e)
                assert old == new


class TestVerifyCramer:
    def test_cusp_pair(self):
        tau = PerronTransform("A1", ((2, 1), (3, 2)), FR1, c=Q.one)
        vals = [RATIONAL.value(2), RATIONAL.value(3)]
        assert verify_cramer(tau, (3, 0), (0, 2), vals)

    def test_equal_vectors(self):
        tau = PerronTransform("A1", ((2, 1), (3, 2)), FR1, c=Q.one)
        vals = [RATIONAL.value(2), RATIONAL.value(3)]
        assert verify_cramer(tau, (1, 1), (1, 1), vals)

    def test_value_mismatch_rejected(self):
        tau = PerronTransform("A1", ((2, 1), (3, 2)), FR1, c=Q.one)
        vals = [RATIONAL.value(2), RATIONAL.value(3)]
        with pytest.raises(ValueMismatch):
            verify_cramer(tau, (1, 0), (0, 1), vals)

    def test_random_equal_value_pairs(self):
        rng = random.Random(99)
        for _ in range(50):
            tau, values = random_a1_with_values(rng, n=rng.choice([1, 1, 2]))
            for d, e in equal_value_pairs(rng, tau, 10):
                assert verify_cramer(tau, d, e, values)


class TestMonomialize:
    def test_power_extraction(self):
        g = parse_polynomial(FR1, Q, "x1^2 + x1^3")
        got = monomialize(g, [RATIONAL.value(1)], FR1)
        assert got.transforms == ()
        assert got.exponents == (2, 0)
        assert got.unit == parse_polynomial(FR1, Q, "1 + x1")

    def test_one_a6_step(self):
        g = parse_polynomial(FR2, Q, "x1 + x2")
        got = monomialize(g, [Q2.value(1, 0), Q2.value(0, 1)], FR2)
        assert len(got.transforms) == 1
        assert got.transforms[0].matrix == ((1, 0), (1, 1))
        assert got.exponents == (1, 0)
        frame1 = FR2.bumped()
        assert got.unit == parse_polynomial(frame1, Q, "1 + x2(1)")

    def test_unit_input(self):
        g = parse_polynomial(FR2, Q, "2 + x1")
        got = monomialize(g, [Q2.value(1, 0), Q2.value(0, 1)], FR2)
        assert got.transforms == () and got.exponents == (0, 0) and got.unit == g

    def test_reconstruction(self):
        rng = random.Random(31)
        weights = [Q2.value(1, 0), Q2.value(0, 1)]
        for _ in range(40):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                mono = (rng.randint(0, 4), rng.randint(0, 4))
                terms[mono] = Q.scalar(rng.randint(1, 5))
            g = Polynomial(FR2, Q, terms)
            got = monomialize(g, weights, FR2)
            image = g
            for tau in got.transforms:
                image = tau.substitute(image)
            assert image == got.unit * Polynomial.monomial(
                got.unit.frame, Q, got.exponents
            )
            assert not got.unit.constant_term().is_zero


def _random_lemma11_instance(rng):
    ctx = rng.choice([Q2, Q3])
    w1 = ctx.value(F(rng.randint(0, 5), rng.randint(1, 3)), F(rng.randint(0, 5), rng.randint(1, 3)))
    w2 = ctx.value(F(rng.randint(0, 5), rng.randint(1, 3)), F(rng.randint(0, 5), rng.randint(1, 3)))
    if w1.sign() <= 0 or w2.sign() <= 0:
        return None
    # require Q-independence: a + b sqrt(d) pairs independent unless cross
    # ratios are rational; test by solving
    a1, b1 = w1.coords
    a2, b2 = w2.coords
    if a1 * b2 - a2 * b1 == 0:
        return None
    m1 = (rng.randint(0, 8), rng.randint(0, 8))
    m2 = (rng.randint(0, 8), rng.randint(0, 8))
    v1 = w1.scale(m1[0]) + w2.scale(m1[1])
    v2 = w1.scale(m2[0]) + w2.scale(m2[1])
    if v1 == v2:
        return None
    if v2 < v1:
        m1, m2 = m2, m1
    return ctx, [w1, w2], m1, m2


def random_a1_with_values(rng, n=1):
    """Random valid A1 transform plus matching old active values, built by
    composing elementary column steps and assigning new values afterwards."""
    frame = VariableFrame(m=n + 1, n=n)
    size = n + 1
    matrix = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for _ in range(rng.randint(1, 6)):
        i = rng.randrange(size)
        j = rng.randrange(size)
        if i == j:
            continue
        for r in range(size):
            matrix[r][i] += matrix[r][j]
    if n == 1:
        new_vals = [RATIONAL.value(F(rng.randint(1, 7), rng.randint(1, 4))), RATIONAL.zero()]
    else:
        ctx = Q2
        new_vals = [ctx.value(rng.randint(1, 5), 0), ctx.value(0, rng.randint(1, 5)), ctx.zero()]
    context = new_vals[0].context
    values = []
    for i in range(size):
        total = context.zero()
        for j in range(size):
            if matrix[i][j]:
                total = total + new_vals[j].scale(matrix[i][j])
        values.append(total)
    tau = PerronTransform("A1", tuple(tuple(r) for r in matrix), frame, c=Q.one)
    return tau, values


def equal_value_pairs(rng, tau, count):
    """Pairs of distinct nonnegative exponent vectors of equal value under
    the values attached to tau: differences live in the kernel, which is
    spanned by the last row of the inverse matrix."""
    size = tau.size
    inv = unimodular_inverse([list(r) for r in tau.matrix])
    kernel = inv[size - 1]
    out = []
    for _ in range(count):
        base = [rng.randint(0, 12) for _ in range(size)]
        k = rng.randint(-2, 2)
        other = [b + k * kv for b, kv in zip(base, kernel)]
        shift = max(0, -min(other))
        # shifting by the kernel keeps equality; shifting both keeps nonneg
        d = [b + shift * abs(kv) for b, kv in zip(base, kernel)]
        e = [o + shift * abs(kv) for o, kv in zip(other, kernel)]
        if min(d) < 0 or min(e) < 0:
            continue
        out.append((tuple(d), tuple(e)))
    return out
