import random
from fractions import Fraction as F

import pytest

from perronval.errors import FrameMismatch, InputError, Unsupported, ValueMismatch
from perronval.oracle import (
    AugmentedChain,
    MonomialValuation,
    oracle_from_document,
)
from perronval.poly import Polynomial, VariableFrame, parse_polynomial
from perronval.scalars import FieldSpec
from perronval.valgroup import RATIONAL, member, quadratic

Q = FieldSpec(0)
F2 = FieldSpec(2)
FR = VariableFrame(m=2, n=1)

CUSP = {
    "version": 1,
    "kind": "arc",
    "ring": {"m": 2, "char": 0, "n": 1},
    "f": "x2^2 - x1^3",
    "arc": {"x1": "t^2", "x2": "t^3"},
    "trunc": 40,
}

CHAIN = {
    "version": 1,
    "kind": "chain",
    "ring": {"m": 2, "char": 0, "n": 1},
    "x1_value": "1",
    "steps": [{"phi": "x2", "gamma": "3/2"}],
}


def P(text, frame=FR, field=Q):
    return parse_polynomial(frame, field, text)


def arc_oracle(char, f, arc, trunc=40, normalization=None):
    doc = {
        "version": 1,
        "kind": "arc",
        "ring": {"m": 2, "char": char, "n": 1},
        "f": f,
        "arc": arc,
        "trunc": trunc,
    }
    if normalization is not None:
        doc["normalization"] = normalization
    return oracle_from_document(doc)


class TestValue:
    def test_arc_variable(self):
        o = oracle_from_document(CUSP)
        assert str(o.value(P("x2"))) == "3"

    def test_arc_hypersurface_infinite(self):
        o = oracle_from_document(CUSP)
        assert o.value(P("x2^2 - x1^3")).is_infinite
        assert o.value(P("x1*x2^2 - x1^4")).is_infinite  # multiple of f

    def test_chain_value(self):
        ch = oracle_from_document(CHAIN)
        assert str(ch.value(P("x2^2 - x1^3"))) == "3"  # min(2*3/2, 3)
        assert str(ch.value(P("x2"))) == "3/2"
        assert str(ch.value(P("x1^2"))) == "2"

    def test_above_truncation(self):
        o = arc_oracle(0, "x2^2 - x1^3", {"x1": "t^2", "x2": "t^3"}, trunc=10)
        # f plus a perturbation beyond the window: not a multiple of f
        g = P("x2^2 - x1^3 + x1^10")
        res = o.value(g)
        assert res.is_above

    def test_frame_mismatch(self):
        o = oracle_from_document(CUSP)
        other = parse_polynomial(VariableFrame(m=3, n=1), Q, "x3")
        with pytest.raises(FrameMismatch):
            o.value(other)

    def test_monomial_value(self):
        ctx = quadratic(2)
        frame = VariableFrame(m=2, n=2)
        o = MonomialValuation(frame, [ctx.value(1, 0), ctx.value(0, 1)])
        got = o.value(parse_polynomial(frame, Q, "x1^3 + x1*x2"))
        assert str(got.value) == "1 + 1*sqrt(2)"

    def test_valuation_axioms_on_products(self):
        o = oracle_from_document(CUSP)
        rng = random.Random(4)
        for _ in range(40):
            f = _random_poly(rng)
            g = _random_poly(rng)
            vf, vg, vfg = o.value(f), o.value(g), o.value(f * g)
            if vf.is_finite and vg.is_finite and vfg.is_finite:
                assert vfg.value == vf.value + vg.value
            vsum = o.value(f + g)
            if vf.is_finite and vg.is_finite and vf.value != vg.value and vsum.is_finite:
                assert vsum.value == min(vf.value, vg.value)


class TestResidue:
    def test_leading_ratio(self):
        o = oracle_from_document(CUSP)
        assert str(o.residue(P("x2^2"), P("x1^3"))) == "1"
        assert str(o.residue(P("2*x1^3"), P("x2^2"))) == "2"

    def test_shifted_arc(self):
        o = arc_oracle(0, "x2^2 - 2*x1*x2 + x1^2 - x1^3",
                       {"x1": "t^2", "x2": "t^2 + t^3"})
        assert o.arc_consistency()
        assert str(o.residue(P("x2"), P("x1"))) == "1"

    def test_value_mismatch(self):
        o = oracle_from_document(CUSP)
        with pytest.raises(ValueMismatch):
            o.residue(P("x2"), P("x1"))


class TestBestApprox:
    def test_first_value_already_outside(self):
        o = oracle_from_document(CUSP)
        got = o.best_approx(10)
        assert got.status == "MAX-OUTSIDE"
        assert got.h.is_zero
        assert str(got.gamma) == "3"
        assert member(got.gamma.value, o.base_lattice()) is None

    def test_one_residue_matching_step(self):
        o = arc_oracle(0, "x2^2 - 2*x1*x2 + x1^2 - x1^3",
                       {"x1": "t^2", "x2": "t^2 + t^3"})
        got = o.best_approx(10)
        assert got.status == "MAX-OUTSIDE"
        assert got.h == P("x1")
        assert str(got.gamma) == "3"

    def test_defect_ladder_never_leaves_group(self):
        # f = x2^p - x1^{a(p-1)} x2 - x1^{ap+1} for p=2, a=1 with the
        # Artin-Schreier arc x2 = sum t^{1+2^i}
        terms = " + ".join(f"t^{1 + 2**i}" for i in range(6))
        o = arc_oracle(2, "x2^2 + x1*x2 + x1^3", {"x1": "t", "x2": terms})
        assert o.arc_consistency()
        got = o.best_approx(64)
        assert got.status == "NO-MAX-UP-TO-BOUND"
        assert got.reason == "TRUNCATION"
        assert [str(v) for v in got.ladder] == ["2", "3", "5", "9", "17", "33"]

    def test_step_bound(self):
        terms = " + ".join(f"t^{1 + 2**i}" for i in range(6))
        o = arc_oracle(2, "x2^2 + x1*x2 + x1^3", {"x1": "t", "x2": terms})
        got = o.best_approx(2)
        assert got.status == "NO-MAX-UP-TO-BOUND" and got.reason == "STEP-BOUND"
        assert [str(v) for v in got.ladder] == ["2", "3", "5"]

    def test_strictly_increasing_ladder(self):
        terms = " + ".join(f"t^{1 + 2**i}" for i in range(6))
        o = arc_oracle(2, "x2^2 + x1*x2 + x1^3", {"x1": "t", "x2": terms})
        ladder = o.best_approx(64).ladder
        assert all(a < b for a, b in zip(ladder, ladder[1:]))


class TestArcConsistency:
    def test_cusp(self):
        assert oracle_from_document(CUSP).arc_consistency()

    def test_wrong_exponent(self):
        o = arc_oracle(0, "x2^2 - x1^5", {"x1": "t^2", "x2": "t^3"})
        assert not o.arc_consistency()

    def test_defect_arc(self):
        terms = " + ".join(f"t^{1 + 2**i}" for i in range(6))
        o = arc_oracle(2, "x2^2 + x1*x2 + x1^3", {"x1": "t", "x2": terms})
        assert o.arc_consistency()


class TestAugmentedChain:
    def test_degree_must_increase(self):
        frame = FR
        with pytest.raises(InputError):
            AugmentedChain(frame, Q, RATIONAL.value(1), [
                (P("x2"), RATIONAL.value(F(3, 2))),
                (P("x2 + x1"), RATIONAL.value(2)),
            ])

    def test_gamma_must_increase(self):
        with pytest.raises(InputError):
            AugmentedChain(FR, Q, RATIONAL.value(1), [
                (P("x2"), RATIONAL.value(F(3, 2))),
                (P("x2^2 - x1^3"), RATIONAL.value(1)),
            ])

    def test_two_step_chain(self):
        ch = AugmentedChain(FR, Q, RATIONAL.value(1), [
            (P("x2"), RATIONAL.value(F(3, 2))),
            (P("x2^2 - x1^3"), RATIONAL.value(4)),
        ])
        assert str(ch.value(P("x2^2 - x1^3"))) == "4"
        assert str(ch.value(P("x2"))) == "3/2"
        assert str(ch.value(P("x2^2"))) == "3"

    def test_residue_unsupported(self):
        ch = oracle_from_document(CHAIN)
        with pytest.raises(Unsupported):
            ch.residue(P("x2"), P("x1"))


class TestCrossOracle:
    def test_chain_agrees_with_normalized_arc(self):
        # arc normalized so that value(x1) = 1 matches the chain's Gauss base
        arc = arc_oracle(0, "x2^2 - x1^3", {"x1": "t^2", "x2": "t^3"},
                         normalization="1/2")
        chain = oracle_from_document(CHAIN)
        rng = random.Random(13)
        for _ in range(60):
            a = _random_base_poly(rng)
            b = _random_base_poly(rng)
            g = a + b * P("x2")
            if g.is_zero:
                continue
            va, vc = arc.value(g), chain.value(g)
            assert va.kind == vc.kind == "finite"
            assert va.value == vc.value, str(g)
        # on f itself the finite chain sees 3, the arc sees infinity
        f = P("x2^2 - x1^3")
        assert str(chain.value(f)) == "3"
        assert arc.value(f).is_infinite


class TestDocuments:
    def test_arc_document_roundtrip(self):
        o = oracle_from_document(CUSP)
        doc = o.document()
        o2 = oracle_from_document(doc)
        assert o2.f == o.f and o2.arc == o.arc

    def test_monomial_document(self):
        doc = {
            "version": 1,
            "kind": "monomial",
            "ring": {"m": 2, "n": 2, "char": 0},
            "generators": {"kind": "quadratic", "d": 2},
            "weights": ["1", "sqrt(2)"],
        }
        o = oracle_from_document(doc)
        assert isinstance(o, MonomialValuation)
        assert str(o.weights[1]) == "1*sqrt(2)"

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            oracle_from_document({"version": 1, "kind": "mystery"})

    def test_arc_must_vanish_at_origin(self):
        doc = dict(CUSP)
        doc["arc"] = {"x1": "1 + t", "x2": "t^3"}
        with pytest.raises(InputError):
            oracle_from_document(doc)


def _random_poly(rng, max_terms=4, max_exp=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = (rng.randint(0, max_exp), rng.randint(0, max_exp))
        terms[mono] = Q.scalar(F(rng.randint(-5, 5)))
    return Polynomial(FR, Q, terms)


def _random_base_poly(rng):
    terms = {}
    for _ in range(rng.randint(0, 3)):
        terms[(rng.randint(0, 5), 0)] = Q.scalar(F(rng.randint(-5, 5)))
    return Polynomial(FR, Q, terms)
