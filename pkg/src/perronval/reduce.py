"""Reduction of multiplicity along a rank-1 valuation.

One macro-step on a monic hypersurface f with 1 < r = ord f(0,..,0,x_m):

* when value(x_m) lies outside the base value group, an A1 Perron transform
  built from the coefficient expansion drops the multiplicity strictly
  (``lrm_step``);
* when it lies inside, a translation x_m -> x_m - h first pushes it out:
  the characteristic-0 route translates by a residue multiple of a_{r-1},
  and the general route translates by the best approximation of x_m from
  the base ring, which either exits the group (defectless behaviour), keeps
  climbing inside it (defect suspicion), or certifies that x_m agrees with
  a base element (case 2, finished by a single monomial substitution).

Every step appends a replayable TraceStep; ``replay_trace`` re-executes a
trace document and must reproduce the recorded polynomials byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    BinomialObstruction,
    Case2Signal,
    DefectSuspected,
    InputError,
    InternalContradiction,
    NotCase2,
    PreconditionError,
    PreconditionValueInGroup,
    StepBoundExceeded,
    TruncationExhausted,
    Unsupported,
)
from .oracle import ArcValuation
from .perron import (
    PerronTransform,
    build_a1,
    build_a6_divide,
    check_sigma_proportionality,
)
from .poly import Polynomial, format_ring_header, parse_polynomial, parse_ring_header
from .scalars import INFINITE
from .valgroup import det_int, member

DOCUMENT_VERSION = 1


@dataclass(frozen=True)
class Bounds:
    max_translations: int = 64
    max_perron_steps: int = 10_000
    max_approx_steps: int = 64


@dataclass(frozen=True)
class SigmaData:
    """Expansion data of one macro-step: the minimal value rho, its achievers
    sigma_1 < .. < sigma_t, the monomial exponents d_j(l) of the expansion
    coefficients, the transform exponents lambda_l / tau_{j,l}, and the minor
    determinant d."""

    rho: object  # Value
    sigmas: tuple
    dvecs: dict  # l -> tuple of d_j(l)
    lambdas: dict | None = None  # l -> int
    taus: dict | None = None  # l -> tuple of tau_{j,l}
    d: int | None = None

    @property
    def t(self) -> int:
        return len(self.sigmas)

    def document(self) -> dict:
        doc = {
            "rho": str(self.rho),
            "sigmas": list(self.sigmas),
            "dvecs": {str(l): list(v) for l, v in sorted(self.dvecs.items())},
        }
        if self.lambdas is not None:
            doc["lambdas"] = {str(l): v for l, v in sorted(self.lambdas.items())}
        if self.taus is not None:
            doc["taus"] = {str(l): list(v) for l, v in sorted(self.taus.items())}
        if self.d is not None:
            doc["d"] = self.d
        return doc


@dataclass(frozen=True)
class TraceStep:
    kind: str  # ELU | A6 | A1 | TRANSLATE-CHAR0 | TRANSLATE-DEFECTLESS | CASE2 | STRICT-TRANSFORM
    payload: dict


@dataclass(frozen=True)
class ReductionState:
    oracle: ArcValuation

    def __post_init__(self):
        if not isinstance(self.oracle, ArcValuation):
            raise Unsupported("the reduction driver needs an arc oracle")

    @property
    def frame(self):
        return self.oracle.frame

    @property
    def field(self):
        return self.oracle.field

    @property
    def f(self) -> Polynomial:
        return self.oracle.f

    @property
    def r(self):
        return self.f.ord_last()

    def xm(self) -> Polynomial:
        return Polynomial.variable(self.frame, self.field, self.frame.m - 1)

    def sanity_check(self):
        f = self.f
        if f.is_zero:
            raise InputError("the hypersurface is zero")
        exp = f.expand_last()
        if not exp.monic:
            raise InputError("f must be monic in the last variable")
        for i in range(self.frame.m):
            mono = [0] * self.frame.m
            mono[i] = 1
            if f.divisible_by(Polynomial.monomial(self.frame, self.field, mono)):
                raise InputError("f is divisible by a variable")
        if not f.constant_term().is_zero:
            raise InputError("the center does not lie on the hypersurface")
        r = f.ord_last()
        if r is INFINITE:
            raise InputError("ord f(0,..,0,x_m) is infinite")
        if r < 1:
            raise InputError("the center does not lie on the hypersurface")


def state_from_oracle(oracle: ArcValuation) -> ReductionState:
    state = ReductionState(oracle)
    state.sanity_check()
    return state


def _strict_sanity(f1: Polynomial):
    """The strict transform must not be divisible by a base variable, and a
    last-variable factor is only allowed when f1 is the smooth equation
    x_m itself (times a constant)."""
    frame, field = f1.frame, f1.field
    for i in range(frame.m - 1):
        mono = [0] * frame.m
        mono[i] = 1
        if f1.divisible_by(Polynomial.monomial(frame, field, mono)):
            raise InternalContradiction("strict transform divisible by a base variable")
    mono = [0] * frame.m
    mono[-1] = 1
    xm = Polynomial.monomial(frame, field, mono)
    if f1.divisible_by(xm):
        q = f1.divide_by_monomial(tuple(mono))
        if len(q.terms) != 1 or not q.constant_term():
            raise InputError(
                "strict transform splits off the last variable; the input "
                "hypersurface was reducible"
            )


def _monic_normalize(f1: Polynomial) -> Polynomial:
    """Divide by the x_m-leading coefficient when it is a nonzero constant."""
    e = f1.degree_in_last()
    lead = f1.coefficient_of_last(e)
    if len(lead.terms) == 1 and all(v == 0 for v in next(iter(lead.terms))):
        c = lead.constant_term()
        if not c.is_zero and c != f1.field.one:
            return f1 * c.inverse()
    return f1


def _expansion_values(state: ReductionState, coeffs):
    """Oracle values of the terms a_i x_m^i; all must be finite."""
    xm = state.xm()
    values = {}
    for i, a in enumerate(coeffs):
        if a.is_zero:
            continue
        vr = state.oracle.value(a * xm**i)
        if vr.is_above:
            raise TruncationExhausted(
                f"value of a_{i} x_m^{i} is beyond the arc window"
            )
        if vr.is_infinite:
            raise InputError(f"term a_{i} x_m^{i} is a multiple of f")
        values[i] = vr.value
    return values


def _sigma_of(values):
    rho = min(values.values())
    sigmas = tuple(sorted(i for i, v in values.items() if v == rho))
    return rho, sigmas


def _elu_coefficients(state: ReductionState, coeffs):
    """Monomial-times-unit splitting of the nonzero expansion coefficients.

    Plane curves (m = 2) use exact power extraction.  Higher dimension is
    supported when the arc restricts to a monomial valuation on the base,
    in which case the Lemma-11 loop monomializes the product; key monomial
    data (dvecs) is extracted per coefficient afterwards.
    """
    frame, field = state.frame, state.field
    steps = []
    if frame.m == 2:
        dvecs = {}
        abars = {}
        for i, a in enumerate(coeffs):
            if a.is_zero:
                continue
            k = min(mono[0] for mono in a.terms)
            dvecs[i] = (k,)
            abars[i] = a.divide_by_monomial((k, 0))
            if abars[i].constant_term().is_zero:
                raise Unsupported("coefficient does not split as monomial times unit")
        return state, coeffs, dvecs, abars, steps
    raise Unsupported(
        "embedded monomialization of the base is implemented for plane "
        "curves; higher dimension needs a monomial base valuation"
    )


def lrm_step(state: ReductionState, bounds: Bounds = Bounds()):
    """One multiplicity-dropping macro-step (requires value(x_m) outside the
    base group).  Returns (new_state, steps)."""
    oracle = state.oracle
    frame = state.frame
    r = state.r
    if r is INFINITE or r <= 1:
        raise PreconditionError(f"need 1 < r < infinity, got {r}")
    gamma_z = oracle.value(state.xm())
    if gamma_z.is_above:
        raise TruncationExhausted("value of x_m is beyond the arc window")
    if gamma_z.is_infinite:
        raise InputError("x_m is a local equation of f; nothing to reduce")
    if member(gamma_z.value, oracle.base_lattice()) is not None:
        raise PreconditionValueInGroup(
            "value(x_m) lies in the base group; translate first"
        )

    expansion = state.f.expand_last()
    if not expansion.monic:
        raise PreconditionError("f must be monic in the last variable")
    state, coeffs, dvecs, abars, steps = _elu_coefficients(state, expansion.coeffs)
    oracle = state.oracle

    values = _expansion_values(state, coeffs)
    rho, sigmas = _sigma_of(values)
    if len(sigmas) <= 1:
        raise InternalContradiction(
            "a single minimal term contradicts value(f) = infinity"
        )
    if sigmas[-1] > r:
        raise InternalContradiction("sigma_t exceeded r")

    n = frame.n
    base_values = oracle.variable_values()[:n]
    tau = build_a1(
        base_values, gamma_z.value, frame,
        residue=oracle.monomial_residue, bound=bounds.max_perron_steps,
    )
    mat = tau.matrix
    lambdas = {}
    taus = {}
    for l in values:
        dv = dvecs[l]
        lambdas[l] = sum(mat[i][n] * dv[i] for i in range(n)) + mat[n][n] * l
        taus[l] = tuple(
            sum(mat[i][j] * dv[i] for i in range(n)) + mat[n][j] * l
            for j in range(n)
        )
    for s in sigmas:
        if taus[s] != taus[sigmas[0]]:
            raise InternalContradiction("tau exponents differ across the sigma block")
    if not check_sigma_proportionality(tau, sigmas, lambdas):
        raise InternalContradiction("the (lambda, sigma) proportionality failed")
    d_minor = det_int([list(row[:n]) for row in mat[:n]])
    sigma = SigmaData(rho=rho, sigmas=sigmas, dvecs=dvecs, lambdas=lambdas,
                      taus=taus, d=d_minor)

    g = tau.substitute(state.f)
    arc1 = tau.transform_arc(oracle.arc)
    frame1 = tau.new_frame()
    steps.append(TraceStep("A1", {
        "transform": tau.document(),
        "sigma": sigma.document(),
        "d_negative": d_minor < 0,
        "old_values": [str(v) for v in list(base_values) + [gamma_z.value]],
        "f_after": str(g),
        "generation": frame1.generation,
    }))

    # Lemma-11 merges when the minimal monomial block does not yet divide
    new_weights = tau.transformed_weights(list(base_values) + [gamma_z.value])[:n]
    current_taus = dict(taus)
    merges = 0
    while True:
        offender = None
        for l, tv in current_taus.items():
            if any(a < b for a, b in zip(tv, current_taus[sigmas[0]])):
                offender = l
                break
        if offender is None:
            break
        if merges >= bounds.max_perron_steps:
            raise StepBoundExceeded("divisibility merges exceeded the bound")
        merges += 1
        merge = build_a6_divide(
            current_taus[sigmas[0]], current_taus[offender], new_weights,
            frame1, bound=bounds.max_perron_steps,
        )
        g = merge.substitute(g)
        arc1 = merge.transform_arc(arc1)
        frame1 = merge.new_frame()
        mmat = merge.matrix
        current_taus = {
            l: tuple(sum(mmat[i][j] * tv[i] for i in range(n)) for j in range(n))
            for l, tv in current_taus.items()
        }
        new_weights = merge.transformed_weights(new_weights)
        steps.append(TraceStep("A6", {
            "transform": merge.document(),
            "f_after": str(g),
            "generation": frame1.generation,
        }))

    exps, lam, f1 = g.strict_transform(tau.c)
    _strict_sanity(f1)
    f1 = _monic_normalize(f1)
    r1 = f1.ord_last()
    if r1 is INFINITE:
        raise InternalContradiction("strict transform vanished along the fiber")
    if r1 == r:
        # theorem: impossible under the entry precondition.  Before failing,
        # record the forced shape: sigma_t = r, sigma_1 = 0, |d| = 1, and
        # with d = 1 the divisibility r | d_i(sigma_1), which puts value(x_m)
        # back in the base group and contradicts the precondition.
        degenerate = sigmas[-1] == r and sigmas[0] == 0 and abs(d_minor) == 1
        divisibility = None
        if degenerate:
            divisibility = all(x % r == 0 for x in dvecs[sigmas[0]])
        raise InternalContradiction(
            f"multiplicity did not drop (degenerate shape: {degenerate}, "
            f"r divides d_i(sigma_1): {divisibility})"
        )
    if r1 > r:
        raise InternalContradiction("multiplicity increased")

    oracle1 = oracle.with_arc(frame1, f1, arc1)
    if not oracle1.arc_consistency():
        raise InternalContradiction("transformed arc left the strict transform")
    steps.append(TraceStep("STRICT-TRANSFORM", {
        "c": str(tau.c),
        "exponents": list(exps),
        "lambda": lam,
        "f_after": str(f1),
        "r_after": r1,
        "generation": frame1.generation,
    }))
    return ReductionState(oracle1), steps


def char0_translate(state: ReductionState):
    """Translate x_m by the residue multiple of a_{r-1} (the route that the
    binomial theorem justifies in characteristic zero)."""
    oracle = state.oracle
    frame = state.frame
    r = state.r
    gamma_z = oracle.value(state.xm())
    if not gamma_z.is_finite:
        raise PreconditionError("value(x_m) must be finite")
    if member(gamma_z.value, oracle.base_lattice()) is None:
        raise PreconditionError(
            "value(x_m) is already outside the base group; run the Perron step"
        )
    expansion = state.f.expand_last()
    a_prev = expansion.coeffs[r - 1] if r - 1 < len(expansion.coeffs) else None
    if a_prev is None or a_prev.is_zero:
        raise BinomialObstruction("a_{r-1} vanishes identically")
    va = oracle.value(a_prev)
    if not va.is_finite or va.value != gamma_z.value:
        raise BinomialObstruction("value(a_{r-1}) differs from value(x_m)")

    values = _expansion_values(state, expansion.coeffs)
    rho, sigmas = _sigma_of(values)
    if len(sigmas) <= 1:
        raise InternalContradiction("a single minimal term contradicts value(f) = infinity")
    sigma = SigmaData(rho=rho, sigmas=sigmas, dvecs={})
    subleading = len(sigmas) >= 2 and sigmas[-2] == r - 1

    omega = oracle.residue(state.xm(), a_prev)
    h = a_prev * omega
    f_new = state.f.translate_last(h)
    oracle_new = oracle.translated(h, f_new)
    new_gamma = oracle_new.value(state.xm())
    if new_gamma.is_finite and not gamma_z.value < new_gamma.value:
        raise InternalContradiction("translation did not increase value(x_m)")
    derivative_bound = oracle.value(state.f.partial_last())
    step = TraceStep("TRANSLATE-CHAR0", {
        "omega": str(omega),
        "h": str(h),
        "sigma": sigma.document(),
        "sigma_t_minus_1_eq_r_minus_1": subleading,
        "value_before": str(gamma_z),
        "value_after": str(new_gamma),
        "derivative_value": str(derivative_bound),
        "f_after": str(f_new),
        "generation": frame.generation,
    })
    new_state = ReductionState(oracle_new)
    if new_state.r != r:
        raise InternalContradiction("translation changed the multiplicity")
    return new_state, step


def defectless_translate(state: ReductionState, bounds: Bounds = Bounds()):
    """Translate x_m by its best base-ring approximation.

    MAX-OUTSIDE makes the Perron precondition hold.  NO-MAX with a finite
    in-group ladder raises DEFECT-SUSPECTED (the no-largest-element
    signature); an infinite gamma certifies that x_m agrees with a base
    element and raises CASE2-SIGNAL instead.
    """
    oracle = state.oracle
    gamma_z = oracle.value(state.xm())
    if not gamma_z.is_finite:
        raise PreconditionError("value(x_m) must be finite")
    if member(gamma_z.value, oracle.base_lattice()) is None:
        raise PreconditionError(
            "value(x_m) is already outside the base group; run the Perron step"
        )
    approx = oracle.best_approx(bounds.max_approx_steps)
    if approx.status != "MAX-OUTSIDE":
        if approx.gamma.is_infinite:
            raise Case2Signal("x_m agrees with a base element", approx=approx)
        raise DefectSuspected(
            f"approximation ladder stayed in the base group ({approx.reason})",
            ladder=approx.ladder,
            reason=approx.reason,
        )
    h = approx.h
    f_new = state.f.translate_last(h)
    oracle_new = oracle.translated(h, f_new)
    new_state = ReductionState(oracle_new)
    new_gamma = oracle_new.value(new_state.xm())
    if not new_gamma.is_finite or member(new_gamma.value, oracle_new.base_lattice()) is not None:
        raise InternalContradiction("translation failed to leave the base group")
    if new_state.r != state.r:
        raise InternalContradiction("translation changed the multiplicity")
    step = TraceStep("TRANSLATE-DEFECTLESS", {
        "h": str(h),
        "gamma": str(approx.gamma),
        "ladder": [str(v) for v in approx.ladder],
        "f_after": str(f_new),
        "generation": state.frame.generation,
    })
    return new_state, step


def case2_finish(state: ReductionState, bounds: Bounds = Bounds()):
    """Finish the run when x_m is (to the trusted window) a base element:
    substitute x_m = x^b (x_m' + beta) with beta the residue of the unit
    part, then verify the strict transform is smooth.  Raises NOT-CASE2 when
    the certificate fails re-verification."""
    oracle = state.oracle
    frame, field = state.frame, state.field
    gamma_z = oracle.value(state.xm())
    if not gamma_z.is_finite:
        raise NotCase2("value(x_m) is not finite")
    coords = member(gamma_z.value, oracle.base_lattice())
    if coords is None:
        raise NotCase2("value(x_m) is not in the base group")
    n = frame.n
    b = list(coords[:n]) + [0] * (n - len(coords))
    if any(c < 0 for c in coords) or any(coords[n:]):
        raise NotCase2("monomial exponents of x_m are not nonnegative on x_1..x_n")
    mono = [0] * frame.m
    for j in range(n):
        mono[j] = b[j]
    unit_mono = Polynomial.monomial(frame, field, mono)
    beta = oracle.residue(state.xm(), unit_mono)
    if beta.is_zero:
        raise NotCase2("vanishing residue for the unit part")
    matrix = [[1 if i == j else 0 for j in range(n + 1)] for i in range(n)]
    matrix.append(b + [1])
    tau = PerronTransform(kind="A1", matrix=tuple(tuple(r) for r in matrix),
                          frame=frame, c=beta)
    g = tau.substitute(state.f)
    arc1 = tau.transform_arc(oracle.arc)
    frame1 = tau.new_frame()
    exps, lam, f1 = g.strict_transform(beta)
    try:
        _strict_sanity(f1)
    except InputError as exc:
        raise NotCase2(str(exc)) from exc
    f1 = _monic_normalize(f1)
    r1 = f1.ord_last()
    if r1 is INFINITE or r1 != 1:
        raise NotCase2(f"strict transform has order {r1}, expected 1")
    oracle1 = oracle.with_arc(frame1, f1, arc1)
    if not oracle1.arc_consistency():
        raise NotCase2("transformed arc left the strict transform")
    steps = [
        TraceStep("CASE2", {
            "transform": tau.document(),
            "beta": str(beta),
            "b": b,
            "old_values": [
                str(v) for v in oracle.variable_values()[:n] + [gamma_z.value]
            ],
            "f_after": str(g),
            "generation": frame1.generation,
        }),
        TraceStep("STRICT-TRANSFORM", {
            "c": str(beta),
            "exponents": list(exps),
            "lambda": lam,
            "f_after": str(f1),
            "r_after": r1,
            "generation": frame1.generation,
        }),
    ]
    return ReductionState(oracle1), steps


@dataclass
class ReductionResult:
    status: str  # REDUCED-TO-SMOOTH | MULTIPLICITY-DROPPED | DEFECT-SUSPECTED | BOUND-EXHAUSTED
    state: ReductionState
    trace: list
    r_initial: int
    r_final: int
    initial_ring: str = ""
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def dropped(self) -> int | None:
        return self.r_final if self.status == "MULTIPLICITY-DROPPED" else None


def reduce_multiplicity(state: ReductionState, bounds: Bounds = Bounds()) -> ReductionResult:
    """Loop translations and Perron steps until the multiplicity reaches 1,
    with terminal diagnostics for defect suspicion and exhausted bounds."""
    state.sanity_check()
    r0 = state.r
    initial_ring = format_ring_header(state.frame, state.field)
    trace = []
    diagnostics = {}
    translations = 0

    def finish(status, **extra):
        diagnostics.update(extra)
        if state.r < r0 and status in ("DEFECT-SUSPECTED", "BOUND-EXHAUSTED"):
            diagnostics["stalled_as"] = status
            status = "MULTIPLICITY-DROPPED"
        return ReductionResult(status, state, trace, r0, state.r,
                               initial_ring, diagnostics)

    if r0 is INFINITE or r0 < 1:
        raise InputError(f"need 1 <= r < infinity, got {r0}")
    while True:
        if state.r == 1:
            return finish("REDUCED-TO-SMOOTH")
        gamma_z = state.oracle.value(state.xm())
        if gamma_z.is_above:
            return finish("BOUND-EXHAUSTED", reason="TRUNCATION")
        if gamma_z.is_infinite:
            raise InputError("x_m is a local equation of f; bad input")
        in_group = member(gamma_z.value, state.oracle.base_lattice()) is not None
        try:
            if not in_group:
                state, steps = lrm_step(state, bounds)
                trace.extend(steps)
                continue
            if translations >= bounds.max_translations:
                return finish("BOUND-EXHAUSTED", reason="TRANSLATION-BOUND")
            translations += 1
            if not state.field.modular:
                try:
                    state, step = char0_translate(state)
                    trace.append(step)
                    continue
                except BinomialObstruction as exc:
                    diagnostics.setdefault("binomial_obstruction", str(exc))
            state, step = defectless_translate(state, bounds)
            trace.append(step)
        except DefectSuspected as exc:
            return finish(
                "DEFECT-SUSPECTED",
                ladder=[str(v) for v in exc.ladder],
                reason=exc.reason,
            )
        except Case2Signal as exc:
            try:
                state, steps = case2_finish(state, bounds)
                trace.extend(steps)
            except NotCase2 as inner:
                return finish(
                    "DEFECT-SUSPECTED",
                    case2_rejected=str(inner),
                    ladder=[str(v) for v in exc.approx.ladder] if exc.approx else [],
                    reason="NOT-CASE2",
                )
        except (StepBoundExceeded, TruncationExhausted) as exc:
            return finish("BOUND-EXHAUSTED", reason=exc.code, detail=str(exc))


def run_reduction(oracle: ArcValuation, bounds: Bounds = Bounds()) -> ReductionResult:
    return reduce_multiplicity(state_from_oracle(oracle), bounds)


# ---------------------------------------------------------------------------
# Trace documents and replay

def trace_document(result: ReductionResult, oracle_doc: dict | None = None) -> dict:
    state = result.state
    doc = {
        "version": DOCUMENT_VERSION,
        "status": result.status,
        "r_initial": result.r_initial,
        "r_final": result.r_final,
        "ring": result.initial_ring,
        "steps": [{"kind": s.kind, **s.payload} for s in result.trace],
        "final_f": str(state.f),
        "final_generation": state.frame.generation,
        "diagnostics": result.diagnostics,
    }
    if oracle_doc is not None:
        doc["oracle"] = oracle_doc
        doc["initial_f"] = oracle_doc.get("f")
    return doc


def replay_trace(doc: dict) -> str:
    """Re-run the recorded substitutions and translations from the initial
    document; returns the canonical final polynomial, which must equal the
    recorded one byte for byte."""
    oracle_doc = doc.get("oracle")
    if oracle_doc is None:
        raise InputError("trace document lacks the oracle block")
    frame, field = parse_ring_header(doc["ring"])
    f = parse_polynomial(frame, field, oracle_doc["f"])
    for step in doc.get("steps", []):
        kind = step["kind"]
        if kind in ("A1", "A6", "ELU", "CASE2"):
            tau = PerronTransform.from_document(step["transform"], frame, field)
            f = tau.substitute(f)
            frame = tau.new_frame()
        elif kind in ("TRANSLATE-CHAR0", "TRANSLATE-DEFECTLESS"):
            h = parse_polynomial(frame, field, step["h"])
            f = f.translate_last(h)
        elif kind == "STRICT-TRANSFORM":
            c = field.scalar(Fraction(step["c"]))
            exps, lam, f1 = f.strict_transform(c)
            if list(exps) != step["exponents"] or lam != step["lambda"]:
                raise InputError("replayed strict transform differs from the record")
            f = _monic_normalize(f1)
        else:
            raise InputError(f"unknown trace step kind {kind!r}")
        recorded = step.get("f_after")
        if recorded is not None and str(f) != recorded:
            raise InputError(f"replay diverged at a {kind} step")
    return str(f)


def replay_matches(doc: dict) -> bool:
    return replay_trace(doc) == doc["final_f"]
