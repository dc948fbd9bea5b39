"""Automated checkers for the sign and coefficient conjectures.

Each checker returns a ConjectureReport.  Verdicts: "consistent" when every
probe supports the statement, "violated" when a witness contradicts it
(witnesses carry the full offending instance), "inconclusive" when a
statistical error band straddles zero.  Exact checkers never return
inconclusive.

Checkers are probes of open statements: in verified ranges a violation
means a bug, beyond them it is a reportable finding, so violations are
data (reports), not exceptions.  Exceptions are reserved for internal
contradictions (e.g. the two numeric oracles disagreeing with both error
bands excluding zero).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .matchings import enumerate_matchings
from .oracle import BallSpec, auto_degree_cap, exact_sign_fold, mc_pizza
from .polyring import (Poly, exact_divide_linear, mul, partitions,
                       schur_bialternant, vandermonde)
from .rootsys import ArrangementSpec, chamber_sign, make_spec
from .taylor import (ParityRegimeError, compose_block, fold_parameters,
                     t_poly, y_poly, z_poly)

CONJECTURE_IDS = ("signA", "signD", "lemma51", "yNeg", "schurRecon", "tPos")


class OracleDisagreement(RuntimeError):
    """The series fold and Monte Carlo disagree with both bands excluding zero."""


class ReconstructionMismatch(RuntimeError):
    """The alternant reconstruction does not reproduce the fold exactly."""


class RewriteFailed(RuntimeError):
    """A quotient expected to be symmetric and even in its variables is not."""


@dataclass
class ConjectureReport:
    conjecture_id: str
    parameters: dict
    verdict: str
    witnesses: List[dict]
    notes: List[str] = field(default_factory=list)
    runtime_ms: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "conjecture_id": self.conjecture_id,
            "params": self.parameters,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "runtime_ms": self.runtime_ms,
        }


def _finish(conjecture_id: str, params: dict, witnesses: List[dict], notes: List[str],
            inconclusive: bool, started: float) -> ConjectureReport:
    if witnesses:
        verdict = "violated"
    elif inconclusive:
        verdict = "inconclusive"
    else:
        verdict = "consistent"
    return ConjectureReport(conjecture_id, params, verdict, witnesses, notes,
                            (time.perf_counter() - started) * 1000.0)


# ---------------------------------------------------------------------------
# sign conjectures (numeric)
# ---------------------------------------------------------------------------


def _max_structure_square(spec: ArrangementSpec, center: Sequence[float]) -> float:
    """Largest sum of squared unit-form pairings over the matching-indexed
    subsystems; controls the series tail at this center."""
    ground = spec.rank + 1 if spec.family == "A" else spec.rank
    worst = 0.0
    for matching in enumerate_matchings(ground):
        s = 0.0
        for i, j in matching.edges:
            minus = (center[i - 1] - center[j - 1]) / math.sqrt(2)
            s += minus * minus
            if spec.family == "D":
                plus = (center[i - 1] + center[j - 1]) / math.sqrt(2)
                s += plus * plus
        worst = max(worst, s)
    return worst


def _signed_estimate(spec: ArrangementSpec, center: Sequence[float]) -> Tuple[Fraction, Fraction, int]:
    """(value, tail, degree_cap) from the exact rational fold, the cap grown
    until the band excludes zero or the cap limit is reached.  The value is
    the quantity up to a positive prefactor, so its sign is decisive."""
    _, k, _ = fold_parameters(spec)
    smax = _max_structure_square(spec, center)
    cap = auto_degree_cap(spec.rank, k, smax, 1e-12)
    value, tail = exact_sign_fold(spec, center, cap)
    while tail >= abs(value) and cap < 400:
        cap = min(400, cap + 40)
        value, tail = exact_sign_fold(spec, center, cap)
    return value, tail, cap


def _check_sign(conjecture_id: str, spec: ArrangementSpec, predicted_of_t,
                centers: Sequence[Sequence[float]], samples: int, seed: int) -> ConjectureReport:
    started = time.perf_counter()
    witnesses: List[dict] = []
    notes: List[str] = []
    inconclusive = False
    for idx, center in enumerate(centers):
        if len(center) != spec.ambient_dim:
            raise ValueError(f"center {center} has wrong dimension for {spec}")
        if math.sqrt(sum(x * x for x in center)) < 1e-12:
            notes.append(f"center {idx}: at the origin, quantity vanishes (degenerate, skipped)")
            continue
        t = chamber_sign(spec, center)
        value, tail, cap = _signed_estimate(spec, center)
        predicted = predicted_of_t(t)

        if samples > 0:
            mc = mc_pizza(spec, BallSpec(tuple(center), 1.0), samples, seed + idx)
            if abs(mc.value) > 3 * mc.std_error and abs(value) > tail:
                if (mc.value > 0) != (value > 0):
                    raise OracleDisagreement(
                        f"center {center}: series fold gives {value} (tail {tail}) but "
                        f"Monte Carlo gives {mc.value} +- {mc.std_error}"
                    )

        if abs(value) <= tail:
            inconclusive = True
            notes.append(
                f"center {idx}: band straddles zero (value {float(value):.3e}, "
                f"tail {float(tail):.3e}, cap {cap})"
            )
            continue
        if (value > 0) != (predicted > 0):
            witnesses.append({
                "center": list(center),
                "chamber_sign": t,
                "estimate": float(value),
                "estimate_exact": str(value),
                "tail_bound": float(tail),
                "degree_cap": cap,
            })
    params = {
        "family": spec.family,
        "rank": spec.rank,
        "centers": [list(c) for c in centers],
        "samples": samples,
        "seed": seed,
    }
    return _finish(conjecture_id, params, witnesses, notes, inconclusive, started)


def check_sign_A(n: int, centers: Sequence[Sequence[float]], samples: int = 0,
                 seed: int = 0) -> ConjectureReport:
    """Sign prediction for type A (rank 2 or 3 mod 4): the quantity at a
    center strictly inside a chamber has sign (-1)^floor((n+1)/4) times the
    chamber sign."""
    if n % 4 not in (2, 3):
        raise ParityRegimeError("type A sign conjecture applies to rank 2 or 3 mod 4")
    spec = make_spec("A", n)
    prefactor = -1 if ((n + 1) // 4) % 2 else 1
    return _check_sign("signA", spec, lambda t: prefactor * t, centers, samples, seed)


def check_sign_D(n: int, centers: Sequence[Sequence[float]], samples: int = 0,
                 seed: int = 0) -> ConjectureReport:
    """Sign prediction for type D (odd rank): the quantity has sign opposite
    to the chamber sign."""
    if n % 2 == 0 or n < 3:
        raise ParityRegimeError("type D sign conjecture applies to odd rank >= 3")
    spec = make_spec("D", n)
    return _check_sign("signD", spec, lambda t: -t, centers, samples, seed)


# ---------------------------------------------------------------------------
# structural audits of the fold (exact)
# ---------------------------------------------------------------------------


def check_lemma51(n: int, d: int) -> ConjectureReport:
    """Monomial audit of the type D fold: (a) every exponent even,
    (b) at least one zero exponent per monomial, (c) no two equal exponents."""
    started = time.perf_counter()
    z = z_poly(make_spec("D", n), d)
    witnesses: List[dict] = []
    for mono, coeff in z.sorted_terms():
        claims = []
        if any(e % 2 for e in mono):
            claims.append("odd_exponent")
        if all(e > 0 for e in mono):
            claims.append("no_zero_exponent")
        if len(set(mono)) != len(mono):
            claims.append("repeated_exponent")
        for claim in claims:
            witnesses.append({"claim": claim, "monomial": list(mono), "coefficient": str(coeff)})
    params = {"family": "D", "rank": n, "degree": d, "monomials": len(z)}
    return _finish("lemma51", params, witnesses, [], False, started)


def check_y_negativity(n: int, d_max: int) -> ConjectureReport:
    """For each valid degree d from n(n-1) to d_max, every strictly
    decreasing target monomial of the reduced fold must have a strictly
    negative coefficient.  Zero coefficients are classified separately from
    positive ones (the statement is strict)."""
    started = time.perf_counter()
    if n < 3 or n % 2 == 0:
        raise ParityRegimeError("y-negativity applies to odd rank >= 3")
    base = n * (n - 1)
    witnesses: List[dict] = []
    degrees = list(range(base, d_max + 1, 2))
    for d in degrees:
        y = y_poly(n, d)
        half = (d - base) // 2
        for lam in partitions(half, n - 1):
            padded = list(lam) + [0] * (n - 1 - len(lam))
            mono = tuple(2 * padded[i] + 2 * (n - 1 - i) for i in range(n - 1))
            coeff = y.coefficient(mono)
            if coeff > 0:
                witnesses.append({"degree": d, "partition": list(lam), "monomial": list(mono),
                                  "coefficient": str(coeff), "kind": "positive"})
            elif coeff == 0:
                witnesses.append({"degree": d, "partition": list(lam), "monomial": list(mono),
                                  "coefficient": "0", "kind": "zero (non-strict violation)"})
    params = {"rank": n, "degrees": degrees}
    return _finish("yNeg", params, witnesses, [], False, started)


def _squares_substituted(p: Poly) -> Poly:
    """p(x_1^2, ..., x_r^2): doubles every exponent."""
    return Poly(p.arity, {tuple(2 * e for e in mono): c for mono, c in p.terms.items()})


def schur_reconstruct(n: int, d: int) -> ConjectureReport:
    """Rebuild the full type D fold from the strictly-decreasing coefficients
    of the reduced fold: sum over partitions of c_lambda times the squared
    Vandermonde times the Schur polynomial in the squared variables must
    equal the fold exactly.  A mismatch raises ReconstructionMismatch."""
    started = time.perf_counter()
    spec = make_spec("D", n)
    base = n * (n - 1)
    if d < base or (d - base) % 2:
        raise ValueError(f"degree {d} below the lowest nonzero degree {base} or wrong parity")
    y = y_poly(n, d)
    shift = (d - base) // 2
    target = z_poly(spec, d).scale(Fraction(1, 1 << shift))
    vand_sq = vandermonde(n, squared=True)

    lambda_coeffs: Dict[Tuple[int, ...], Fraction] = {}
    reconstruction = Poly.zero(n)
    for lam in partitions(shift, n - 1):
        padded = list(lam) + [0] * (n - 1 - len(lam))
        mono = tuple(2 * padded[i] + 2 * (n - 1 - i) for i in range(n - 1))
        c = y.coefficient(mono)
        lambda_coeffs[lam] = c
        if c:
            schur_sq = _squares_substituted(schur_bialternant(lam, n))
            reconstruction = reconstruction + mul(vand_sq, schur_sq).scale(c)
    if reconstruction != target:
        raise ReconstructionMismatch(
            f"rank {n} degree {d}: alternant reconstruction does not match the fold"
        )
    params = {
        "rank": n,
        "degree": d,
        "lambda_coefficients": {str(list(k)): str(v) for k, v in lambda_coeffs.items()},
    }
    return _finish("schurRecon", params, [], [], False, started)


# ---------------------------------------------------------------------------
# positivity of the two-variable quotient blocks (exact)
# ---------------------------------------------------------------------------


def _rewrite_even_symmetric(p: Poly) -> Dict[Tuple[int, int], Fraction]:
    """Write a symmetric polynomial with all-even exponents in two variables
    in the basis u = x^2 + y^2, v = x^2 y^2; raises RewriteFailed otherwise."""
    if p.arity != 2:
        raise ValueError("rewrite expects a two-variable polynomial")
    if any(e % 2 for mono in p.terms for e in mono):
        raise RewriteFailed("quotient has an odd exponent; expected even in each variable")
    halved = Poly(2, {(mono[0] // 2, mono[1] // 2): c for mono, c in p.terms.items()})
    if halved.permute_variables([1, 0]) != halved:
        raise RewriteFailed("quotient is not symmetric in its variables")
    u = Poly(2, {(1, 0): Fraction(1), (0, 1): Fraction(1)})
    v = Poly(2, {(1, 1): Fraction(1)})
    out: Dict[Tuple[int, int], Fraction] = {}
    work = halved
    while not work.is_zero():
        mono, coeff = work.leading()
        a, b = mono
        if a < b:
            raise RewriteFailed(f"leading monomial {mono} cannot come from a symmetric polynomial")
        out[(a - b, b)] = coeff
        work = work - mul(u.pow(a - b), v.pow(b)).scale(coeff)
    return out


def check_t_positivity(d_max: int, d_min: int = 6) -> ConjectureReport:
    """For even degrees d in [6, d_max]: minus the degree-d block composed
    with (x+y, x-y) and normalized to unit forms, divided exactly by
    x^2 - y^2, must have non-negative coefficients in the basis
    u = x^2 + y^2, v = x^2 y^2."""
    started = time.perf_counter()
    if d_min < 6:
        raise ValueError("the positivity range starts at degree 6")
    witnesses: List[dict] = []
    basis_coeffs: Dict[int, Dict[Tuple[int, int], Fraction]] = {}
    degrees = [d for d in range(d_min, d_max + 1) if d % 2 == 0]
    for d in degrees:
        block = t_poly(3, 2, d)
        composed = compose_block(block, [
            Poly.linear_form(2, (1, 1)),
            Poly.linear_form(2, (1, -1)),
        ]).scale(Fraction(1, 1 << (d // 2)))
        negated = -composed
        quot = exact_divide_linear(negated, Poly.linear_form(2, (1, -1)))
        quot = exact_divide_linear(quot, Poly.linear_form(2, (1, 1)))
        coeffs = _rewrite_even_symmetric(quot)
        basis_coeffs[d] = coeffs
        for (i, j), c in sorted(coeffs.items()):
            if c < 0:
                witnesses.append({"degree": d, "u_power": i, "v_power": j, "coefficient": str(c)})
    params = {"degrees": degrees}
    return _finish("tPos", params, witnesses, [], False, started)
