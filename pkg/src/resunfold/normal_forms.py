"""Universal normal forms (q-form and b-form), the gamma <-> q solver, and
the analytic-equivalence decision on invariants.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .algebra import CSeries, CSeriesMat2
from .invariants import FormalInvariants, NonGeneric, extract_formal
from .monodromy import gamma_numeric
from .system import ParametricSystem


class DegenerateDenominator(ArithmeticError):
    """b-form beta algebra breaks down: 1 - b h1 + b^2 h0 == 0."""


class NoConvergence(RuntimeError):
    """Newton iteration for q failed to converge."""


@dataclass(frozen=True)
class NormalFormParams:
    """Parameters of a realized normal form.

    For the q variant ``gamma()`` is -2 cos(pi sqrt(1+4q)); for the b
    variant beta encodes the lower-left polynomial beta(z) = beta0 +
    beta1 z and ``gamma()`` is 2 cos(2 pi sqrt(b beta1)).
    """

    variant: str
    F: FormalInvariants
    q: complex | None = None
    b: complex | None = None
    beta0: complex | None = None
    beta1: complex | None = None

    def gamma(self) -> complex:
        if self.variant == "Q-form":
            return gamma_of_q(self.q)
        return 2.0 * cmath.cos(2.0 * math.pi * cmath.sqrt(self.b * self.beta1))

    def build(self, order: int = 24):
        if self.variant == "Q-form":
            return build_q_form(self.F, self.q, order)
        return build_b_form(self.F, self.b, order)


def gamma_of_q(q: complex) -> complex:
    """-2 cos(pi sqrt(1 + 4 q)); entire in q."""
    return -2.0 * cmath.cos(math.pi * cmath.sqrt(1.0 + 4.0 * q))


def gamma_of_b(F: FormalInvariants, b: complex) -> complex:
    """2 cos(2 pi sqrt(b beta1)) for the b-form built on F."""
    beta1 = _beta_coeffs(F, b)[1]
    return 2.0 * cmath.cos(2.0 * math.pi * cmath.sqrt(b * beta1))


def build_q_form(F: FormalInvariants, q: complex, order: int = 24) -> ParametricSystem:
    """h d/dz - [[lambda, 1], [alpha + q h, lambda]].

    extract_formal of the result returns F exactly: the q h term dies under
    reduction mod h.
    """
    lam = CSeries([F.lambda0, F.lambda1], order)
    h = CSeries([F.h0, F.h1, 1.0], order)
    a21 = CSeries([F.alpha0, F.alpha1], order) + h * q
    A = CSeriesMat2(lam, CSeries.one(order), a21, lam)
    return ParametricSystem(F.h0, F.h1, A)


def _beta_coeffs(F: FormalInvariants, b: complex) -> tuple[complex, complex]:
    """Coefficients of beta(z) making the b-form carry the invariants F.

    Derived from alpha = (1 + b z) beta(z) mod h:
        beta1 = (alpha1 - b alpha0) / (1 - b h1 + b^2 h0),
        beta0 = alpha0 + b h0 beta1.
    """
    den = 1.0 - b * F.h1 + b * b * F.h0
    if abs(den) < 1e-12:
        raise DegenerateDenominator("1 - b h1 + b^2 h0 vanishes")
    beta1 = (F.alpha1 - b * F.alpha0) / den
    beta0 = F.alpha0 + b * F.h0 * beta1
    return beta0, beta1


def build_b_form(F: FormalInvariants, b: complex, order: int = 24) -> ParametricSystem:
    """h d/dz - [[lambda, 1 + b z], [beta(z), lambda]] with beta chosen so
    that extract_formal returns F."""
    beta0, beta1 = _beta_coeffs(F, b)
    lam = CSeries([F.lambda0, F.lambda1], order)
    a12 = CSeries([1.0, b], order)
    a21 = CSeries([beta0, beta1], order)
    A = CSeriesMat2(lam, a12, a21, lam)
    return ParametricSystem(F.h0, F.h1, A)


def q_form_params(F: FormalInvariants, q: complex) -> NormalFormParams:
    return NormalFormParams("Q-form", F, q=q)


def b_form_params(F: FormalInvariants, b: complex) -> NormalFormParams:
    beta0, beta1 = _beta_coeffs(F, b)
    return NormalFormParams("B-form", F, b=b, beta0=beta0, beta1=beta1)


def solve_q(gamma_target: complex, q_seed: complex, tol: float = 1e-12,
            max_iter: int = 100) -> complex:
    """Newton solve of -2 cos(pi sqrt(1+4q)) = gamma_target from q_seed.

    The map is entire in q; the derivative 4 pi sin(pi u)/u (u = sqrt(1+4q))
    is computed analytically, with the removable singularity at u = 0
    filled in.
    """
    q = complex(q_seed)
    for _ in range(max_iter):
        u = cmath.sqrt(1.0 + 4.0 * q)
        f = -2.0 * cmath.cos(math.pi * u) - gamma_target
        if abs(f) < tol:
            return q
        if abs(u) < 1e-8:
            df = 4.0 * math.pi * math.pi * (1.0 - (math.pi * abs(u)) ** 2 / 6.0)
        else:
            df = 4.0 * math.pi * cmath.sin(math.pi * u) / u
        if df == 0:
            raise NoConvergence("vanishing derivative in Newton step")
        step = f / df
        q = q - step
    u = cmath.sqrt(1.0 + 4.0 * q)
    if abs(-2.0 * cmath.cos(math.pi * u) - gamma_target) < tol:
        return q
    raise NoConvergence(f"no convergence after {max_iter} iterations")


def q_seed_for(gamma_target: complex) -> complex:
    """Principal-branch seed: u = arccos(-gamma/2)/pi, q = (u^2 - 1)/4."""
    u = cmath.acos(-gamma_target / 2.0) / math.pi
    return (u * u - 1.0) / 4.0


def decide_equivalence(system_a: ParametricSystem, system_b: ParametricSystem,
                       tol: float = 1e-6, gamma_tol: float = 1e-9,
                       validity_radius: float = math.inf):
    """Three-valued equivalence decision on the invariants (h, lambda, alpha, gamma).

    Equivalent when the formal invariants match coefficientwise within tol
    and the gamma gap is below max(tol, combined est_error); Indeterminate
    when the gamma gap falls inside the integration error band
    (err, 10*err); NotEquivalent otherwise.  Returns (verdict, report).
    """
    Fa = extract_formal(system_a)
    Fb = extract_formal(system_b)
    for F in (Fa, Fb):
        if abs(F.alpha1) <= 1e-8:
            raise NonGeneric("system fails the genericity condition alpha1 != 0")
    formal_gaps = {
        "h0": abs(Fa.h0 - Fb.h0),
        "h1": abs(Fa.h1 - Fb.h1),
        "lambda0": abs(Fa.lambda0 - Fb.lambda0),
        "lambda1": abs(Fa.lambda1 - Fb.lambda1),
        "alpha0": abs(Fa.alpha0 - Fb.alpha0),
        "alpha1": abs(Fa.alpha1 - Fb.alpha1),
    }
    report = {"formal_gaps": formal_gaps}
    if max(formal_gaps.values()) >= tol:
        report["reason"] = "formal invariants differ"
        return "NotEquivalent", report

    ga = gamma_numeric(system_a, Fa, tol=gamma_tol, validity_radius=validity_radius)
    gb = gamma_numeric(system_b, Fb, tol=gamma_tol, validity_radius=validity_radius)
    gap = abs(ga.gamma - gb.gamma)
    err = ga.est_error + gb.est_error + 1e-15
    report.update({
        "gamma_a": ga.gamma, "gamma_b": gb.gamma,
        "gamma_gap": gap, "est_error": err,
    })
    if gap < max(tol, err):
        return "Equivalent", report
    if gap < max(tol, 10.0 * err):
        return "Indeterminate", report
    return "NotEquivalent", report
