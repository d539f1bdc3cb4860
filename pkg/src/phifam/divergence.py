"""Divergences of the normalizing value, closed forms, and cumulants.

The Bregman divergence of the normalizing value psi on one chart,

    D(u, v) = psi(v) - psi(u) - dpsi(u)(v - u),

has a closed form over the densities p, q themselves (independent of the
chart chosen through p):

    D(p || q) = E[(inv(p) - inv(q)) / inv'(p)] / E[u0 / inv'(p)],

where inv is the generator's inverse and inv' its derivative. For the
kappa generator this specializes, per point and with a = k*log p,
b = k*log q, to

    D_k(p || q) = E_p[(sinh a - sinh b) / (k cosh a)] / E_p[u0 / cosh a],

which is the (p^k - p^-k) form rewritten hyperbolically; as k -> 0 it
tends to KL(p, q) / E_p[u0]. With the exponential generator and u0 = 1
the closed form is exactly the Kullback-Leibler divergence. Densities
with non-positive entries are not in any family here; the divergence is
extended to +inf for them ("infinite" branch).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PhiOverflowError, StructuralError
from .measure import (MeasureSpace, ScalarField, _require_field, is_density,
                      weighted_sum)
from .phi import KAPPA_ZERO_EPS, PhiFunction
from .family import Chart, TangentVector, _as_tangent, normalizer_detail

BRANCH_CLOSED_FORM = "closed_form"
BRANCH_BREGMAN = "bregman"
BRANCH_INFINITE = "infinite"

_MASS_TOL = 1e-8


@dataclass(frozen=True)
class DivergenceDiagnostics:
    """Normalizing values and bisection iterations behind a report."""

    psi_values: tuple[float, ...] = ()
    solver_iterations: int = 0

    def to_json_obj(self) -> dict:
        return {"psi_values": [float(x) for x in self.psi_values],
                "solver_iterations": int(self.solver_iterations)}


@dataclass(frozen=True)
class DivergenceReport:
    """A divergence value (possibly +inf) plus how it was obtained."""

    value: float
    branch: str
    diagnostics: DivergenceDiagnostics = DivergenceDiagnostics()

    def to_json_obj(self) -> dict:
        value = "inf" if math.isinf(self.value) else float(self.value)
        return {"value": value, "branch": self.branch,
                "diagnostics": self.diagnostics.to_json_obj()}


def _clamp_tiny_negative(x: float) -> float:
    # float noise below the divergence nonnegativity guarantee
    return 0.0 if -1e-10 < x < 0.0 else x


def _check_pair(space: MeasureSpace, u0: ScalarField | None,
                p: ScalarField, q: ScalarField) -> ScalarField:
    _require_field(space, p, "p")
    _require_field(space, q, "q")
    if u0 is None:
        u0 = ScalarField.constant(space, 1.0)
    _require_field(space, u0, "u0")
    if np.any(u0.values <= 0.0):
        raise DomainError("u0 must be strictly positive pointwise")
    for name, d in (("p", p), ("q", q)):
        mass = weighted_sum(d.values, space.weights)
        if not (abs(mass - 1.0) <= _MASS_TOL):
            raise DomainError(f"{name} is not a probability density: mass = {mass!r}")
    return u0


# ---- chart-side divergence ---------------------------------------------------


def psi_gateaux(chart: Chart, u: TangentVector, v: ScalarField, *,
                tol: float = 1e-12) -> float:
    """Directional derivative of the normalizing value at u toward v."""
    uu = _as_tangent(chart, u)
    solve = normalizer_detail(chart, uu, tol=tol)
    return _gateaux_at(chart, uu, solve.value, v)


def _gateaux_at(chart: Chart, u: TangentVector, psi_u: float, v: ScalarField) -> float:
    _require_field(chart.space, v, "v")
    arg = chart.c.values + u.u.values - psi_u * chart.u0.values
    slope = chart.phi.deriv_array(arg)
    if not np.all(np.isfinite(slope)):
        raise PhiOverflowError("generator slope saturated inside the derivative")
    w = chart.space.weights
    num = weighted_sum(v.values * slope, w)
    den = weighted_sum(chart.u0.values * slope, w)
    return num / den


def bregman_psi(chart: Chart, v: TangentVector, u: TangentVector, *,
                tol: float = 1e-12) -> float:
    """psi(v) - psi(u) - dpsi(u)(v - u); nonnegative up to solver noise."""
    vv = _as_tangent(chart, v)
    uu = _as_tangent(chart, u)
    psi_v = normalizer_detail(chart, vv, tol=tol).value
    psi_u = normalizer_detail(chart, uu, tol=tol).value
    return psi_v - psi_u - _gateaux_at(chart, uu, psi_u, vv.u - uu.u)


def d_psi(chart: Chart, u: TangentVector, v: TangentVector, *,
          tol: float = 1e-12) -> float:
    """Divergence in chart coordinates: the Bregman value with arguments swapped."""
    return bregman_psi(chart, v, u, tol=tol)


def d_psi_report(chart: Chart, u: TangentVector, v: TangentVector, *,
                 tol: float = 1e-12) -> DivergenceReport:
    """Same as :func:`d_psi` but packaged with solver diagnostics."""
    vv = _as_tangent(chart, v)
    uu = _as_tangent(chart, u)
    sv = normalizer_detail(chart, vv, tol=tol)
    su = normalizer_detail(chart, uu, tol=tol)
    raw = sv.value - su.value - _gateaux_at(chart, uu, su.value, vv.u - uu.u)
    diag = DivergenceDiagnostics(psi_values=(su.value, sv.value),
                                 solver_iterations=su.iterations + sv.iterations)
    return DivergenceReport(_clamp_tiny_negative(raw), BRANCH_BREGMAN, diag)


# ---- density-side closed forms -------------------------------------------------


def phi_divergence(space: MeasureSpace, phi: PhiFunction, u0: ScalarField | None,
                   p: ScalarField, q: ScalarField) -> DivergenceReport:
    """Closed-form divergence between densities of one generator family."""
    u0 = _check_pair(space, u0, p, q)
    if np.any(p.values <= 0.0) or np.any(q.values <= 0.0):
        return DivergenceReport(math.inf, BRANCH_INFINITE)
    inv_p = phi.inverse_array(p.values)
    inv_q = phi.inverse_array(q.values)
    inv_slope = phi.inverse_deriv_array(p.values)
    w = space.weights
    num = weighted_sum((inv_p - inv_q) / inv_slope, w)
    den = weighted_sum(u0.values / inv_slope, w)
    return DivergenceReport(_clamp_tiny_negative(num / den), BRANCH_CLOSED_FORM)


def kappa_divergence(space: MeasureSpace, kappa, u0: ScalarField | None,
                     p: ScalarField, q: ScalarField) -> DivergenceReport:
    """Kappa-deformed divergence; kappa is a scalar or a per-point field.

    Per-point deformations with |kappa(t)| < KAPPA_ZERO_EPS take the
    analytic kappa -> 0 limit, so an all-zero kappa gives exactly
    KL(p, q) / E_p[u0].
    """
    u0 = _check_pair(space, u0, p, q)
    if isinstance(kappa, ScalarField):
        _require_field(space, kappa, "kappa")
        k = kappa.values.copy()
    else:
        k = np.full(space.n_points, float(kappa))
    if np.any(np.abs(k) > 1.0) or not np.all(np.isfinite(k)):
        raise DomainError("kappa values must lie in [-1, 1]")
    if np.any(p.values <= 0.0) or np.any(q.values <= 0.0):
        return DivergenceReport(math.inf, BRANCH_INFINITE)

    lp = np.log(p.values)
    lq = np.log(q.values)
    small = np.abs(k) < KAPPA_ZERO_EPS
    ksafe = np.where(small, 1.0, k)
    cosh_p = np.cosh(ksafe * lp)
    num_t = np.where(small, lp - lq,
                     (np.sinh(ksafe * lp) - np.sinh(ksafe * lq)) / (ksafe * cosh_p))
    den_t = np.where(small, u0.values, u0.values / cosh_p)
    w = space.weights
    num = weighted_sum(num_t * p.values, w)
    den = weighted_sum(den_t * p.values, w)
    return DivergenceReport(_clamp_tiny_negative(num / den), BRANCH_CLOSED_FORM)


def kl_divergence(space: MeasureSpace, p: ScalarField, q: ScalarField) -> float:
    """Kullback-Leibler divergence E[p log(p/q)]; +inf on support violation.

    Accepts nonnegative unit-mass fields (zeros allowed, unlike the
    strict density predicate); points with p(t) = 0 contribute nothing.
    """
    _require_field(space, p, "p")
    _require_field(space, q, "q")
    if np.any(p.values < 0.0) or np.any(q.values < 0.0):
        raise DomainError("KL divergence needs nonnegative densities")
    for name, d in (("p", p), ("q", q)):
        mass = weighted_sum(d.values, space.weights)
        if not (abs(mass - 1.0) <= _MASS_TOL):
            raise DomainError(f"{name} is not a probability density: mass = {mass!r}")
    terms = []
    for pi, qi, wi in zip(p.values, q.values, space.weights):
        if pi > 0.0:
            if qi <= 0.0:
                return math.inf
            terms.append(pi * math.log(pi / qi) * wi)
    return _clamp_tiny_negative(math.fsum(terms))


# ---- exponential-family cumulants ----------------------------------------------


def moment_gen(space: MeasureSpace, p: ScalarField, u: ScalarField) -> float:
    """Moment-generating value E_p[exp(u)]."""
    _require_field(space, u, "u")
    if not is_density(space, p):
        raise DomainError("p is not a probability density on this space")
    with np.errstate(over="ignore"):
        ev = np.exp(u.values)
    if not np.all(np.isfinite(ev)):
        raise PhiOverflowError("exp(u) overflowed inside the moment-generating value")
    return weighted_sum(ev * p.values, space.weights)


def cumulant(space: MeasureSpace, p: ScalarField, u: ScalarField) -> float:
    """Cumulant-generating value log E_p[exp(u)].

    On an exponential chart with u0 = 1 and p = phi(c), this equals the
    normalizing value of any centered u.
    """
    return math.log(moment_gen(space, p, u))
