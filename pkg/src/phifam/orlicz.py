"""Musielak-Orlicz modular, Luxemburg and Orlicz norms, Fenchel conjugate.

Everything is built on the shifted gauge

    Gauge(t, u) = phi(t, c(t) + u) - phi(t, c(t)),

which is zero at u = 0 and inherits convexity and monotonicity on
[0, inf) from the generator. The modular integrates the gauge at |u(t)|;
the Luxemburg norm is the scaling that brings the modular to one; the
Orlicz norm is computed through the Amemiya infimum

    ||u||' = inf_{k > 0} (1 + modular(k*u)) / k,

a 1-D unimodal minimization that agrees with the dual-sup definition and
always satisfies  luxemburg <= orlicz <= 2 * luxemburg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PhiOverflowError, SolverError, StructuralError
from .measure import MeasureSpace, ScalarField, _require_field, weighted_sum
from .phi import ExponentialPhi, PhiFunction
from .solvers import bisect_decreasing, ternary_min

_EXPANSION_CAP = 2.0 ** 40


@dataclass(frozen=True, eq=False)
class MusielakOrliczFunction:
    """The per-point gauge Gauge(t, u) = phi(t, c(t)+u) - phi(t, c(t))."""

    space: MeasureSpace
    phi: PhiFunction
    c: ScalarField

    def __post_init__(self):
        _require_field(self.space, self.c, "c")
        base = self.phi.eval_array(self.c.values)
        if not np.all(np.isfinite(base)):
            raise PhiOverflowError("phi(c) is not finite everywhere")
        base = base.copy()
        base.setflags(write=False)
        object.__setattr__(self, "_phi_at_c", base)

    @property
    def phi_at_c(self) -> np.ndarray:
        return self._phi_at_c

    def __call__(self, t: int, u: float) -> float:
        """Gauge value at one point; may return the +inf sentinel."""
        if not (u >= 0.0):
            raise DomainError(f"the gauge is defined for u >= 0, got {u!r}")
        return self.phi.eval(t, float(self.c.values[int(t)]) + float(u)) - float(self._phi_at_c[int(t)])

    def gauge_array(self, u_abs: np.ndarray) -> np.ndarray:
        return self.phi.eval_array(self.c.values + u_abs) - self._phi_at_c


def _modular_or_inf(mof: MusielakOrliczFunction, values: np.ndarray) -> float:
    return weighted_sum(mof.gauge_array(np.abs(values)), mof.space.weights)


def modular(mof: MusielakOrliczFunction, u: ScalarField) -> float:
    """Integral of the gauge at |u|; zero iff u is identically zero."""
    _require_field(mof.space, u, "u")
    out = _modular_or_inf(mof, u.values)
    if not math.isfinite(out):
        raise PhiOverflowError("modular overflowed: generator saturated at some point")
    return out


def luxemburg_norm(mof: MusielakOrliczFunction, u: ScalarField, *,
                   tol: float = 1e-12, max_iter: int = 200) -> float:
    """inf{lam > 0 : modular(u/lam) <= 1}, by bracket doubling plus bisection."""
    _require_field(mof.space, u, "u")
    if not np.any(u.values != 0.0):
        return 0.0

    def I(lam: float) -> float:
        return _modular_or_inf(mof, u.values / lam)

    i1 = I(1.0)
    if abs(i1 - 1.0) <= tol:
        return 1.0
    if i1 > 1.0:
        lo, hi = 1.0, 2.0
        while I(hi) > 1.0:
            lo, hi = hi, 2.0 * hi
            if hi > _EXPANSION_CAP:
                raise SolverError("no Luxemburg bracket found (values overflow-scale)",
                                  bracket=(lo, hi))
    else:
        lo, hi = 0.5, 1.0
        while I(lo) < 1.0:
            lo, hi = 0.5 * lo, lo
            if lo < 1.0 / _EXPANSION_CAP:
                raise SolverError("no Luxemburg bracket found (field is degenerate)",
                                  bracket=(lo, hi))
    return bisect_decreasing(I, lo, hi, target=1.0, tol=tol, max_iter=max_iter).value


def fenchel_conjugate(mof: MusielakOrliczFunction, t: int, v: float) -> float:
    """Pointwise conjugate gauge: sup_{u >= 0} (u*v - Gauge(t, u)).

    Closed form for the exponential generator (with w = phi(t, c(t)):
    v*log(v/w) - v + w for v >= w, else 0); ternary-search supremum on a
    doubling bracket otherwise.
    """
    if not (v >= 0.0):
        raise DomainError(f"the conjugate is defined for v >= 0, got {v!r}")
    v = float(v)
    if v == 0.0:
        return 0.0
    if isinstance(mof.phi, ExponentialPhi):
        w = float(mof.phi_at_c[int(t)])
        if v <= w:
            return 0.0
        return v * math.log(v / w) - v + w
    return fenchel_conjugate_numeric(mof, t, v)


def fenchel_conjugate_numeric(mof: MusielakOrliczFunction, t: int, v: float) -> float:
    """Generic supremum used for non-exponential generators (and as an oracle)."""
    def g(u: float) -> float:
        gauge = mof(t, u)
        return -math.inf if math.isinf(gauge) else u * v - gauge

    hi = 1.0
    while g(2.0 * hi) >= g(hi):
        hi *= 2.0
        if hi > 2.0 ** 60:
            # linear growth beat the gauge; cannot happen for an (a2)-valid generator
            return math.inf
    res = ternary_min(lambda u: -g(u), 0.0, 2.0 * hi, tol=1e-12)
    return max(0.0, -res.f_value)


def conjugate_modular(mof: MusielakOrliczFunction, v: ScalarField) -> float:
    """Integral of the conjugate gauge at |v|; used by the dual-sup oracle."""
    _require_field(mof.space, v, "v")
    terms = [fenchel_conjugate(mof, t, abs(float(x))) for t, x in enumerate(v.values)]
    if any(math.isinf(x) for x in terms):
        return math.inf
    return weighted_sum(np.asarray(terms), mof.space.weights)


def orlicz_norm(mof: MusielakOrliczFunction, u: ScalarField, *,
                tol: float = 1e-12, max_iter: int = 500) -> float:
    """Amemiya form inf_{k>0} (1 + modular(k*u)) / k."""
    _require_field(mof.space, u, "u")
    if not np.any(u.values != 0.0):
        return 0.0

    def h(k: float) -> float:
        return (1.0 + _modular_or_inf(mof, k * u.values)) / k

    a, b, c = 0.5, 1.0, 2.0
    fa, fb, fc = h(a), h(b), h(c)
    while fa < fb:
        b, c, fb, fc = a, b, fa, fb
        a *= 0.5
        if a < 1.0 / _EXPANSION_CAP:
            raise SolverError("Amemiya bracket ran away toward k = 0", bracket=(a, c))
        fa = h(a)
    while fc < fb:
        a, b, fa, fb = b, c, fb, fc
        c *= 2.0
        if c > _EXPANSION_CAP:
            raise SolverError("Amemiya bracket ran away toward k = inf", bracket=(a, c))
        fc = h(c)
    res = ternary_min(h, a, c, tol=tol, max_iter=max_iter)
    return res.f_value
