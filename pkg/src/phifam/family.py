"""Charts for deformed-exponential families: centering, normalization, transitions.

A chart is the coordinate system of one family: a generator ``phi``, an
origin field ``c`` with ``phi(c)`` a probability density, and a positive
scale direction ``u0``. Coordinates are fields ``u`` centered against
the generator's slope at the origin,

    E[u * phi'(c)] = 0,

and the parametrization sends a centered ``u`` to the density

    phi(c + u - psi(u) * u0),

where the normalizing value ``psi(u)`` is the unique scalar making the
right-hand side integrate to one. ``J(psi) = E[phi(c + u - psi*u0)]`` is
strictly decreasing in ``psi``, so ``psi(u)`` is found by doubling the
failing bracket end and bisecting until ``|J - 1| <= tol``. On centered
coordinates ``psi`` is convex and nonnegative.

The transition map between two charts sharing the same space, generator
and scale direction is the affine re-centering

    w  |->  center_2(c_1 - c_2 + w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, SolverError, StructuralError
from .measure import (MeasureSpace, ScalarField, _read_json, _require_field,
                      field_from_spec, is_density, space_from_spec, weighted_sum)
from .phi import KappaVariablePhi, PhiFunction, phi_from_json_obj, validate_phi

_EXPANSION_CAP = 2.0 ** 40


@dataclass(frozen=True, eq=False)
class Chart:
    """Immutable chart data; build through :func:`make_chart`."""

    space: MeasureSpace
    phi: PhiFunction
    c: ScalarField
    u0: ScalarField
    deriv_at_c: ScalarField
    u0_mass: float  # E[u0 * phi'(c)], strictly positive

    def __eq__(self, other) -> bool:
        if other is self:
            return True
        if not isinstance(other, Chart):
            return NotImplemented
        return (self.space == other.space and self.phi == other.phi
                and self.c == other.c and self.u0 == other.u0)

    def __repr__(self) -> str:
        return f"Chart(kind={self.phi.kind!r}, n={self.space.n_points})"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A coordinate field known to be centered on its chart."""

    chart: Chart
    u: ScalarField

    def __post_init__(self):
        _require_field(self.chart.space, self.u, "u")
        resid = weighted_sum(self.u.values * self.chart.deriv_at_c.values,
                             self.chart.space.weights)
        if abs(resid) > 1e-10 * (1.0 + self.u.sup_norm()):
            raise DomainError(
                f"field is not centered on this chart: E[u*phi'(c)] = {resid:.3e}")

    @classmethod
    def zeros(cls, chart: Chart) -> "TangentVector":
        return cls(chart, ScalarField.zeros(chart.space))

    def sup_norm(self) -> float:
        return self.u.sup_norm()

    def _same_chart(self, other: "TangentVector") -> None:
        if not (other.chart is self.chart or other.chart == self.chart):
            raise StructuralError("tangent vectors belong to different charts")

    def __add__(self, other: "TangentVector") -> "TangentVector":
        self._same_chart(other)
        return TangentVector(self.chart, self.u + other.u)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        self._same_chart(other)
        return TangentVector(self.chart, self.u - other.u)

    def __mul__(self, scalar) -> "TangentVector":
        return TangentVector(self.chart, self.u * float(scalar))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TangentVector):
            return NotImplemented
        return self.chart == other.chart and self.u == other.u


def make_chart(space: MeasureSpace, phi: PhiFunction, c: ScalarField,
               u0: ScalarField | None = None, *, density_tol: float = 1e-10,
               grid=None) -> Chart:
    """Validate the axioms and normalization, then assemble a chart.

    u0 defaults to the constant field 1. Raises DomainError when an
    axiom check fails, phi(c) is not a unit-mass density within
    density_tol, or u0 is not strictly positive.
    """
    _require_field(space, c, "c")
    if u0 is None:
        u0 = ScalarField.constant(space, 1.0)
    _require_field(space, u0, "u0")
    if np.any(u0.values <= 0.0):
        raise DomainError("u0 must be strictly positive pointwise")
    if isinstance(phi, KappaVariablePhi) and not (
            phi.kappa.space is space or phi.kappa.space == space):
        raise StructuralError("variable-kappa generator lives on a different space")

    report = validate_phi(phi, space, c, u0, grid=grid)
    if not report.passed:
        raise DomainError("generator axiom check failed: "
                          + ", ".join(f"{name} failed" for name in report.failures))

    pc = phi.eval_array(c.values)
    mass = weighted_sum(pc, space.weights)
    if not (abs(mass - 1.0) <= density_tol):
        raise DomainError(f"phi(c) is not a probability density: E[phi(c)] = {mass!r}")

    deriv = phi.deriv_array(c.values)
    if not np.all(np.isfinite(deriv)):
        raise DomainError("phi'(c) is not finite everywhere")
    deriv_at_c = ScalarField(space, deriv)
    u0_mass = weighted_sum(u0.values * deriv, space.weights)
    if not (u0_mass > 0.0):
        raise DomainError(f"E[u0 * phi'(c)] = {u0_mass!r} must be positive")
    return Chart(space, phi, c, u0, deriv_at_c, u0_mass)


def center(chart: Chart, v: ScalarField) -> TangentVector:
    """Project v onto the centered subspace along the u0 direction."""
    _require_field(chart.space, v, "v")
    alpha = weighted_sum(v.values * chart.deriv_at_c.values,
                         chart.space.weights) / chart.u0_mass
    return TangentVector(chart, v - alpha * chart.u0)


@dataclass(frozen=True)
class PsiSolve:
    """Normalizing value plus solver diagnostics."""

    value: float
    iterations: int
    expansions: int
    bracket: tuple[float, float]


def _as_tangent(chart: Chart, u: TangentVector) -> TangentVector:
    if not isinstance(u, TangentVector):
        raise StructuralError("expected a TangentVector; build one with center()")
    if not (u.chart is chart or u.chart == chart):
        raise StructuralError("tangent vector belongs to a different chart")
    return u


def normalizer_detail(chart: Chart, u: TangentVector, *, tol: float = 1e-12,
                      max_iter: int = 200) -> PsiSolve:
    """Solve E[phi(c + u - psi*u0)] = 1 for psi, with diagnostics."""
    uu = _as_tangent(chart, u)
    base = chart.c.values + uu.u.values
    u0v = chart.u0.values
    w = chart.space.weights
    phi = chart.phi

    def J(psi: float) -> float:
        return weighted_sum(phi.eval_array(base - psi * u0v), w)

    j0 = J(0.0)
    if abs(j0 - 1.0) <= tol:
        return PsiSolve(0.0, 0, 0, (0.0, 0.0))

    expansions = 0
    if j0 > 1.0:
        lo, hi = 0.0, 1.0
        while J(hi) > 1.0:
            lo, hi = hi, 2.0 * hi
            expansions += 1
            if hi > _EXPANSION_CAP:
                raise SolverError("no normalization bracket found (overflow-scale inputs)",
                                  bracket=(lo, hi))
    else:
        # centered u gives J(0) >= 1 in exact arithmetic; allow a tiny negative root
        lo, hi = -1.0, 0.0
        while J(lo) < 1.0:
            lo, hi = 2.0 * lo, lo
            expansions += 1
            if lo < -_EXPANSION_CAP:
                raise SolverError("no normalization bracket found (overflow-scale inputs)",
                                  bracket=(lo, hi))
    res = _bisect(J, lo, hi, tol, max_iter)
    return PsiSolve(res[0], res[1], expansions, res[2])


def _bisect(J, lo, hi, tol, max_iter):
    from .solvers import bisect_decreasing
    r = bisect_decreasing(J, lo, hi, target=1.0, tol=tol, max_iter=max_iter)
    return r.value, r.iterations, r.bracket


def normalizer(chart: Chart, u: TangentVector, *, tol: float = 1e-12) -> float:
    """The normalizing value psi(u); nonnegative (up to tol) on centered u."""
    return normalizer_detail(chart, u, tol=tol).value


def parametrize(chart: Chart, u: TangentVector, *, tol: float = 1e-12) -> ScalarField:
    """Map centered coordinates to the density phi(c + u - psi(u)*u0)."""
    uu = _as_tangent(chart, u)
    psi = normalizer(chart, uu, tol=tol)
    vals = chart.phi.eval_array(chart.c.values + uu.u.values - psi * chart.u0.values)
    out = ScalarField(chart.space, vals)
    if not is_density(chart.space, out, 1e-9):
        raise SolverError("normalization did not produce a density (check inputs)")
    return out


def chart_inverse(chart: Chart, q: ScalarField, *, density_tol: float = 1e-8) -> TangentVector:
    """Coordinates of a strictly positive density q under this chart."""
    _require_field(chart.space, q, "q")
    if np.any(q.values <= 0.0):
        raise DomainError("q lies outside the family: it has non-positive entries")
    mass = weighted_sum(q.values, chart.space.weights)
    if not (abs(mass - 1.0) <= density_tol):
        raise DomainError(f"q is not a probability density: E[q] = {mass!r}")
    raw = ScalarField(chart.space, chart.phi.inverse_array(q.values) - chart.c.values)
    return center(chart, raw)


def transition(chart1: Chart, chart2: Chart, w: TangentVector) -> TangentVector:
    """Re-express chart1 coordinates w in chart2.

    Both charts must share the space, the generator, and the scale
    direction u0 (the affine formula is only valid for a common u0).
    """
    ww = _as_tangent(chart1, w)
    if not (chart1.space is chart2.space or chart1.space == chart2.space):
        raise StructuralError("charts live on different measure spaces")
    if chart1.phi != chart2.phi:
        raise StructuralError("charts use different generators")
    if not np.array_equal(chart1.u0.values, chart2.u0.values):
        raise StructuralError("charts use different scale directions u0")
    if chart1 == chart2:
        return TangentVector(chart2, ww.u)
    shifted = chart1.c - chart2.c + ww.u
    return center(chart2, shifted)


def load_chart(path: str | Path) -> Chart:
    """Build a chart from a JSON spec with inline or file-referenced fields.

    Schema: {"phi": {...}|path, "space": {...}|path, "c": spec, "u0": spec},
    where a field spec is an inline {"values": [...]}, a file path, or
    "const:X". u0 defaults to the constant 1. Relative paths resolve
    against the chart file's directory.
    """
    p = Path(path)
    obj = _read_json(p)
    base = p.parent
    for key in ("space", "c"):
        if key not in obj:
            raise StructuralError(f"chart JSON is missing key '{key}'")
    space = space_from_spec(obj["space"], base)
    phi_spec = obj.get("phi")
    if phi_spec is None:
        raise StructuralError("chart JSON is missing key 'phi'")
    if isinstance(phi_spec, str):
        phi = phi_from_json_obj(_read_json(base / phi_spec), space=space, base_dir=base)
    else:
        phi = phi_from_json_obj(phi_spec, space=space, base_dir=base)
    c = field_from_spec(obj["c"], space, base)
    u0 = None
    if "u0" in obj and obj["u0"] is not None:
        u0 = field_from_spec(obj["u0"], space, base)
    return make_chart(space, phi, c, u0)
