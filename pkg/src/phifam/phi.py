"""Generator functions for deformed exponential families.

A generator ``phi(t, .)`` plays the role the exponential plays in the
classical exponential family. Per point ``t`` it must be

  (a1) convex and strictly increasing (hence injective),
  (a2) with limits phi(t,-inf) = 0 and phi(t,+inf) = +inf,
  (a4) integrable along the scale direction: E[phi(c + lam*u0)] < inf
       for lam > 0 whenever phi(c) is a density.

(The measurability condition usually labelled (a3) is vacuous on a
finite point set.) Three generators ship here: the exact exponential,
the Kaniadakis kappa-exponential with a constant deformation, and the
variable-kappa version with one deformation value per point.

Kernel formulas, written in the cancellation-free hyperbolic form::

    exp_kappa(k, u) = exp(asinh(k*u) / k)          for k != 0
    ln_kappa(k, y)  = sinh(k * log(y)) / k
    ln_kappa'(k, y) = cosh(k * log(y)) / y
    exp_kappa'(k,u) = exp_kappa(k, u) / sqrt(1 + k^2 u^2)

``asinh(k*u) = log(k*u + sqrt(1 + k^2 u^2))``, so the first line is the
familiar power form ``(k*u + sqrt(1+k^2*u^2))**(1/k)`` without the
subtractive cancellation that form suffers for ``k*u < 0``; likewise
``sinh(k*log y)/k = (y**k - y**-k)/(2k)``. Both are even in ``k``.

Overflow policy: a scalar evaluation that exceeds the double range
saturates to ``math.inf`` (a sentinel, never a wrapped number). Any
integration downstream that meets the sentinel raises
:class:`~phifam.errors.PhiOverflowError` instead of treating it as data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar

import numpy as np

from .errors import DomainError, StructuralError
from .measure import MeasureSpace, ScalarField, field_from_spec

# |kappa| below this is dispatched to the exact exp/log limit (removes the 0/0).
KAPPA_ZERO_EPS = 1e-12
# Variable-kappa generators need min_t |kappa(t)| strictly positive; this is the
# explicit floor enforced at construction.
KAPPA_MIN_FLOOR = 1e-6

DEFAULT_VALIDATION_GRID: tuple[float, ...] = tuple(np.linspace(-8.0, 8.0, 11))

_CHECK_A1_MONO = "(a1) monotonicity"
_CHECK_A1_CONV = "(a1) convexity"
_CHECK_A2_LIMITS = "(a2) limit test"
_CHECK_A4_INTEG = "(a4) integrability"


def _check_kappa(kappa: float) -> float:
    k = float(kappa)
    if not (-1.0 <= k <= 1.0):
        raise DomainError(f"kappa must lie in [-1, 1], got {k!r}")
    return k


def exp_kappa(kappa: float, u: float) -> float:
    """Kaniadakis kappa-exponential; exp(u) at kappa = 0.

    Saturates to +inf on overflow. Satisfies exp_kappa(k,u)*exp_kappa(k,-u) = 1.
    """
    k = _check_kappa(kappa)
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"u must be finite, got {u!r}")
    if abs(k) < KAPPA_ZERO_EPS:
        t = u
    else:
        t = math.asinh(k * u) / k
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


def ln_kappa(kappa: float, y: float) -> float:
    """Kaniadakis kappa-logarithm, the inverse of :func:`exp_kappa`."""
    k = _check_kappa(kappa)
    y = float(y)
    if not (y > 0.0) or not math.isfinite(y):
        raise DomainError(f"ln_kappa needs y > 0, got {y!r}")
    if abs(k) < KAPPA_ZERO_EPS:
        return math.log(y)
    return math.sinh(k * math.log(y)) / k


def ln_kappa_deriv(kappa: float, y: float) -> float:
    """Derivative of the kappa-logarithm: (y**k + y**-k) / (2*y); 1/y at kappa = 0."""
    k = _check_kappa(kappa)
    y = float(y)
    if not (y > 0.0) or not math.isfinite(y):
        raise DomainError(f"ln_kappa_deriv needs y > 0, got {y!r}")
    if abs(k) < KAPPA_ZERO_EPS:
        return 1.0 / y
    return math.cosh(k * math.log(y)) / y


def exp_kappa_deriv(kappa: float, u: float) -> float:
    """Derivative of the kappa-exponential: exp_kappa(k,u) / sqrt(1 + k^2 u^2).

    Equals 1 / ln_kappa_deriv(k, exp_kappa(k, u)) by the inverse-function rule.
    """
    k = _check_kappa(kappa)
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"u must be finite, got {u!r}")
    return exp_kappa(k, u) / math.hypot(1.0, k * u)


def _exp_sat(t: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", under="ignore"):
        return np.exp(t)


class PhiFunction:
    """Interface every generator implements.

    Scalar entry points take a point index ``t`` (ignored by generators
    that do not vary across points) and may return the +inf saturation
    sentinel. Array entry points evaluate one value per point of the
    associated space, aligned with point order.
    """

    kind: ClassVar[str] = "abstract"

    def eval(self, t: int, u: float) -> float:
        raise NotImplementedError

    def inverse(self, t: int, y: float) -> float:
        raise NotImplementedError

    def deriv(self, t: int, u: float) -> float:
        raise NotImplementedError

    def inverse_deriv(self, t: int, y: float) -> float:
        raise NotImplementedError

    def eval_array(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse_array(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def deriv_array(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse_deriv_array(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def varies_by_point(self) -> bool:
        return False


def _require_positive(y: np.ndarray, what: str) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        raise DomainError(f"{what} requires strictly positive finite values")
    return y


@dataclass(frozen=True)
class ExponentialPhi(PhiFunction):
    """The classical exponential generator."""

    kind: ClassVar[str] = "exponential"

    def eval(self, t: int, u: float) -> float:
        try:
            return math.exp(float(u))
        except OverflowError:
            return math.inf

    def inverse(self, t: int, y: float) -> float:
        if not (y > 0.0):
            raise DomainError(f"log needs y > 0, got {y!r}")
        return math.log(float(y))

    def deriv(self, t: int, u: float) -> float:
        return self.eval(t, u)

    def inverse_deriv(self, t: int, y: float) -> float:
        if not (y > 0.0):
            raise DomainError(f"1/y needs y > 0, got {y!r}")
        return 1.0 / float(y)

    def eval_array(self, u: np.ndarray) -> np.ndarray:
        return _exp_sat(np.asarray(u, dtype=float))

    def inverse_array(self, y: np.ndarray) -> np.ndarray:
        return np.log(_require_positive(y, "log"))

    def deriv_array(self, u: np.ndarray) -> np.ndarray:
        return self.eval_array(u)

    def inverse_deriv_array(self, y: np.ndarray) -> np.ndarray:
        return 1.0 / _require_positive(y, "1/y")


@dataclass(frozen=True)
class KappaConstPhi(PhiFunction):
    """Kappa-exponential generator with one deformation for every point.

    kappa must lie in [-1, 1] and be nonzero; magnitudes below
    KAPPA_ZERO_EPS evaluate through the exact exponential limit.
    """

    kappa: float
    kind: ClassVar[str] = "kappa_const"

    def __post_init__(self):
        k = _check_kappa(self.kappa)
        if k == 0.0:
            raise DomainError("kappa_const requires kappa != 0; use the exponential kind")
        object.__setattr__(self, "kappa", k)

    def eval(self, t: int, u: float) -> float:
        return exp_kappa(self.kappa, u)

    def inverse(self, t: int, y: float) -> float:
        return ln_kappa(self.kappa, y)

    def deriv(self, t: int, u: float) -> float:
        return exp_kappa_deriv(self.kappa, u)

    def inverse_deriv(self, t: int, y: float) -> float:
        return ln_kappa_deriv(self.kappa, y)

    def eval_array(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        k = self.kappa
        if abs(k) < KAPPA_ZERO_EPS:
            return _exp_sat(u)
        return _exp_sat(np.arcsinh(k * u) / k)

    def inverse_array(self, y: np.ndarray) -> np.ndarray:
        y = _require_positive(y, "ln_kappa")
        k = self.kappa
        if abs(k) < KAPPA_ZERO_EPS:
            return np.log(y)
        return np.sinh(k * np.log(y)) / k

    def deriv_array(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.eval_array(u) / np.hypot(1.0, self.kappa * u)

    def inverse_deriv_array(self, y: np.ndarray) -> np.ndarray:
        y = _require_positive(y, "ln_kappa_deriv")
        k = self.kappa
        if abs(k) < KAPPA_ZERO_EPS:
            return 1.0 / y
        return np.cosh(k * np.log(y)) / y


@dataclass(frozen=True, eq=False)
class KappaVariablePhi(PhiFunction):
    """Kappa-exponential generator with one deformation value per point.

    Construction enforces min_t |kappa(t)| > KAPPA_MIN_FLOOR; without a
    positive floor the integrability condition (a4) has no uniform bound.
    """

    kappa: ScalarField
    kind: ClassVar[str] = "kappa_variable"

    def __post_init__(self):
        k = self.kappa.values
        if np.any(np.abs(k) > 1.0):
            raise DomainError("variable kappa values must lie in [-1, 1]")
        kmin = float(np.min(np.abs(k)))
        if kmin <= KAPPA_MIN_FLOOR:
            raise DomainError(
                f"kappa floor violated: min |kappa(t)| = {kmin:g} must exceed {KAPPA_MIN_FLOOR:g}")

    @property
    def kappa_min(self) -> float:
        return float(np.min(np.abs(self.kappa.values)))

    def varies_by_point(self) -> bool:
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, KappaVariablePhi):
            return NotImplemented
        return self.kappa == other.kappa

    def _k(self, t: int) -> float:
        n = self.kappa.space.n_points
        if not 0 <= int(t) < n:
            raise StructuralError(f"point index {t!r} out of range for {n} points")
        return float(self.kappa.values[int(t)])

    def eval(self, t: int, u: float) -> float:
        return exp_kappa(self._k(t), u)

    def inverse(self, t: int, y: float) -> float:
        return ln_kappa(self._k(t), y)

    def deriv(self, t: int, u: float) -> float:
        return exp_kappa_deriv(self._k(t), u)

    def inverse_deriv(self, t: int, y: float) -> float:
        return ln_kappa_deriv(self._k(t), y)

    def _aligned(self, x: np.ndarray, what: str) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != self.kappa.values.shape:
            raise StructuralError(f"{what}: expected one value per point")
        return x

    def eval_array(self, u: np.ndarray) -> np.ndarray:
        u = self._aligned(u, "eval_array")
        k = self.kappa.values
        return _exp_sat(np.arcsinh(k * u) / k)

    def inverse_array(self, y: np.ndarray) -> np.ndarray:
        y = _require_positive(self._aligned(y, "inverse_array"), "ln_kappa")
        k = self.kappa.values
        return np.sinh(k * np.log(y)) / k

    def deriv_array(self, u: np.ndarray) -> np.ndarray:
        u = self._aligned(u, "deriv_array")
        return self.eval_array(u) / np.hypot(1.0, self.kappa.values * u)

    def inverse_deriv_array(self, y: np.ndarray) -> np.ndarray:
        y = _require_positive(self._aligned(y, "inverse_deriv_array"), "ln_kappa_deriv")
        k = self.kappa.values
        return np.cosh(k * np.log(y)) / y


# ---- axiom validation --------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """Per-axiom pass/fail outcome of :func:`validate_phi`."""

    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.checks.items() if not ok)

    def to_json_obj(self) -> dict:
        return {"passed": self.passed, "checks": dict(self.checks)}


def validate_phi(phi: PhiFunction, space: MeasureSpace, c: ScalarField,
                 u0: ScalarField, grid=None) -> ValidationReport:
    """Check the generator axioms on a finite grid; failures go in the report.

    (a1) is strict monotonicity plus midpoint convexity over all grid
    pairs; (a2) probes growth/decay ratios between each grid extreme g
    and 4g, so it is relative to the grid's scale: the generator must at
    least double between g_max and 4*g_max and at least halve between
    g_min and 4*g_min. (a4) demands E[phi(c + lam*u0)] finite for
    lam in {1, 2, 4}. The grid must straddle zero.
    """
    from .measure import _require_field  # local import keeps module load order simple

    _require_field(space, c, "c")
    _require_field(space, u0, "u0")
    if np.any(u0.values <= 0.0):
        raise DomainError("u0 must be strictly positive pointwise")
    if isinstance(phi, KappaVariablePhi) and not (
            phi.kappa.space is space or phi.kappa.space == space):
        raise StructuralError("variable-kappa generator lives on a different space")

    xs = sorted(float(x) for x in (DEFAULT_VALIDATION_GRID if grid is None else grid))
    if len(xs) < 3:
        raise StructuralError("validation grid needs at least 3 points")
    if not all(math.isfinite(x) for x in xs):
        raise StructuralError("validation grid must be finite")
    if not (xs[0] < 0.0 < xs[-1]):
        raise StructuralError("validation grid must straddle 0")

    points = range(space.n_points) if phi.varies_by_point() else (0,)
    mono = conv = limits = True
    for t in points:
        ys = [phi.eval(t, x) for x in xs]
        if any(y <= 0.0 for y in ys) or any(b <= a for a, b in zip(ys, ys[1:])):
            mono = False
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                mid = phi.eval(t, 0.5 * (xs[i] + xs[j]))
                half_sum = 0.5 * (ys[i] + ys[j])
                if mid > half_sum + 1e-12 * (1.0 + abs(half_sum)):
                    conv = False
        lo1, lo2 = phi.eval(t, xs[0]), phi.eval(t, 4.0 * xs[0])
        hi1, hi2 = phi.eval(t, xs[-1]), phi.eval(t, 4.0 * xs[-1])
        lower_ok = lo2 == 0.0 or lo2 <= 0.5 * lo1
        upper_ok = math.isinf(hi2) or (hi1 > 0.0 and hi2 >= 2.0 * hi1)
        if not (lower_ok and upper_ok):
            limits = False

    integrable = True
    for lam in (1.0, 2.0, 4.0):
        vals = phi.eval_array(c.values + lam * u0.values)
        if not np.all(np.isfinite(vals)):
            integrable = False
            break

    return ValidationReport(checks={
        _CHECK_A1_MONO: mono,
        _CHECK_A1_CONV: conv,
        _CHECK_A2_LIMITS: limits,
        _CHECK_A4_INTEG: integrable,
    })


# ---- serialization -------------------------------------------------------------


def phi_to_json_obj(phi: PhiFunction) -> dict:
    if isinstance(phi, ExponentialPhi):
        return {"kind": "exponential"}
    if isinstance(phi, KappaConstPhi):
        return {"kind": "kappa_const", "kappa": phi.kappa}
    if isinstance(phi, KappaVariablePhi):
        return {"kind": "kappa_variable", "kappa_values": [float(k) for k in phi.kappa.values]}
    raise StructuralError(f"cannot serialize generator of kind {getattr(phi, 'kind', '?')!r}")


def phi_from_json_obj(obj: dict, space: MeasureSpace | None = None,
                      base_dir: str | Path = ".") -> PhiFunction:
    """Build a generator from its JSON spec.

    kappa_variable accepts either ``"kappa_field": "path"`` (a field file,
    resolved against base_dir) or an inline ``"kappa_values": [...]`` list;
    both need the space.
    """
    try:
        kind = obj["kind"]
    except (KeyError, TypeError) as exc:
        raise StructuralError("generator JSON needs a 'kind' key") from exc
    if kind == "exponential":
        return ExponentialPhi()
    if kind == "kappa_const":
        if "kappa" not in obj:
            raise StructuralError("kappa_const spec needs a 'kappa' value")
        return KappaConstPhi(float(obj["kappa"]))
    if kind == "kappa_variable":
        if space is None:
            raise StructuralError("kappa_variable spec needs the measure space")
        if "kappa_field" in obj:
            kappa = field_from_spec(obj["kappa_field"], space, base_dir)
        elif "kappa_values" in obj:
            kappa = ScalarField(space, obj["kappa_values"])
        else:
            raise StructuralError("kappa_variable spec needs 'kappa_field' or 'kappa_values'")
        return KappaVariablePhi(kappa)
    raise StructuralError(f"unknown generator kind {kind!r}")


def load_phi(path: str | Path, space: MeasureSpace | None = None) -> PhiFunction:
    from .measure import _read_json
    p = Path(path)
    return phi_from_json_obj(_read_json(p), space=space, base_dir=p.parent)
