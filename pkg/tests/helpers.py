"""Shared builders for randomized test cases."""

import math

import numpy as np

from phifam import (Chart, ExponentialPhi, KappaConstPhi, KappaVariablePhi,
                    MeasureSpace, PhiFunction, ScalarField, TangentVector,
                    center, make_chart, weighted_sum)


def space_of(weights, ids=None) -> MeasureSpace:
    n = len(weights)
    return MeasureSpace(tuple(ids) if ids else tuple(str(i) for i in range(n)), weights)


def two_point_space() -> MeasureSpace:
    return space_of([1.0, 1.0])


def random_space(rng: np.random.Generator, n: int | None = None) -> MeasureSpace:
    if n is None:
        n = int(rng.integers(2, 17))
    return space_of(rng.uniform(0.25, 2.0, size=n))


def random_density(rng: np.random.Generator, space: MeasureSpace) -> ScalarField:
    x = rng.uniform(0.05, 1.0, size=space.n_points)
    return ScalarField(space, x / weighted_sum(x, space.weights))


def random_field(rng: np.random.Generator, space: MeasureSpace,
                 scale: float = 1.0) -> ScalarField:
    return ScalarField(space, rng.uniform(-scale, scale, size=space.n_points))


def random_positive_field(rng: np.random.Generator, space: MeasureSpace,
                          lo: float = 0.5, hi: float = 1.5) -> ScalarField:
    return ScalarField(space, rng.uniform(lo, hi, size=space.n_points))


def random_kappa_field(rng: np.random.Generator, space: MeasureSpace) -> ScalarField:
    mags = rng.uniform(0.3, 1.0, size=space.n_points)
    signs = rng.choice([-1.0, 1.0], size=space.n_points)
    return ScalarField(space, mags * signs)


def chart_at_density(space: MeasureSpace, phi: PhiFunction, p: ScalarField,
                     u0: ScalarField | None = None) -> Chart:
    c = ScalarField(space, phi.inverse_array(p.values))
    return make_chart(space, phi, c, u0)


def random_chart(rng: np.random.Generator, space: MeasureSpace, phi: PhiFunction,
                 u0: ScalarField | None = None) -> Chart:
    return chart_at_density(space, phi, random_density(rng, space), u0)


def random_centered(rng: np.random.Generator, chart: Chart,
                    scale: float = 1.0) -> TangentVector:
    return center(chart, random_field(rng, chart.space, scale))


def exp_half_chart() -> Chart:
    """Two unit-weight points, exponential generator, origin density (1/2, 1/2)."""
    s = two_point_space()
    return make_chart(s, ExponentialPhi(), ScalarField(s, np.log([0.5, 0.5])))


def kappa1_half_chart() -> Chart:
    """Two unit-weight points, kappa = 1, origin density (1/2, 1/2)."""
    s = two_point_space()
    return make_chart(s, KappaConstPhi(1.0), ScalarField(s, [-0.75, -0.75]))


def phi_kinds_for(rng: np.random.Generator, space: MeasureSpace) -> list[PhiFunction]:
    """One generator of each kind, suitable for the given space."""
    return [ExponentialPhi(), KappaConstPhi(0.5), KappaVariablePhi(random_kappa_field(rng, space))]


def sup_diff(a: ScalarField, b: ScalarField) -> float:
    return float(np.max(np.abs(a.values - b.values)))


def logistic(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))
