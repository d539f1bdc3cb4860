import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phifam import (DomainError, ExponentialPhi, KappaConstPhi, KappaVariablePhi,
                    PhiFunction, ScalarField, StructuralError, exp_kappa,
                    exp_kappa_deriv, ln_kappa, ln_kappa_deriv, load_phi,
                    phi_from_json_obj, phi_to_json_obj, validate_phi)
from helpers import logistic, space_of, two_point_space

KAPPAS = (-1.0, -0.5, -1e-3, 1e-3, 0.5, 1.0)


def u_grid():
    # 100 points, log-spaced magnitudes up to 30, both signs
    mags = np.logspace(-3, math.log10(30.0), 50)
    return np.concatenate([-mags[::-1], mags])


# ---- exp_kappa -----------------------------------------------------------------


def test_exp_kappa_at_zero():
    for k in KAPPAS + (0.0,):
        assert exp_kappa(k, 0.0) == 1.0


def test_exp_kappa_derived_values():
    # kappa=1: 0.75 + sqrt(1.5625) = 2;  kappa=0.5: (0.75 + 1.25)^2 = 4
    assert exp_kappa(1.0, 0.75) == pytest.approx(2.0, rel=1e-14)
    assert exp_kappa(0.5, 1.5) == pytest.approx(4.0, rel=1e-14)


def test_exp_kappa_zero_kappa_is_exp():
    for u in (-3.0, 0.1, 7.0):
        assert exp_kappa(0.0, u) == math.exp(u)


def test_exp_kappa_product_identity():
    for k in KAPPAS:
        for u in u_grid():
            prod = exp_kappa(k, u) * exp_kappa(k, -u)
            assert prod == pytest.approx(1.0, rel=1e-12)


def test_exp_kappa_overflow_saturates():
    assert math.isinf(exp_kappa(0.0, 1000.0))
    assert math.isinf(exp_kappa(1e-3, 1e6))


def test_exp_kappa_rejects_bad_args():
    with pytest.raises(DomainError):
        exp_kappa(1.5, 1.0)
    with pytest.raises(DomainError):
        exp_kappa(0.5, math.inf)


# ---- ln_kappa ------------------------------------------------------------------


def test_ln_kappa_at_one():
    for k in KAPPAS + (0.0,):
        assert ln_kappa(k, 1.0) == 0.0


def test_ln_kappa_derived_values():
    # (2 - 0.5)/1 and (0.2 - 5)/2
    assert ln_kappa(0.5, 4.0) == pytest.approx(1.5, rel=1e-14)
    assert ln_kappa(1.0, 0.2) == pytest.approx(-2.4, rel=1e-14)


def test_ln_kappa_domain():
    with pytest.raises(DomainError):
        ln_kappa(0.5, 0.0)
    with pytest.raises(DomainError):
        ln_kappa(0.5, -1.0)


def test_round_trip_invariant():
    for k in KAPPAS:
        for u in u_grid():
            u_back = ln_kappa(k, exp_kappa(k, u))
            assert abs(u_back - u) <= 1e-9 * max(1.0, abs(u))


def test_kappa_to_zero_continuity():
    for u in np.linspace(-20, 20, 41):
        assert abs(exp_kappa(1e-8, u) - math.exp(u)) <= 1e-6 * math.exp(u)


def test_ln_kappa_antisymmetry():
    for k in KAPPAS:
        for y in np.logspace(-6, 6, 40):
            lk = ln_kappa(k, y)
            assert abs(lk + ln_kappa(k, 1.0 / y)) <= 1e-12 * (1.0 + abs(lk))


@settings(max_examples=60, deadline=None)
@given(k=st.sampled_from(KAPPAS), y=st.floats(1e-8, 1e8))
def test_ln_kappa_antisymmetry_hypothesis(k, y):
    lk = ln_kappa(k, y)
    assert abs(lk + ln_kappa(k, 1.0 / y)) <= 1e-12 * (1.0 + abs(lk))


def test_convexity_bound():
    # exp_kappa(k, a*u) <= a**(1/|k|) * exp_kappa(k, u) for a >= 1
    for k in (-1.0, -0.5, 0.5, 1.0):
        for a in (1.0, 1.5, 2.0, 4.0, 8.0):
            for u in np.linspace(-20, 20, 41):
                lhs = exp_kappa(k, a * u)
                rhs = a ** (1.0 / abs(k)) * exp_kappa(k, u)
                assert lhs <= rhs * (1.0 + 1e-12)


# ---- derivatives -----------------------------------------------------------------


def test_ln_kappa_deriv_values():
    assert ln_kappa_deriv(0.0, 4.0) == 0.25
    assert ln_kappa_deriv(1.0, 0.5) == pytest.approx(2.5, rel=1e-14)
    assert ln_kappa_deriv(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(DomainError):
        ln_kappa_deriv(1.0, 0.0)


def test_exp_kappa_deriv_values():
    for k in KAPPAS:
        assert exp_kappa_deriv(k, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert exp_kappa_deriv(1.0, -0.75) == pytest.approx(0.4, rel=1e-14)
    for u in (-2.0, 0.3, 5.0):
        assert exp_kappa_deriv(0.0, u) == pytest.approx(math.exp(u), rel=1e-14)


def test_exp_kappa_deriv_inverse_function_rule():
    for k in KAPPAS:
        for u in np.linspace(-10, 10, 21):
            lhs = exp_kappa_deriv(k, u)
            rhs = 1.0 / ln_kappa_deriv(k, exp_kappa(k, u))
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_exp_kappa_deriv_matches_finite_differences():
    h = 1e-6
    for k in KAPPAS:
        for u in np.linspace(-10, 10, 41):
            fd = (exp_kappa(k, u + h) - exp_kappa(k, u - h)) / (2 * h)
            assert exp_kappa_deriv(k, u) == pytest.approx(fd, rel=1e-6)


# ---- generator classes ------------------------------------------------------------


def test_kappa_const_rejects_zero_and_out_of_range():
    with pytest.raises(DomainError):
        KappaConstPhi(0.0)
    with pytest.raises(DomainError):
        KappaConstPhi(1.5)


def test_kappa_variable_floor():
    s = space_of([1.0, 1.0, 1.0])
    with pytest.raises(DomainError, match="kappa floor"):
        KappaVariablePhi(ScalarField(s, [0.5, 0.0, 0.5]))
    with pytest.raises(DomainError, match="kappa floor"):
        KappaVariablePhi(ScalarField(s, [0.5, 1e-7, 0.5]))
    phi = KappaVariablePhi(ScalarField(s, [0.5, -0.25, 1.0]))
    assert phi.kappa_min == 0.25


def test_scalar_and_array_paths_agree():
    s = space_of([1.0, 1.0, 1.0])
    phi = KappaVariablePhi(ScalarField(s, [0.5, -0.25, 1.0]))
    u = np.array([0.3, -1.2, 2.0])
    arr = phi.eval_array(u)
    for t in range(3):
        assert arr[t] == pytest.approx(phi.eval(t, u[t]), rel=1e-14)
    y = phi.eval_array(u)
    back = phi.inverse_array(y)
    assert np.allclose(back, u, rtol=1e-12, atol=1e-12)
    assert np.allclose(phi.deriv_array(u),
                       [phi.deriv(t, u[t]) for t in range(3)], rtol=1e-14)
    assert np.allclose(phi.inverse_deriv_array(y),
                       [phi.inverse_deriv(t, y[t]) for t in range(3)], rtol=1e-14)


def test_variable_kappa_point_index_checked():
    s = space_of([1.0, 1.0])
    phi = KappaVariablePhi(ScalarField(s, [0.5, 1.0]))
    with pytest.raises(StructuralError):
        phi.eval(5, 1.0)
    with pytest.raises(StructuralError):
        phi.eval_array(np.array([1.0, 2.0, 3.0]))


def test_exponential_phi_basics():
    phi = ExponentialPhi()
    assert phi.eval(0, 1.0) == math.exp(1.0)
    assert phi.inverse(0, math.e) == pytest.approx(1.0, rel=1e-15)
    assert phi.deriv(0, 2.0) == math.exp(2.0)
    assert phi.inverse_deriv(0, 4.0) == 0.25
    with pytest.raises(DomainError):
        phi.inverse(0, -1.0)
    with pytest.raises(DomainError):
        phi.inverse_array(np.array([1.0, 0.0]))


# ---- axiom validation ----------------------------------------------------------------


class _BoundedPhi(PhiFunction):
    """Logistic curve masquerading as a generator: bounded above by 1."""

    kind = "bounded_sigmoid"

    def eval(self, t, u):
        return logistic(u)

    def eval_array(self, u):
        return 1.0 / (1.0 + np.exp(-np.asarray(u, dtype=float)))


def _ones(space):
    return ScalarField.constant(space, 1.0)


def test_validate_phi_exponential_passes():
    s = two_point_space()
    c = ScalarField(s, np.log([0.5, 0.5]))
    report = validate_phi(ExponentialPhi(), s, c, _ones(s))
    assert report.passed
    assert report.failures == ()


def test_validate_phi_kappa_kinds_pass():
    s = space_of([1.0, 2.0, 0.5])
    c = ScalarField(s, [-0.5, -0.8, -0.2])
    for phi in (KappaConstPhi(0.7), KappaVariablePhi(ScalarField(s, [0.4, -0.9, 1.0]))):
        report = validate_phi(phi, s, c, _ones(s))
        assert report.passed, report.failures


def test_validate_phi_sigmoid_fails_limit_test():
    s = two_point_space()
    c = ScalarField(s, [0.0, 0.0])
    report = validate_phi(_BoundedPhi(), s, c, _ones(s))
    assert not report.passed
    assert not report.checks["(a2) limit test"]


def test_validate_phi_report_json():
    s = two_point_space()
    c = ScalarField(s, np.log([0.5, 0.5]))
    obj = validate_phi(ExponentialPhi(), s, c, _ones(s)).to_json_obj()
    assert obj["passed"] is True
    assert set(obj["checks"]) == {"(a1) monotonicity", "(a1) convexity",
                                  "(a2) limit test", "(a4) integrability"}


def test_validate_phi_grid_and_u0_preconditions():
    s = two_point_space()
    c = ScalarField(s, np.log([0.5, 0.5]))
    with pytest.raises(StructuralError):
        validate_phi(ExponentialPhi(), s, c, _ones(s), grid=[1.0, 2.0, 3.0])
    with pytest.raises(StructuralError):
        validate_phi(ExponentialPhi(), s, c, _ones(s), grid=[-1.0, 1.0])
    with pytest.raises(DomainError):
        validate_phi(ExponentialPhi(), s, c, ScalarField(s, [1.0, 0.0]))


def test_validate_phi_integrability_failure():
    # huge u0 pushes the exponential over the double range at lambda = 4
    s = two_point_space()
    c = ScalarField(s, np.log([0.5, 0.5]))
    report = validate_phi(ExponentialPhi(), s, c, ScalarField.constant(s, 300.0))
    assert not report.checks["(a4) integrability"]


# ---- serialization ----------------------------------------------------------------------


def test_phi_json_roundtrip(tmp_path):
    s = space_of([1.0, 1.0, 1.0])
    kappa = ScalarField(s, [0.5, -0.25, 1.0])
    for phi in (ExponentialPhi(), KappaConstPhi(-0.5), KappaVariablePhi(kappa)):
        obj = phi_to_json_obj(phi)
        assert phi_from_json_obj(obj, space=s) == phi

    path = tmp_path / "kappa.json"
    kappa.save_json(path)
    spec = tmp_path / "phi.json"
    spec.write_text('{"kind": "kappa_variable", "kappa_field": "kappa.json"}')
    assert load_phi(spec, space=s) == KappaVariablePhi(kappa)


def test_phi_json_errors():
    with pytest.raises(StructuralError):
        phi_from_json_obj({"kind": "mystery"})
    with pytest.raises(StructuralError):
        phi_from_json_obj({})
    with pytest.raises(StructuralError):
        phi_from_json_obj({"kind": "kappa_variable", "kappa_values": [0.5]})  # no space
