import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nuspectra.errors import InvalidParameters, PoleError
from nuspectra.potential import (
    ComplexPotentialParams,
    Convention,
    Mode,
    OutsideClosedFormDomain,
    PotentialParams,
    asymptotic_limits,
    deformed_hyperbolic,
    potential_value,
    potential_value_complex,
    pt_symmetry_check,
    warn_if_outside_domain,
)
from printed_forms import PRINTED_FORMS

depth = st.floats(min_value=-5.0, max_value=5.0)


def test_params_reject_zero_alpha_and_q():
    with pytest.raises(InvalidParameters, match="alpha != 0"):
        PotentialParams(alpha=0.0)
    with pytest.raises(InvalidParameters, match="q != 0"):
        PotentialParams(q=0.0)
    with pytest.raises(InvalidParameters):
        PotentialParams(V1=float("nan"))


def test_small_q_is_flagged_not_rejected():
    p = PotentialParams(V3=1.0, q=0.5)
    assert p.outside_closed_form_domain
    with pytest.warns(OutsideClosedFormDomain):
        warn_if_outside_domain(p)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        warn_if_outside_domain(PotentialParams(q=1.0))


def test_beta_is_depth_over_four_alpha_squared():
    p = PotentialParams(V1=4.0, V6=-8.0, alpha=2.0)
    assert p.beta == (0.25, 0.0, 0.0, 0.0, 0.0, -0.5)


@pytest.mark.parametrize(
    "kind, q, x, expected",
    [("tanh_q", 1.0, 0.0, 0.0), ("cosh_q", 3.0, 0.0, 2.0), ("sinh_q", 1.0, 0.0, 0.0)],
)
def test_deformed_examples(kind, q, x, expected):
    assert deformed_hyperbolic(kind, q, x) == pytest.approx(expected, abs=1e-15)


def test_deformed_identity_example():
    c = deformed_hyperbolic("cosh_q", 2.0, 0.7)
    s = deformed_hyperbolic("sinh_q", 2.0, 0.7)
    assert c * c - s * s == pytest.approx(2.0, rel=1e-13)


def test_deformed_q1_matches_standard():
    xs = np.random.default_rng(7).uniform(-10, 10, 1000)
    pairs = [
        ("sinh_q", np.sinh),
        ("cosh_q", np.cosh),
        ("tanh_q", np.tanh),
        ("sech_q", lambda x: 1 / np.cosh(x)),
    ]
    for kind, ref in pairs:
        np.testing.assert_allclose(deformed_hyperbolic(kind, 1.0, xs), ref(xs), rtol=1e-13, atol=1e-13)
    xs = xs[np.abs(xs) > 1e-3]
    np.testing.assert_allclose(deformed_hyperbolic("coth_q", 1.0, xs), 1 / np.tanh(xs), rtol=1e-13)
    np.testing.assert_allclose(deformed_hyperbolic("cosech_q", 1.0, xs), 1 / np.sinh(xs), rtol=1e-13)


@given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=-5.0, max_value=5.0))
def test_deformed_identity(q, x):
    c = deformed_hyperbolic("cosh_q", q, x)
    s = deformed_hyperbolic("sinh_q", q, x)
    assert c * c - s * s == pytest.approx(q, rel=1e-12, abs=1e-12 * max(1.0, c * c))


def test_deformed_poles():
    # sinh_q vanishes at x = ln(q) / 2
    with pytest.raises(PoleError):
        deformed_hyperbolic("coth_q", 4.0, math.log(4.0) / 2.0)
    with pytest.raises(ValueError):
        deformed_hyperbolic("cot_q", 1.0, 0.3)


def test_potential_printed_examples():
    assert potential_value(PotentialParams(), 0.37) == 0.0
    assert potential_value(PotentialParams(V4=3.0, V5=1.0), 50.0) == pytest.approx(2.0, abs=1e-12)
    assert potential_value(PotentialParams(V1=4.0, V2=2.0, q=2.0), -50.0) == pytest.approx(2.5, abs=1e-9)


def test_potential_matches_direct_deformed_sum():
    p = PotentialParams(V1=1.3, V2=-0.7, V3=2.1, V4=0.4, V5=0.9, V6=-1.1, q=1.6, alpha=0.8)
    xs = np.linspace(-6, 6, 101)
    u = p.alpha * xs
    e = np.exp(-2 * u)
    sech2 = deformed_hyperbolic("sech_q", p.q, u) ** 2
    tanh = deformed_hyperbolic("tanh_q", p.q, u)
    direct = (
        p.V1 * e / (1 + p.q * e)
        + p.V2 * e * e / (1 + p.q * e) ** 2
        + p.V3 * sech2
        + p.V4 * tanh
        - p.V5 * tanh**2
        + p.V6 * sech2
    )
    np.testing.assert_allclose(potential_value(p, xs), direct, rtol=1e-12, atol=1e-12)
    expanded = -p.V1 * e / (1 + p.q * e) + p.V2 * e * e / (1 + p.q * e) ** 2 - (p.V3 + p.V6) * sech2 - p.V4 * tanh + p.V5 * tanh**2
    np.testing.assert_allclose(potential_value(p, xs, Convention.EXPANDED), expanded, rtol=1e-12, atol=1e-12)
    reduced = expanded - p.V5 / (1 + p.q * e) ** 2
    np.testing.assert_allclose(potential_value(p, xs, "reduced"), reduced, rtol=1e-12, atol=1e-12)


def test_potential_far_tails_are_finite():
    p = PotentialParams(V1=1.0, V2=1.0, V3=1.0, V4=1.0, V5=1.0, V6=1.0, q=2.0, alpha=1.0)
    vals = potential_value(p, np.array([-350.0, -1e4, 1e4, 350.0]))
    assert np.all(np.isfinite(vals))


def test_asymptotic_examples():
    w = asymptotic_limits(PotentialParams())
    assert (w.v_minus, w.v_plus, w.e_max) == (0.0, 0.0, 0.0)
    w = asymptotic_limits(PotentialParams(V4=3.0, V5=1.0))
    assert (w.v_plus, w.v_minus, w.e_max) == pytest.approx((2.0, -4.0, -4.0))
    w = asymptotic_limits(PotentialParams(V1=4.0, V2=2.0, q=2.0))
    assert (w.v_minus, w.v_plus) == pytest.approx((2.5, 0.0))


@given(depth, depth, depth, depth, depth, depth, st.floats(min_value=1.0, max_value=4.0), st.floats(min_value=0.3, max_value=2.0))
def test_limits_match_far_values(v1, v2, v3, v4, v5, v6, q, alpha):
    p = PotentialParams(v1, v2, v3, v4, v5, v6, q, alpha)
    tol = 1e-8 * max(1.0, *map(abs, p.depths))
    for conv in Convention:
        w = asymptotic_limits(p, conv)
        assert potential_value(p, 40.0 / alpha, conv) == pytest.approx(w.v_plus, abs=tol)
        assert potential_value(p, -40.0 / alpha, conv) == pytest.approx(w.v_minus, abs=tol)


def test_asymptotic_negative_alpha_swaps_ends():
    p = PotentialParams(V1=4.0, q=2.0, alpha=-1.0)
    w = asymptotic_limits(p)
    assert w.v_plus == pytest.approx(2.0)
    assert potential_value(p, 40.0) == pytest.approx(2.0, abs=1e-12)


def test_complex_substitution_rules():
    p = PotentialParams(V1=1.0, V2=2.0, V3=3.0, V4=4.0, V5=5.0, V6=6.0, q=1.5, alpha=0.5)
    pt = ComplexPotentialParams.substitute(p, "PT")
    assert pt.alpha == 0.5j and pt.q == 1.5 and pt.V1 == 1.0
    npt = ComplexPotentialParams.substitute(p, Mode.NONPT)
    assert (npt.q, npt.alpha, npt.V1, npt.V3, npt.V6) == (1.5j, 0.5j, 1j, 3j, 6j)
    assert (npt.V2, npt.V4, npt.V5) == (2.0, 4.0, 5.0)
    with pytest.raises(InvalidParameters):
        ComplexPotentialParams.substitute(p, "REAL")


def test_complex_pt_example_at_origin():
    p = ComplexPotentialParams.substitute(PotentialParams(V1=1.0), "PT")
    assert potential_value_complex(p, 0.0) == pytest.approx(-0.5)


def test_complex_pole_detected():
    # q = 1 PT: e^{2 i alpha x} = -1 at x = pi / 2
    p = ComplexPotentialParams.substitute(PotentialParams(V1=1.0), "PT")
    with pytest.raises(PoleError):
        potential_value_complex(p, math.pi / 2)


@pytest.mark.parametrize("name, mode, form, keep", [f for f in PRINTED_FORMS if f[1] == "PT"], ids=lambda v: v if isinstance(v, str) else "")
def test_pt_printed_forms(name, mode, form, keep):
    rng = np.random.default_rng(11)
    for _ in range(5):
        p = PotentialParams(q=rng.uniform(1.0, 3.0), alpha=rng.uniform(0.3, 2.0), **{k: rng.uniform(-3, 3) for k in keep})
        xs = rng.uniform(-10, 10, 200)
        mine = potential_value_complex(ComplexPotentialParams.substitute(p, mode), xs)
        ref = form(p, xs)
        assert np.max(np.abs(mine - ref) / np.maximum(np.abs(ref), 1e-12)) < 1e-10


def test_nonpt_printed_forms_agree_on_v2_and_v4_terms():
    # the V2 and V4 terms of the printed non-PT forms follow from the substitution;
    # the V1, V3, V5, V6 terms do not (see the acceptance report)
    rng = np.random.default_rng(5)
    forms = {f[0]: f[2] for f in PRINTED_FORMS}
    xs = rng.uniform(-10, 10, 200)
    for name, keep in [("woods_saxon_nonpt", "V2"), ("rosen_morse_nonpt", "V4"), ("combined_nonpt", "V2"), ("combined_nonpt", "V4")]:
        p = PotentialParams(q=1.7, alpha=0.9, **{keep: 1.3})
        mine = potential_value_complex(ComplexPotentialParams.substitute(p, "NONPT"), xs)
        np.testing.assert_allclose(mine, forms[name](p, xs), rtol=1e-10)


def test_nonpt_v5_example_matches_direct_substitution():
    # V5-only non-PT potential at x = 0.3 through tanh_q with q -> iq, alpha -> i alpha
    p = PotentialParams(V5=1.0, q=1.5, alpha=1.0)
    q, a = 1.5j, 1.0j
    t = (np.exp(a * 0.3) - q * np.exp(-a * 0.3)) / (np.exp(a * 0.3) + q * np.exp(-a * 0.3))
    assert potential_value_complex(ComplexPotentialParams.substitute(p, "NONPT"), 0.3) == pytest.approx(t * t, rel=1e-12)


@given(depth, depth, depth, depth, depth, depth, st.floats(min_value=1.0, max_value=3.0), st.floats(min_value=0.3, max_value=2.0))
def test_pt_mode_is_pt_symmetric(v1, v2, v3, v4, v5, v6, q, alpha):
    p = ComplexPotentialParams.substitute(PotentialParams(v1, v2, v3, v4, v5, v6, q + 0.05, alpha), "PT")
    xs = np.linspace(-3.0, 3.0, 64)
    assert pt_symmetry_check(p, xs, tol=1e-12 * max(1.0, *map(abs, (v1, v2, v3, v4, v5, v6))))


def test_nonpt_with_v1_breaks_pt_symmetry():
    p = ComplexPotentialParams.substitute(PotentialParams(V1=1.0, q=1.5), "NONPT")
    assert not pt_symmetry_check(p, np.linspace(-3, 3, 64))


def test_zero_potential_is_pt_symmetric_in_every_mode():
    xs = np.linspace(-2, 2, 33)
    assert pt_symmetry_check(PotentialParams(), xs)
    for mode in ("PT", "NONPT"):
        assert pt_symmetry_check(ComplexPotentialParams.substitute(PotentialParams(q=1.5), mode), xs)
    with pytest.raises(ValueError):
        pt_symmetry_check(PotentialParams(), [])
