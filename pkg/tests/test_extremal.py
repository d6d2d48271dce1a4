import math

import numpy as np
import pytest

from cyclic_concurrence import extremal as ex
from cyclic_concurrence.csx import BRANCH_FUNCTIONS
from cyclic_concurrence.extremal import BRANCHES

T1_4 = (2 * math.sqrt(2) - 1) / 4
PAIRS = [("1nu", "2mu"), ("1mu", "2nu"), ("1nu", "2nu"), ("1mu", "2mu")]


@pytest.fixture(scope="module")
def curves4():
    return ex.region_curves(4, 256)


@pytest.fixture(scope="module")
def curves5():
    return ex.region_curves(5, 256)


def test_reduce_domain_shapes():
    r = ex.reduce_domain(4, ("1nu", "2mu"))
    assert r.constraint == "d = 0" and r.angle_names == ("theta", "phi")
    np.testing.assert_allclose(r.coefficients(0.3, 0.4)[2], 0.0)
    r = ex.reduce_domain(4, "1mu,2mu")
    assert r.ndim == 1
    np.testing.assert_allclose(r.coefficients(0.0), [0, 1, 0, 0])
    r = ex.reduce_domain(5, ("1mu", "2mu"))
    assert r.constraint == "a = 0" and r.ndim == 2
    assert ex.reduce_domain(5, ("1nu", "2nu")).ndim == 3


@pytest.mark.parametrize("pair", [("2mu", "1nu"), ("1mu",), "1xi,2mu"])
def test_reduce_domain_unknown_pair(pair):
    with pytest.raises(ValueError):
        ex.reduce_domain(4, pair)


def test_reduce_domain_unknown_n():
    with pytest.raises(ValueError):
        ex.reduce_domain(6, ("1mu", "2mu"))


@pytest.mark.parametrize("n,pair", [(4, p) for p in PAIRS] + [(5, ("1mu", "2mu"))])
def test_parametrizations_stay_on_unit_sphere(n, pair):
    red = ex.reduce_domain(n, pair)
    angles = np.random.default_rng(3).uniform(0, math.pi / 2, size=(100, red.ndim))
    x = red.coefficients(*angles.T)
    np.testing.assert_allclose(np.linalg.norm(x, axis=-1), 1.0, atol=1e-15)
    assert np.all(x >= 0)


def _real_states(count, seed=11):
    x = np.abs(np.random.default_rng(seed).normal(size=(count, 4)))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _pair_values(n, x, pair):
    cols = [BRANCHES.index(b) for b in pair]
    return BRANCH_FUNCTIONS[n](*x.T)[:, cols]


@pytest.mark.parametrize(
    "pair,branches",
    [(("1nu", "2mu"), ("1nu", "2mu")), (("1nu", "2nu"), ("1nu", "2nu")), (("1mu", "2nu"), ("2nu",))],
)
def test_reductions_never_lower_named_branches(pair, branches):
    red = ex.reduce_domain(4, pair)
    x = _real_states(10_000)
    before = _pair_values(4, x, branches)
    assert np.all(_pair_values(4, red.apply(x), branches) >= before - 1e-12)


@pytest.mark.parametrize("n,pair", [(4, ("1mu", "2mu")), (5, ("1mu", "2mu"))])
def test_zeroing_reductions_before_renormalization(n, pair):
    x = _real_states(10_000)
    zeroed = x.copy()
    zeroed[:, 0] = 0.0
    if n == 4:
        zeroed[:, 3] = 0.0
    before = _pair_values(n, x, pair)
    assert np.all(_pair_values(n, zeroed, pair) >= before - 1e-12)
    # renormalizing only shrinks negative values further
    after = _pair_values(n, ex.reduce_domain(n, pair).apply(x), pair)
    keep = before >= 0
    assert np.all(after[keep] >= before[keep] - 1e-12)


def test_equal_a_f_lowers_the_mu_branch():
    red = ex.reduce_domain(4, ("1mu", "2nu"))
    x = np.array([[0.6, 0.3, 0.7, 0.0]])
    x /= np.linalg.norm(x)
    assert _pair_values(4, red.apply(x), ("1mu",))[0, 0] < _pair_values(4, x, ("1mu",))[0, 0] - 0.1


def test_unreduced_pair_images_stay_inside_envelope(curves4):
    env = ex.envelope(curves4)
    x = _real_states(50_000, seed=4)
    for pair in PAIRS:
        s = _pair_values(4, x, pair)
        assert np.all(env.contains(s[:, 0], s[:, 1], tol=1e-9))


def test_branch_pair_map_examples():
    assert ex.branch_pair_map(4, ("1mu", "2mu"), 0.0) == pytest.approx((-0.5, 1.0))
    assert ex.branch_pair_map(4, ("1nu", "2mu"), (math.pi / 2, math.pi / 4)) == pytest.approx((0.0, -1.0))
    s1, s2 = ex.branch_pair_map(5, ("1mu", "2mu"), (math.pi / 2, math.pi / 4))
    assert s1 == pytest.approx(s2, abs=1e-15)


def test_branch_pair_map_validates_angles():
    with pytest.raises(ValueError):
        ex.branch_pair_map(4, ("1nu", "2mu"), (2.0, 0.1))
    with pytest.raises(ValueError):
        ex.branch_pair_map(4, ("1nu", "2mu"), (0.1,))


def test_jacobian_det_one_angle_map_raises():
    with pytest.raises(ValueError, match="two-angle"):
        ex.jacobian_det(4, ("1mu", "2mu"), 0.3)


def test_jacobian_det_vanishes_on_symmetry_fold():
    # phi -> pi/2 - phi swaps a and f, which leaves both branches unchanged
    for theta in (0.4, 0.8, 1.2):
        assert ex.jacobian_det(4, ("1nu", "2mu"), (theta, math.pi / 4)) == pytest.approx(0.0, abs=1e-8)


def test_jacobian_det_richardson():
    point = (0.7, 0.3)
    d = [ex.jacobian_det(4, ("1nu", "2mu"), point, h=h) for h in (4e-3, 2e-3, 1e-3)]
    ratio = (d[0] - d[1]) / (d[1] - d[2])
    assert ratio == pytest.approx(4.0, rel=0.05)


def test_jacobian_sign_change_brackets_a_fold(curves4):
    red = ex.reduce_domain(4, ("1nu", "2mu"))
    theta = np.linspace(0.05, 1.5, 400)
    det = ex._jacobian_field(red, np.full_like(theta, 0.3), theta)
    flips = np.nonzero(np.sign(det[:-1]) != np.sign(det[1:]))[0]
    assert flips.size >= 1
    # the fold passes through the bracket, so a traced fold curve lies nearby in angle space
    folds = [c for c in curves4 if c.source == "jacobian-zero" and "1nu,2mu" in c.parametrization_id]
    pts = np.concatenate([c.angles for c in folds])
    i = flips[0]
    mid = np.array([0.3, 0.5 * (theta[i] + theta[i + 1])])
    assert np.min(np.linalg.norm(pts - mid, axis=1)) < 0.02


def test_trace_boundary_five_qubit_edges():
    curves = ex.trace_boundary(5, ("1mu", "2mu"), 128)
    ids = {c.parametrization_id for c in curves}
    for edge in ("theta=pi/2", "phi=0", "phi=pi/2"):
        assert f"n5:1mu,2mu:{edge}" in ids


def test_trace_boundary_one_angle_map():
    curves = ex.trace_boundary(4, ("1mu", "2mu"), 64)
    assert len(curves) == 1
    c = curves[0]
    assert c.points[0] == pytest.approx((-0.5, 1.0))
    assert c.angles[-1, 0] == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("resolution", [64, 200])
def test_trace_boundary_step_bound(resolution):
    for c in ex.trace_boundary(4, ("1nu", "2mu"), resolution):
        assert c.max_step() <= 0.25 / resolution + 1e-15
        assert np.all(np.isfinite(c.points))


def test_trace_boundary_errors():
    with pytest.raises(ValueError, match="at least 64"):
        ex.trace_boundary(4, ("1nu", "2mu"), 32)
    with pytest.raises(ValueError, match="linear_bounds_5q"):
        ex.trace_boundary(5, ("1nu", "2nu"), 64)


def test_envelope_of_single_decreasing_curve_is_that_curve():
    x = np.linspace(-0.9, 0.9, 3001)
    curve = ex.BoundaryCurve("closed-form", np.column_stack([x, 0.5 - x**3]), "test")
    env = ex.envelope([curve])
    probe = np.linspace(-0.85, 0.85, 50)
    # binned values sit at most one bin width (times the slope) above the curve
    assert np.all(env.upper_at(probe) >= 0.5 - probe**3 - 1e-9)
    assert np.all(env.upper_at(probe) <= 0.5 - probe**3 + 3 * 0.81 * 0.002)
    np.testing.assert_allclose(env.profile(probe), 0.5 - probe**3, atol=1e-6)


def test_envelope_requires_curves():
    with pytest.raises(ValueError):
        ex.envelope([])


def test_envelope_contains_sampled_images(curves4):
    env = ex.envelope(curves4)
    rng = np.random.default_rng(5)
    for pair in PAIRS:
        red = ex.reduce_domain(4, pair)
        pts = red.values(*rng.uniform(0, math.pi / 2, size=(red.ndim, 20_000)))
        assert np.all(env.contains(pts[:, 0], pts[:, 1], tol=1e-6))
    assert not env.contains(0.3, 0.9)


def test_envelope_at_zero_five_qubits(curves5):
    assert ex.envelope(curves5).upper_at(0.0) == pytest.approx(0.418, abs=1e-3)


def test_boundary_curve_validation():
    with pytest.raises(ValueError):
        ex.BoundaryCurve("guess", np.zeros((2, 2)), "x")
    with pytest.raises(ValueError):
        ex.BoundaryCurve("domain-edge", [[0.0, np.nan]], "x")


def test_curves_csv_header(curves5):
    text = ex.curves_to_csv(curves5[:1])
    assert text.splitlines()[0] == "s1,s2,source,param_id"
    assert len(text.splitlines()) == len(curves5[0]) + 1


def test_eq49_examples():
    assert ex.eq49_bound(T1_4) == pytest.approx(0.0, abs=1e-9)
    assert ex.eq49_bound(0.5) == pytest.approx(-1 / 3, abs=1e-15)
    assert ex.eq49_bound(-0.5) == pytest.approx(0.4 * (8 + 0.5 + 1))
    assert ex.eq49_bound(0.0) == pytest.approx(3.6)
    assert ex.eq49_second_root() == pytest.approx(T1_4, abs=1e-12)


@pytest.mark.parametrize("s1", [-0.51, 0.6, np.nan])
def test_eq49_range(s1):
    with pytest.raises(ValueError):
        ex.eq49_bound(s1)


def test_eq49_second_branch_tracks_traced_boundary_near_threshold(curves4):
    env = ex.envelope(curves4)
    for s in (0.40, 0.43, 0.45):
        assert env.profile(s)[0] == pytest.approx(ex.eq49_bound(s), abs=1e-5)


def test_maximize_four_qubit_nu():
    r = ex.maximize_branch("1nu", 4)
    assert r.value == pytest.approx(0.5, abs=1e-10)
    third = 1 / math.sqrt(3)
    assert [r.coefficients[k] for k in "acdf"] == pytest.approx([third, third, 0, third], abs=1e-6)


def test_maximize_four_qubit_mu_argmax_value():
    r = ex.maximize_branch("1mu", 4)
    c = r.coefficients
    direct = BRANCH_FUNCTIONS[4](c["a"], c["c"], c["d"], c["f"])[0]
    assert r.value == pytest.approx(direct, abs=1e-14)
    assert (c["a"], c["f"]) == pytest.approx((0.0, 0.0), abs=1e-6)
    assert c["c"] == pytest.approx(1 / math.sqrt(3), abs=1e-5)


def test_maximize_five_qubit_mu():
    r = ex.maximize_branch("1mu", 5)
    assert r.value == pytest.approx(0.468, abs=1e-3)
    assert (r.coefficients["a"], r.coefficients["g"]) == pytest.approx((0, 0), abs=1e-4)


def test_maximize_rejects_unknown():
    with pytest.raises(ValueError):
        ex.maximize_branch("3mu", 4)
    with pytest.raises(ValueError):
        ex.maximize_branch("1mu", 6)


def test_monotone_refinement():
    coarse = ex.maximize_branch("1nu", 5, grid=200).value
    fine = ex.maximize_branch("1nu", 5, grid=400).value
    assert fine == pytest.approx(coarse, abs=1e-6)


def test_thresholds_four(curves4):
    t1, t2 = ex.thresholds(4, curves=curves4)
    assert (t1.spacing, t2.spacing) == (1, 2)
    assert t1.value == pytest.approx(T1_4, abs=1e-9)
    assert t2.value == pytest.approx(0.8, abs=1e-9)
    assert t1.value == pytest.approx(ex.eq49_second_root(), abs=1e-9)
    assert t1.to_dict()["method"] == "traced"


def test_thresholds_five_are_symmetric(curves5):
    t1, t2 = ex.thresholds(5, curves=curves5)
    assert t1.value == pytest.approx(t2.value, abs=1e-9)
    assert t1.value == pytest.approx(0.418, abs=1e-3)


def test_threshold_range():
    with pytest.raises(ValueError):
        ex.Threshold(4, 1, 1.2)


def test_linear_bounds_hold():
    bounds = ex.linear_bounds_5q(grid=120)
    assert len(bounds) == 5
    for b in bounds:
        assert b.holds, b.label()


def test_theorem2_unperturbed():
    r = ex.theorem2_check(0.0, 5, 1)
    assert r.max_concurrence == 0.0
    assert r.max_subconcurrence == pytest.approx(-0.5, abs=1e-14)
    with pytest.raises(ValueError):
        ex.theorem2_check(-1.0, 5)


def test_theorem2_is_deterministic():
    a = ex.theorem2_check(0.3, 50, 9)
    b = ex.theorem2_check(0.3, 50, 9)
    assert a == b


@pytest.mark.parametrize("n,k,expected", [(4, 2, 1.0), (6, 2, 2 / 3), (6, 3, 1.0)])
def test_theorem1_report(n, k, expected):
    r = ex.theorem1_report(n, k)
    assert r.residual < 1e-12
    assert r.concurrences[k] == pytest.approx(expected, abs=1e-10)
    assert all(v == 0.0 for s, v in r.concurrences.items() if s != k)


def test_csx_state_helper():
    s = ex.csx_state(5, {"c": 1.0, "d": 1.0})
    assert s.is_csx
    with pytest.raises(ValueError):
        ex.csx_state(4, {"g": 1.0})
