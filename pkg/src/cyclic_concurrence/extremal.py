"""Extremes of CSX subconcurrences: branch maxima, achievable-region boundaries, thresholds.

The spacing-1 and spacing-2 subconcurrences of a CSX state are each the
larger of two branch expressions (``mu`` and ``nu``).  The achievable region
of ``(sC1, sC2)`` is therefore the union over four branch pairings of the
image of the unit sphere under a pair of branch maps.  For each pairing a
reduction fixes some coefficients, leaving a one- or two-angle spherical
parametrization (see :class:`Reduction` for what each reduction preserves).  The image boundary of a smooth
two-angle map lies on the images of the domain edges and of the zero set of
its Jacobian determinant; tracing those curves and keeping the outermost
parts gives the region's upper-right boundary.

All extremizations run over nonnegative real coefficients: zeroing the
coefficient phases can only increase each branch.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .concurrence import pair_rdm, spacing_subconcurrences, subconcurrence
from .contour import zero_contours
from .csx import BRANCH_FUNCTIONS, BRANCHES, CSX_INDEX
from .optimize import bisect_root, maximize_on_box, newton2
from .states import CSState, necklaces, project_cs, theorem1_product

HALF_PI = math.pi / 2
JACOBIAN_STEP = 1e-5
ENVELOPE_BINS = 1000
MIN_RESOLUTION = 64
SOURCES = ("domain-edge", "jacobian-zero", "closed-form")

THRESHOLD_CLOSED_FORMS = {(4, 1): (2 * math.sqrt(2) - 1) / 4, (4, 2): 4 / 5}
EQ49_BREAK = 63 / 226

_COEFF_NAMES = {4: ("a", "c", "d", "f"), 5: ("a", "c", "d", "g")}
_BRANCH_COL = {b: i for i, b in enumerate(BRANCHES)}


def parse_pair(pair):
    """Normalize ``"1nu,2mu"`` or ``("1nu", "2mu")`` to a tuple of branch names."""
    if isinstance(pair, str):
        pair = tuple(p.strip() for p in pair.split(","))
    pair = tuple(pair)
    if len(pair) != 2 or pair[0] not in ("1mu", "1nu") or pair[1] not in ("2mu", "2nu"):
        raise ValueError(f"unknown branch pair {pair!r}; expected (1mu|1nu, 2mu|2nu)")
    return pair


def _pair_label(pair):
    return ",".join(pair)


# coefficient builders: angles -> (a, c, d, f|g), all on the unit sphere


def _d_zero(theta, phi):
    s = np.sin(theta)
    return s * np.cos(phi), np.cos(theta), np.zeros_like(s), s * np.sin(phi)


def _a_equals_f(alpha, beta):
    a = np.cos(alpha) / math.sqrt(2)
    s = np.sin(alpha)
    return a, s * np.cos(beta), s * np.sin(beta), a


def _a_f_zero(zeta):
    zeta = np.asarray(zeta, dtype=float)
    zero = np.zeros_like(zeta)
    return zero, np.cos(zeta), np.sin(zeta), zero


def _a_zero(theta, phi):
    s = np.sin(theta)
    return np.zeros_like(s), s * np.cos(phi), s * np.sin(phi), np.cos(theta)


def hypersphere(x1, x2, x3):
    """Nonnegative unit 4-vectors from three angles in ``[0, pi/2]``."""
    s1 = np.sin(x1)
    s2 = s1 * np.sin(x2)
    return np.cos(x1), s1 * np.cos(x2), s2 * np.cos(x3), s2 * np.sin(x3)


# the matching reductions acting on real coefficient arrays of shape (..., 4)


def _renormalize(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def _reduce_d_zero(x):
    x = np.array(x, dtype=float)
    x[..., 2] = 0.0
    return _renormalize(x)


def _reduce_a_equals_f(x):
    x = np.array(x, dtype=float)
    x[..., 0] = x[..., 3] = np.sqrt((x[..., 0] ** 2 + x[..., 3] ** 2) / 2)
    return x


def _reduce_a_f_zero(x):
    x = np.array(x, dtype=float)
    x[..., 0] = x[..., 3] = 0.0
    return _renormalize(x)


def _reduce_a_zero(x):
    x = np.array(x, dtype=float)
    x[..., 0] = 0.0
    return _renormalize(x)


@dataclass(frozen=True)
class Reduction:
    """A coefficient constraint together with its spherical parametrization.

    ``coefficients(*angles)`` builds ``(a, c, d, f)`` (or ``(a, c, d, g)``)
    from the angles, and ``apply(x)`` maps arbitrary real coefficient vectors
    into the reduced set.

    Notes
    -----
    ``d = 0`` never lowers either named branch. Zeroing ``a`` (and ``f``)
    never lowers them before renormalization, so nonnegative values survive
    it. ``a = f`` raises the nu branches but lowers ``1mu`` whenever
    ``a != f``; the traced envelope still contains those images because the
    other pairings dominate them.
    """

    n: int
    pair: tuple
    constraint: str
    angle_names: tuple
    builder: Callable = field(repr=False, compare=False)
    reducer: Callable = field(repr=False, compare=False)

    @property
    def ndim(self):
        return len(self.angle_names)

    @property
    def label(self):
        return f"n{self.n}:{_pair_label(self.pair)}"

    def coefficients(self, *angles):
        return np.stack(np.broadcast_arrays(*self.builder(*angles)), axis=-1)

    def apply(self, x):
        return self.reducer(x)

    def values(self, *angles):
        """Branch pair ``(s1, s2)`` at the given angles, shape ``(..., 2)``."""
        b = BRANCH_FUNCTIONS[self.n](*self.builder(*angles))
        return b[..., [_BRANCH_COL[self.pair[0]], _BRANCH_COL[self.pair[1]]]]


def reduce_domain(n, pair):
    """Reduced coefficient set and parametrization for a branch pairing.

    Parameters
    ----------
    n : int
        4 or 5.
    pair : str or tuple
        ``(spacing-1 branch, spacing-2 branch)``, e.g. ``("1nu", "2mu")``.

    Notes
    -----
    For 4 qubits every pairing has a reduction to at most two angles.  For 5
    qubits only the ``(1mu, 2mu)`` pairing reduces (to ``a = 0``); the other
    pairings keep all three angles and are controlled by
    :func:`linear_bounds_5q` instead of boundary tracing.
    """
    pair = parse_pair(pair)
    if n == 4:
        if pair == ("1nu", "2mu"):
            return Reduction(4, pair, "d = 0", ("theta", "phi"), _d_zero, _reduce_d_zero)
        if pair in (("1mu", "2nu"), ("1nu", "2nu")):
            return Reduction(4, pair, "a = f", ("alpha", "beta"), _a_equals_f, _reduce_a_equals_f)
        return Reduction(4, pair, "a = f = 0", ("zeta",), _a_f_zero, _reduce_a_f_zero)
    if n == 5:
        if pair == ("1mu", "2mu"):
            return Reduction(5, pair, "a = 0", ("theta", "phi"), _a_zero, _reduce_a_zero)
        return Reduction(5, pair, "none", ("chi1", "chi2", "chi3"), hypersphere, _renormalize)
    raise ValueError(f"branch pairs are defined for n=4 and n=5, got n={n}")


@dataclass(frozen=True)
class SphericalPoint:
    """One or two angles in the closed box ``[0, pi/2]``."""

    angles: tuple

    def __post_init__(self):
        angles = tuple(float(a) for a in np.atleast_1d(self.angles))
        if not 1 <= len(angles) <= 3:
            raise ValueError(f"expected 1 to 3 angles, got {len(angles)}")
        if any(not 0.0 <= a <= HALF_PI for a in angles):
            raise ValueError(f"angles {angles} outside [0, pi/2]")
        object.__setattr__(self, "angles", angles)


def _as_reduction(n, pair):
    return pair if isinstance(pair, Reduction) else reduce_domain(n, pair)


def branch_pair_map(n, pair, point):
    """Image ``(s1, s2)`` of a point of a pairing's parametrization domain."""
    red = _as_reduction(n, pair)
    if not isinstance(point, SphericalPoint):
        point = SphericalPoint(point)
    if len(point.angles) != red.ndim:
        raise ValueError(f"{red.label} takes {red.ndim} angle(s), got {len(point.angles)}")
    s1, s2 = red.values(*point.angles)
    return float(s1), float(s2)


def _jacobian_field(red, u, v, h=JACOBIAN_STEP):
    du = (red.values(u + h, v) - red.values(u - h, v)) / (2 * h)
    dv = (red.values(u, v + h) - red.values(u, v - h)) / (2 * h)
    return du[..., 0] * dv[..., 1] - du[..., 1] * dv[..., 0]


def jacobian_det(n, pair, point, h=JACOBIAN_STEP):
    """Determinant of the 2x2 Jacobian of a two-angle pair map (central differences).

    Raises
    ------
    ValueError
        For pairings whose parametrization does not have exactly two angles.
    """
    red = _as_reduction(n, pair)
    if red.ndim != 2:
        raise ValueError(f"jacobian_det needs a two-angle map; {red.label} has {red.ndim}")
    if not isinstance(point, SphericalPoint):
        point = SphericalPoint(point)
    return float(_jacobian_field(red, *point.angles, h=h))


@dataclass
class BoundaryCurve:
    """An ordered polyline in the ``(sC1, sC2)`` plane.

    ``angles`` holds the domain preimage of every point when the curve came
    from a parametrized map, which lets thresholds be refined on the map
    itself rather than on the polyline.
    """

    source: str
    points: np.ndarray
    parametrization_id: str
    angles: np.ndarray = None

    def __post_init__(self):
        if self.source not in SOURCES + ("envelope",):
            raise ValueError(f"unknown curve source {self.source!r}")
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(self.points)):
            raise ValueError("curve points must be finite")

    def __len__(self):
        return len(self.points)

    def max_step(self):
        if len(self.points) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(np.diff(self.points, axis=0), axis=1)))


def _densify(red, angles, step, max_rounds=40):
    """Insert angle-space midpoints until image steps are at most ``step``."""
    for _ in range(max_rounds):
        pts = red.values(*angles.T)
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        bad = np.nonzero(gaps > step)[0]
        if bad.size == 0:
            return angles, pts
        mids = 0.5 * (angles[bad] + angles[bad + 1])
        angles = np.insert(angles, bad + 1, mids, axis=0)
    return angles, red.values(*angles.T)


def _split_at_gaps(angles, pts, step):
    """Break a polyline wherever densification could not close a gap."""
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    cuts = np.nonzero(gaps > step)[0] + 1
    return [(a, p) for a, p in zip(np.split(angles, cuts), np.split(pts, cuts)) if len(p)]


def trace_boundary(n, pair, resolution=512, step=None):
    """Candidate boundary curves of a pairing's image in the ``(sC1, sC2)`` plane.

    Parameters
    ----------
    n : int
        4 or 5.
    pair : str or tuple
        Branch pairing, see :func:`reduce_domain`.
    resolution : int
        Grid points per angle, at least 64.  Even values keep the symmetry
        line ``phi = pi/4`` off the grid nodes.
    step : float, optional
        Maximum distance between consecutive curve points; defaults to
        ``0.25 / resolution``.

    Returns
    -------
    list of BoundaryCurve
        For two-angle maps, the images of the four domain edges and of every
        marching-squares component of the Jacobian zero set.  For a one-angle
        map, the single image curve.
    """
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    red = _as_reduction(n, pair)
    step = 0.25 / resolution if step is None else float(step)
    t = np.linspace(0.0, HALF_PI, resolution)
    curves = []

    def add(source, pid, angles):
        angles, pts = _densify(red, angles, step)
        pieces = _split_at_gaps(angles, pts, step)
        for k, (a, p) in enumerate(pieces):
            suffix = f"#{k}" if len(pieces) > 1 else ""
            curves.append(BoundaryCurve(source, p, f"{red.label}:{pid}{suffix}", a))

    if red.ndim == 1:
        add("domain-edge", f"{red.angle_names[0]}=[0,pi/2]", t[:, None])
        return curves
    if red.ndim != 2:
        raise ValueError(
            f"{red.label} has no two-angle reduction; it is bounded by linear_bounds_5q"
        )

    u_name, v_name = red.angle_names
    for name, fixed, which in (
        (u_name, 0.0, 0),
        (u_name, HALF_PI, 0),
        (v_name, 0.0, 1),
        (v_name, HALF_PI, 1),
    ):
        angles = np.empty((resolution, 2))
        angles[:, which] = fixed
        angles[:, 1 - which] = t
        label = "0" if fixed == 0.0 else "pi/2"
        add("domain-edge", f"{name}={label}", angles)

    uu, vv = np.meshgrid(t, t, indexing="ij")
    det = _jacobian_field(red, uu, vv)
    for k, line in enumerate(zero_contours(det, t, t)):
        if len(line) >= 2:
            add("jacobian-zero", f"detJ=0#{k}", line)
    return curves


@dataclass
class Envelope:
    """Upper-right outer boundary of a set of curves, binned.

    ``upper[i]`` is the largest ``sC2`` reached by any curve point with
    ``sC1`` in bin ``i`` or any bin to its right, and ``right`` is the same
    with the axes exchanged.  Both are nonincreasing, so a point ``(x, y)``
    of the traced region satisfies ``y <= upper(x)`` and ``x <= right(y)``.
    """

    edges: np.ndarray
    upper: np.ndarray
    right: np.ndarray
    curves: list = field(repr=False)

    @property
    def bins(self):
        return len(self.edges) - 1

    def _bin(self, x):
        return _bin_index(self.edges, x)

    def upper_at(self, s1):
        return self.upper[self._bin(s1)]

    def right_at(self, s2):
        return self.right[self._bin(s2)]

    def contains(self, s1, s2, tol=1e-6):
        s1 = np.asarray(s1, dtype=float)
        s2 = np.asarray(s2, dtype=float)
        return (s2 <= self.upper_at(s1) + tol) & (s1 <= self.right_at(s2) + tol)

    def profile(self, s1):
        """Largest curve ``sC2`` exactly at each ``s1`` (linear interpolation along segments)."""
        s1 = np.atleast_1d(np.asarray(s1, dtype=float))
        out = np.full(s1.shape, -np.inf)
        for c in self.curves:
            if len(c) < 2:
                hit = np.isclose(s1[:, None], c.points[None, :, 0], rtol=0, atol=1e-15)
                out = np.where(hit.any(axis=1), np.maximum(out, c.points[0, 1]), out)
                continue
            x0, y0 = c.points[:-1, 0], c.points[:-1, 1]
            x1, y1 = c.points[1:, 0], c.points[1:, 1]
            lo, hi = np.minimum(x0, x1), np.maximum(x0, x1)
            span = (s1[:, None] >= lo) & (s1[:, None] <= hi)
            dx = np.where(x1 == x0, 1.0, x1 - x0)
            t = np.where(x1 == x0, 0.0, (s1[:, None] - x0) / dx)
            y = np.where(x1 == x0, np.maximum(y0, y1), y0 + t * (y1 - y0))
            out = np.maximum(out, np.max(np.where(span, y, -np.inf), axis=1))
        return out

    def as_curve(self):
        """The ``upper`` staircase as a polyline over the populated bins."""
        keep = np.isfinite(self.upper)
        x = self.edges[1:][keep]
        return BoundaryCurve("envelope", np.column_stack([x, self.upper[keep]]), "envelope")


def _suffix_max(values):
    return np.maximum.accumulate(values[::-1])[::-1]


def _bin_index(edges, x):
    idx = np.searchsorted(edges, np.asarray(x, dtype=float), side="right") - 1
    return np.clip(idx, 0, len(edges) - 2)


def _binned_max(edges, curves, axis):
    """Per-bin maximum of the other coordinate, bins taken along ``axis``.

    Besides the vertices, every crossing of a bin edge by a segment is
    interpolated and credited to the bin starting at that edge, so the
    suffix maximum never drops below the polyline.
    """
    out = np.full(len(edges) - 1, -np.inf)
    other = 1 - axis
    for c in curves:
        p = c.points
        idx = _bin_index(edges, p[:, axis])
        np.maximum.at(out, idx, p[:, other])
        if len(p) < 2:
            continue
        i0, i1 = idx[:-1], idx[1:]
        lo_i = np.minimum(i0, i1)
        span = np.abs(i1 - i0)
        for k in range(1, int(span.max(initial=0)) + 1):
            seg = np.nonzero(span >= k)[0]
            e = lo_i[seg] + k
            x0, x1 = p[seg, axis], p[seg + 1, axis]
            t = (edges[e] - x0) / (x1 - x0)
            y = p[seg, other] + t * (p[seg + 1, other] - p[seg, other])
            np.maximum.at(out, e, y)
    return out


def envelope(curves, bins=ENVELOPE_BINS):
    """Bin the outer boundary of ``curves`` over ``[-1, 1]``.

    Raises
    ------
    ValueError
        If ``curves`` is empty.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("envelope needs at least one curve")
    edges = np.linspace(-1.0, 1.0, bins + 1)
    upper = _binned_max(edges, curves, 0)
    right = _binned_max(edges, curves, 1)
    return Envelope(edges, _suffix_max(upper), _suffix_max(right), curves)


def traced_pairs(n):
    """Pairings whose boundaries are traced for the achievable region."""
    if n == 4:
        return [("1nu", "2mu"), ("1mu", "2nu"), ("1nu", "2nu"), ("1mu", "2mu")]
    if n == 5:
        return [("1mu", "2mu")]
    raise ValueError(f"boundaries are traced for n=4 and n=5 only, got n={n}")


def region_curves(n, resolution=512):
    """All candidate curves of all traced pairings for ``n`` qubits."""
    out = []
    for pair in traced_pairs(n):
        out += trace_boundary(n, pair, resolution)
    return out


def write_curves_csv(curves, fh):
    """Write curves as CSV rows ``s1,s2,source,param_id``."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["s1", "s2", "source", "param_id"])
    for c in curves:
        for x, y in c.points:
            writer.writerow([f"{x:.12g}", f"{y:.12g}", c.source, c.parametrization_id])


def curves_to_csv(curves):
    buf = io.StringIO()
    write_curves_csv(curves, buf)
    return buf.getvalue()


# thresholds


@dataclass(frozen=True)
class Threshold:
    """Largest subconcurrence at one spacing compatible with a nonnegative other spacing."""

    n: int
    spacing: int
    value: float
    method: str = "traced"
    closed_form: float = None

    def __post_init__(self):
        if not 0.0 < self.value < 1.0:
            raise ValueError(f"threshold {self.value} outside (0, 1)")

    def to_dict(self):
        out = {"n": self.n, "spacing": self.spacing, "value": float(f"{self.value:.12g}"),
               "method": self.method}
        if self.closed_form is not None:
            out["closed_form"] = float(f"{self.closed_form:.12g}")
        return out


def _curve_reduction(curve):
    n = int(curve.parametrization_id[1])
    pair = curve.parametrization_id.split(":")[1]
    return reduce_domain(n, pair)


def _refine_crossing(curve, i, spacing):
    """Point between vertices ``i`` and ``i + 1`` where the other spacing is zero.

    Domain-edge curves are refined by bisection along the edge.  Fold curves
    are refined by solving ``detJ = 0`` and ``s_other = 0`` simultaneously;
    if that fails the straight angle segment is bisected instead, which still
    yields an attainable point.
    """
    red = _curve_reduction(curve)
    other = 2 - spacing
    a0, a1 = curve.angles[i], curve.angles[i + 1]

    def along(t):
        return red.values(*(a0 + t * (a1 - a0)))[other]

    t = bisect_root(along, 0.0, 1.0)
    guess = a0 + t * (a1 - a0)
    if curve.source == "jacobian-zero":

        def system(x):
            return (_jacobian_field(red, *x), red.values(*x)[other])

        sol = newton2(system, guess, 0.0, HALF_PI)
        if sol is not None and np.max(np.abs(sol - guess)) < 1e-3:
            guess = np.clip(sol, 0.0, HALF_PI)
    return float(red.values(*guess)[spacing - 1])


def curve_threshold(curve, spacing):
    """Largest ``s_spacing`` on a curve at points where the other spacing is ``>= 0``."""
    val = curve.points[:, spacing - 1]
    oth = curve.points[:, 2 - spacing]
    best = float(np.max(val[oth >= 0], initial=-np.inf))
    if curve.angles is None:
        return best
    sign = oth >= 0
    for i in np.nonzero(sign[:-1] != sign[1:])[0]:
        best = max(best, _refine_crossing(curve, i, spacing))
    return best


def thresholds(n, resolution=512, curves=None):
    """Traced thresholds of both spacings for ``n`` = 4 or 5.

    Returns
    -------
    list of Threshold
        Spacing 1 then spacing 2.  ``closed_form`` is filled in where an exact
        value is known, ``value`` is always the traced one.
    """
    curves = region_curves(n, resolution) if curves is None else curves
    out = []
    for spacing in (1, 2):
        value = max(curve_threshold(c, spacing) for c in curves)
        out.append(Threshold(n, spacing, value, "traced", THRESHOLD_CLOSED_FORMS.get((n, spacing))))
    return out


# the piecewise closed-form bound for 4 qubits


def eq49_bound(s1):
    """Piecewise closed-form upper bound on ``sC2`` given ``sC1`` for 4-qubit CSX states.

    Below ``63/226`` the first expression is used, above it the second.
    The first expression as written exceeds 1 near ``sC1 = 0`` and is only
    reported against the traced boundary, never trusted.

    Raises
    ------
    ValueError
        If ``s1`` lies outside ``[-1/2, 1/2]``.
    """
    s = np.asarray(s1, dtype=float)
    if np.any(s < -0.5) or np.any(s > 0.5) or not np.all(np.isfinite(s)):
        raise ValueError("eq49_bound is defined for -1/2 <= s1 <= 1/2")
    first = 0.4 * (8 * np.sqrt(np.clip(1 - 2 * s - 4 * s**2, 0, None)) - s + 1)
    second = (8 * np.sqrt(np.clip(1 - s - 2 * s**2, 0, None)) - 4 * s - 1) / 9
    out = np.where(s <= EQ49_BREAK, first, second)
    return float(out) if out.ndim == 0 else out


def eq49_second_root():
    """Zero of the second expression of :func:`eq49_bound` on ``[63/226, 1/2]``."""
    return bisect_root(lambda s: eq49_bound(s), EQ49_BREAK + 1e-12, 0.5, tol=1e-15)


def eq49_report(resolution=512, samples=201, env=None):
    """Compare :func:`eq49_bound` with the traced 4-qubit boundary.

    Returns a dict with the sample grid, both profiles, the largest
    discrepancy on each side of the breakpoint and the second-branch root.
    Grid points the traced curves do not reach are reported as ``None``.
    """
    env = envelope(region_curves(4, resolution)) if env is None else env
    s1 = np.linspace(-0.5, 0.5, samples)
    traced = env.profile(s1)
    bound = eq49_bound(s1)
    ok = np.isfinite(traced)
    first = ok & (s1 <= EQ49_BREAK)
    second = ok & (s1 > EQ49_BREAK)
    root = eq49_second_root()
    return {
        "s1": s1.tolist(),
        "traced": [float(v) if np.isfinite(v) else None for v in traced],
        "eq49": bound.tolist(),
        "first_branch_max_abs_diff": float(np.max(np.abs(bound - traced)[first], initial=0.0)),
        "second_branch_max_abs_diff": float(np.max(np.abs(bound - traced)[second], initial=0.0)),
        "second_branch_root": root,
        "root_minus_threshold": root - THRESHOLD_CLOSED_FORMS[(4, 1)],
    }


# maxima of branches and linear functionals over the real CSX sphere


@dataclass(frozen=True)
class BranchMaximum:
    n: int
    weights: dict
    value: float
    coefficients: dict
    angles: tuple

    def to_dict(self):
        return {
            "n": self.n,
            "weights": dict(self.weights),
            "value": float(f"{self.value:.12g}"),
            "argmax": {k: float(f"{v:.12g}") for k, v in self.coefficients.items()},
        }


def _parse_weights(weights):
    if isinstance(weights, str):
        weights = {weights: 1.0}
    w = np.zeros(len(BRANCHES))
    for name, coef in weights.items():
        if name not in _BRANCH_COL:
            raise ValueError(f"unknown branch {name!r}; expected one of {BRANCHES}")
        w[_BRANCH_COL[name]] = float(coef)
    return w


def maximize_linear(weights, n, grid=200, tol=1e-10, starts=4):
    """Maximize a weighted sum of branches over nonnegative real CSX coefficients.

    Parameters
    ----------
    weights : str or dict
        A branch name, or ``{branch: weight}``.
    n : int
        4 or 5.
    grid : int
        Points per hyperspherical angle of the initial dense grid.
    tol : float
        Angular tolerance of the golden-section refinement.
    """
    if n not in BRANCH_FUNCTIONS:
        raise ValueError(f"closed forms exist for n=4 and n=5 only, got n={n}")
    w = _parse_weights(weights)
    branches = BRANCH_FUNCTIONS[n]

    def f_vec(x1, x2, x3):
        return branches(*hypersphere(x1, x2, x3)) @ w

    def f_scalar(x):
        return float(f_vec(*x))

    best = maximize_on_box(f_vec, f_scalar, 3, grid=grid, starts=starts, tol=tol)
    coeffs = dict(zip(_COEFF_NAMES[n], (float(v) for v in hypersphere(*best.x))))
    named = {b: float(w[i]) for i, b in enumerate(BRANCHES) if w[i]}
    return BranchMaximum(n, named, best.value, coeffs, tuple(float(v) for v in best.x))


def maximize_branch(branch, n, grid=200, tol=1e-10):
    """Global maximum of one branch expression; see :func:`maximize_linear`."""
    return maximize_linear(branch, n, grid=grid, tol=tol)


@dataclass(frozen=True)
class LinearBound:
    weights: dict
    bound: float
    maximum: float

    @property
    def holds(self):
        return self.maximum <= self.bound + 1e-6

    def label(self):
        return " + ".join(f"{w:g}*{b}" if w != 1 else b for b, w in self.weights.items())


LINEAR_BOUNDS_5Q = (
    ({"1nu": 1.0, "2nu": 1.0}, 2 / 5),
    ({"2nu": 1.0, "1mu": 1.0}, 47 / 100),
    ({"2nu": 1.0, "1mu": 2.0}, 4 / 5),
    ({"1nu": 1.0}, 0.366),
    ({"2nu": 1.0}, 0.366),
)


def linear_bounds_5q(grid=200):
    """The 5-qubit linear constraints that keep the non-``(mu, mu)`` pairings inside.

    Each bound comes back with the numerically maximized value of its linear
    functional over the real 5-qubit CSX sphere.
    """
    return [
        LinearBound(w, b, maximize_linear(w, 5, grid=grid).value) for w, b in LINEAR_BOUNDS_5Q
    ]


# theorem checks


@dataclass(frozen=True)
class Theorem1Report:
    n: int
    k: int
    residual: float
    concurrences: dict
    expected: float


def adjacent_maximum(size):
    """Largest adjacent-pair concurrence of a 2- or 3-qubit state (Bell, W)."""
    return {2: 1.0, 3: 2.0 / 3.0}[size]


def theorem1_report(n, k):
    """Concurrence at every spacing of the interleaved product state."""
    state = theorem1_product(n, k)
    _, residual = project_cs(state.vector())
    conc = {}
    for spacing in range(1, n // 2 + 1):
        conc[spacing] = max(0.0, subconcurrence(pair_rdm(state, spacing)))
    return Theorem1Report(n, k, residual, conc, adjacent_maximum(n // k))


@dataclass(frozen=True)
class Theorem2Result:
    epsilon: float
    trials: int
    max_concurrence: float
    max_subconcurrence: float


def theorem2_check(epsilon, trials=1000, rng_seed=0):
    """Spacing-1 concurrence of random perturbations of the 4-qubit spacing-2 product.

    Each trial adds ``epsilon`` times a random unit complex CS vector to the
    product of two Bell pairs on parties ``(0, 2)`` and ``(1, 3)`` and
    renormalizes.
    """
    from .sampler import SampleSpec, random_amplitudes

    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if trials < 1:
        raise ValueError("trials must be positive")
    base = theorem1_product(4, 2).amplitudes
    spec = SampleSpec(4, "CS", trials, rng_seed)
    amps = base[None, :] + epsilon * random_amplitudes(spec)
    amps /= np.linalg.norm(amps, axis=1, keepdims=True)
    sc = spacing_subconcurrences(4, amps, spacings=(1,))[:, 0]
    return Theorem2Result(float(epsilon), trials, float(max(0.0, sc.max())), float(sc.max()))


def csx_state(n, coefficients):
    """CS state from a ``{name: amplitude}`` mapping of CSX coefficients."""
    names = _COEFF_NAMES[n]
    unknown = set(coefficients) - set(names)
    if unknown:
        raise ValueError(f"unknown coefficient(s) {sorted(unknown)} for n={n}")
    amps = np.zeros(len(necklaces(n)), dtype=complex)
    for name, idx in zip(names, CSX_INDEX[n]):
        amps[idx] = coefficients.get(name, 0.0)
    return CSState(n, amps, normalize=True)
