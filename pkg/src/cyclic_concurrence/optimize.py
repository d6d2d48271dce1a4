"""Derivative-free search on boxes: dense grids, golden section, root bracketing.

The objectives maximized in this package are built from absolute values and
square roots, so they are only piecewise smooth.  Everything here therefore
avoids gradients: a dense grid locates candidate basins and per-coordinate
golden-section searches polish them.
"""

import math
from dataclasses import dataclass

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-12, max_iter=200):
    """Maximize a unimodal scalar function on ``[lo, hi]``.

    Returns ``(x, f(x))``; the interval endpoints are candidates too, so a
    maximum on the boundary is found exactly.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    best = max([(fc, c), (fd, d), (f(lo), float(lo)), (f(hi), float(hi))])
    return best[1], best[0]


def bisect_root(f, lo, hi, tol=1e-14, max_iter=200):
    """Root of ``f`` in ``[lo, hi]`` given a sign change (bisection)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("root is not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or hi - lo < tol:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class BoxMaximum:
    x: np.ndarray
    value: float
    grid_value: float
    cycles: int


def grid_points(ndim, size, lo=0.0, hi=math.pi / 2):
    return [np.linspace(lo, hi, size) for _ in range(ndim)]


def _grid_candidates(f, axes, count, chunk=2_000_000):
    """Best ``count`` well-separated grid points of a vectorized objective."""
    shape = tuple(len(ax) for ax in axes)
    first = axes[0]
    rest = np.meshgrid(*axes[1:], indexing="ij") if len(axes) > 1 else []
    per_slice = int(np.prod(shape[1:], dtype=np.int64)) if len(axes) > 1 else 1
    step = max(1, chunk // per_slice)
    values = np.empty(shape)
    for start in range(0, shape[0], step):
        sl = slice(start, min(start + step, shape[0]))
        x0 = first[sl].reshape((-1,) + (1,) * (len(axes) - 1))
        args = [np.broadcast_to(x0, (x0.shape[0],) + shape[1:])]
        args += [np.broadcast_to(r, (x0.shape[0],) + shape[1:]) for r in rest]
        values[sl] = f(*args)
    flat = values.ravel()
    top = np.argsort(-flat, kind="stable")[: max(200, 50 * count)]
    chosen = []
    for idx in top:
        pos = np.array(np.unravel_index(idx, shape))
        if all(np.max(np.abs(pos - p)) > 3 for p, _ in chosen):
            chosen.append((pos, flat[idx]))
        if len(chosen) == count:
            break
    return [(np.array([axes[k][p[k]] for k in range(len(axes))]), v) for p, v in chosen]


def coordinate_golden(f, x0, lo, hi, width, tol=1e-10, max_cycles=5000):
    """Cyclic coordinate ascent with a golden-section line search per axis.

    Each axis is searched on a window around the current point that doubles
    whenever the maximizer lands on its edge, so the search is not confined
    to the starting grid cell.
    """
    x = np.array(x0, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), x.shape)
    hi = np.broadcast_to(np.asarray(hi, dtype=float), x.shape)
    widths = np.full(x.shape, float(width))
    fx = f(x)
    cycles = 0
    for cycles in range(1, max_cycles + 1):
        moved = 0.0
        for k in range(x.size):

            def line(t, k=k):
                y = x.copy()
                y[k] = t
                return f(y)

            while True:
                a = max(lo[k], x[k] - widths[k])
                b = min(hi[k], x[k] + widths[k])
                t, ft = golden_max(line, a, b, tol=tol * 0.1)
                on_edge = (t - a < 2 * tol and a > lo[k]) or (b - t < 2 * tol and b < hi[k])
                if on_edge and widths[k] < (hi[k] - lo[k]):
                    widths[k] *= 2
                    continue
                break
            if ft >= fx:
                moved = max(moved, abs(t - x[k]))
                x[k], fx = t, ft
            widths[k] = max(4 * abs(moved), 10 * tol, widths[k] / 4)
        if moved < tol:
            break
    return x, fx, cycles


def maximize_on_box(f_vec, f_scalar, ndim, grid=200, starts=4, tol=1e-10, lo=0.0, hi=math.pi / 2):
    """Global maximum over ``[lo, hi]**ndim``: dense grid, then golden polishing.

    Parameters
    ----------
    f_vec : callable
        Vectorized objective taking ``ndim`` equally shaped arrays.
    f_scalar : callable
        Objective taking a length-``ndim`` vector, used during refinement.
    grid : int
        Grid points per axis.
    starts : int
        Number of separated grid maxima to refine.
    """
    axes = grid_points(ndim, grid, lo, hi)
    spacing = (hi - lo) / (grid - 1)
    best = None
    for x0, v0 in _grid_candidates(f_vec, axes, starts):
        x, fx, cycles = coordinate_golden(f_scalar, x0, lo, hi, 2 * spacing, tol=tol)
        if best is None or fx > best.value:
            best = BoxMaximum(x=x, value=float(fx), grid_value=float(v0), cycles=cycles)
    return best


def newton2(fun, x0, lo, hi, h=1e-6, tol=1e-13, max_iter=50):
    """Solve two equations in two unknowns by Newton with a finite-difference Jacobian.

    Returns the solution, or ``None`` if the iteration leaves the box or does
    not converge.
    """
    x = np.array(x0, dtype=float)
    for _ in range(max_iter):
        r = np.asarray(fun(x), dtype=float)
        if np.max(np.abs(r)) < tol:
            return x
        jac = np.empty((2, 2))
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            jac[:, k] = (np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2 * h)
        try:
            dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return None
        x = x + dx
        if np.any(x < lo - 1e-9) or np.any(x > hi + 1e-9):
            return None
        if np.max(np.abs(dx)) < 1e-15:
            break
    r = np.asarray(fun(x), dtype=float)
    return x if np.max(np.abs(r)) < 1e-9 else None
