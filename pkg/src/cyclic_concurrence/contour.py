"""Zero level sets of gridded scalar fields by marching squares."""

from collections import defaultdict

import numpy as np


def _crossing(key, x, y, f):
    kind, i, j = key
    if kind == "h":
        fa, fb = f[i, j], f[i + 1, j]
        t = fa / (fa - fb)
        return (x[i] + t * (x[i + 1] - x[i]), y[j])
    fa, fb = f[i, j], f[i, j + 1]
    t = fa / (fa - fb)
    return (x[i], y[j] + t * (y[j + 1] - y[j]))


def _cell_segments(f, pos):
    """Pairs of crossed edge keys for every cell, saddles split by the cell mean."""
    nx, ny = f.shape
    v00, v10 = pos[:-1, :-1], pos[1:, :-1]
    v01, v11 = pos[:-1, 1:], pos[1:, 1:]
    crossed = (v00 != v10) | (v00 != v01) | (v10 != v11) | (v01 != v11)
    segments = []
    for i, j in zip(*np.nonzero(crossed)):
        bottom, top = ("h", i, j), ("h", i, j + 1)
        left, right = ("v", i, j), ("v", i + 1, j)
        edges = []
        if pos[i, j] != pos[i + 1, j]:
            edges.append(bottom)
        if pos[i + 1, j] != pos[i + 1, j + 1]:
            edges.append(right)
        if pos[i, j + 1] != pos[i + 1, j + 1]:
            edges.append(top)
        if pos[i, j] != pos[i, j + 1]:
            edges.append(left)
        if len(edges) == 2:
            segments.append(tuple(edges))
        elif len(edges) == 4:
            centre = 0.25 * (f[i, j] + f[i + 1, j] + f[i, j + 1] + f[i + 1, j + 1]) > 0
            if centre == pos[i, j]:
                segments += [(bottom, right), (left, top)]
            else:
                segments += [(bottom, left), (right, top)]
    return segments


def _chain(segments):
    links = defaultdict(list)
    for a, b in segments:
        links[a].append(b)
        links[b].append(a)
    unused = set(links)
    chains = []
    # open chains start at edges touched once, closed loops anywhere
    starts = [k for k, v in links.items() if len(v) == 1] + list(links)
    for start in starts:
        if start not in unused:
            continue
        chain = [start]
        unused.discard(start)
        current = start
        while True:
            nxt = [k for k in links[current] if k in unused]
            if not nxt:
                break
            current = nxt[0]
            unused.discard(current)
            chain.append(current)
        if len(chain) > 2 and chain[0] in links[chain[-1]]:
            chain.append(chain[0])
        chains.append(chain)
    return chains


def zero_contours(f, x, y):
    """Polylines approximating ``f = 0`` on a rectangular grid.

    Parameters
    ----------
    f : ndarray, shape (len(x), len(y))
        Field values, ``f[i, j]`` at ``(x[i], y[j])``.
    x, y : ndarray
        Increasing grid coordinates.

    Returns
    -------
    list of ndarray, each of shape (m, 2)
        Ordered points ``(x, y)``; closed loops repeat their first point.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (len(x), len(y)):
        raise ValueError(f"field shape {f.shape} does not match grid {(len(x), len(y))}")
    f = np.where(np.isfinite(f), f, 0.0)
    pos = f > 0
    chains = _chain(_cell_segments(f, pos))
    return [np.array([_crossing(k, x, y, f) for k in chain]) for chain in chains]
