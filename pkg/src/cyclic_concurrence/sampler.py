"""Reproducible random CS and CSX states and (sC1, sC2) scatter datasets.

Orbit amplitudes are independent standard complex Gaussians, normalized,
which is the unitarily invariant (uniform) measure on the unit sphere of the
chosen subspace.  Trial ``i`` of seed ``s`` is drawn from a Philox4x64
generator with key ``s`` and counter ``(0, i, 0, 0)``, so every trial is a
pure function of ``(seed, index)`` and can be generated in any order.
"""

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .concurrence import spacing_subconcurrences
from .csx import branches_from_amplitudes, subconcurrences_from_branches
from .errors import ValidationError
from .states import CSState, csx_mask, necklaces

SUBSPACES = ("CS", "CSX")
MODES = ("subconcurrence", "concurrence")
RNG_NAME = "Philox4x64 key=seed counter=(0,index,0,0)"
CROSS_CHECK_TOL = 1e-9
_CHUNK = 20_000


@dataclass(frozen=True)
class SampleSpec:
    """What to sample: ``count`` states of ``n`` qubits from ``subspace``."""

    n: int
    subspace: str
    count: int
    seed: int

    def __post_init__(self):
        subspace = self.subspace.upper()
        if subspace not in SUBSPACES:
            raise ValueError(f"subspace must be CS or CSX, got {self.subspace!r}")
        object.__setattr__(self, "subspace", subspace)
        if self.n not in (4, 5):
            raise ValueError(f"sampling supports n=4 or n=5, got n={self.n}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def mask(self):
        if self.subspace == "CSX":
            return csx_mask(self.n)
        return np.ones(len(necklaces(self.n)), dtype=bool)


def _draw(spec, index):
    gen = np.random.Generator(np.random.Philox(key=spec.seed, counter=[0, index, 0, 0]))
    m = len(necklaces(spec.n))
    z = gen.standard_normal(2 * m)
    amps = (z[:m] + 1j * z[m:]) * spec.mask
    return amps / np.linalg.norm(amps)


def random_state(spec, index):
    """Trial ``index`` of ``spec`` as a normalized :class:`CSState`."""
    if not 0 <= index < spec.count:
        raise ValueError(f"index {index} out of range 0..{spec.count - 1}")
    return CSState(spec.n, _draw(spec, index))


def random_amplitudes(spec, start=0, stop=None):
    """Orbit amplitudes of trials ``start..stop-1``, shape ``(trials, n_orbits)``."""
    stop = spec.count if stop is None else stop
    return np.array([_draw(spec, i) for i in range(start, stop)])


@dataclass
class ScatterDataset:
    spec: SampleSpec
    mode: str
    points: np.ndarray

    def metadata(self):
        return {
            "spec": asdict(self.spec),
            "mode": self.mode,
            "rng": RNG_NAME,
            "measure": "normalized i.i.d. standard complex Gaussian orbit amplitudes",
            "version": __version__,
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "s1", "s2"])
        for i, (s1, s2) in enumerate(self.points):
            writer.writerow([i, f"{s1:.12g}", f"{s2:.12g}"])
        return buf.getvalue()

    def metadata_json(self):
        return json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n"


def _closed_form_points(n, amps):
    return subconcurrences_from_branches(branches_from_amplitudes(n, amps))


def scatter(spec, mode="subconcurrence", cross_check=True):
    """Spacing-1 and spacing-2 (sub)concurrences of every trial of ``spec``.

    CS samples use the generic Wootters computation.  CSX samples use the
    closed-form branches and, with ``cross_check``, are compared against the
    generic computation to within ``1e-9``.

    Raises
    ------
    ValidationError
        If the CSX closed forms and the generic computation disagree.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    points = np.empty((spec.count, 2))
    for start in range(0, spec.count, _CHUNK):
        stop = min(start + _CHUNK, spec.count)
        amps = random_amplitudes(spec, start, stop)
        if spec.subspace == "CSX":
            pts = _closed_form_points(spec.n, amps)
            if cross_check:
                generic = spacing_subconcurrences(spec.n, amps)
                worst = float(np.max(np.abs(generic - pts)))
                if worst > CROSS_CHECK_TOL:
                    raise ValidationError(
                        f"closed-form cross-check failed: deviation {worst:.3g} exceeds {CROSS_CHECK_TOL:g}"
                    )
        else:
            pts = spacing_subconcurrences(spec.n, amps)
        points[start:stop] = pts
    if mode == "concurrence":
        points = np.maximum(points, 0.0)
    return ScatterDataset(spec, mode, points)
