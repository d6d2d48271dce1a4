"""Closed-form subconcurrence branches of 4- and 5-qubit CSX states.

A CSX state is a CS state supported on even-weight strings only.  Its
two-qubit reduced states are X-form, so each spacing has two candidate
subconcurrence expressions: the ``mu`` branch (inner coherence |01><10|) and
the ``nu`` branch (outer coherence |00><11|).  The expressions below already
carry the overall factor 2 of the X-state formula, so
``subconcurrence_k = max(branch_k_mu, branch_k_nu)`` exactly.

For 5 qubits the inner coherence at spacing 1 is
``(dc* + cd* + |d|^2 + |g|^2) / 5``; the modulus is taken of that whole sum.
Writing it as ``|dc* + cd*| + |d|^2 + |g|^2`` agrees only when
``Re(c d*) >= 0`` and overestimates otherwise.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .states import CSState, NORM_TOL, necklaces

BRANCHES = ("1mu", "1nu", "2mu", "2nu")

# orbit positions within necklaces(n) of the CSX coefficients
CSX_ORBITS = {
    4: {"a": "0000", "c": "0011", "d": "0101", "f": "1111"},
    5: {"a": "00000", "c": "00011", "d": "00101", "g": "01111"},
}
CSX_INDEX = {
    n: [[nk.representative for nk in necklaces(n)].index(rep) for rep in reps.values()]
    for n, reps in CSX_ORBITS.items()
}


class Branches(NamedTuple):
    s1_mu: float
    s1_nu: float
    s2_mu: float
    s2_nu: float

    def spacing1(self):
        return np.maximum(self.s1_mu, self.s1_nu)

    def spacing2(self):
        return np.maximum(self.s2_mu, self.s2_nu)


def _normalized(values, normalize):
    values = [complex(v) for v in values]
    norm = math.sqrt(sum(abs(v) ** 2 for v in values))
    if normalize:
        if norm == 0:
            raise ValidationError("cannot normalize zero coefficients")
        return [v / norm for v in values]
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"coefficient norm is {norm!r}, expected 1")
    return values


@dataclass(frozen=True)
class CSX4Coeffs:
    """Amplitudes of orbits 0000, 0011, 0101, 1111."""

    a: complex
    c: complex
    d: complex
    f: complex

    @classmethod
    def create(cls, a, c, d, f, normalize=False):
        return cls(*_normalized((a, c, d, f), normalize))

    @classmethod
    def from_state(cls, state):
        return cls(*(_csx_amplitudes(state, 4)))

    def to_state(self):
        return _to_state(4, (self.a, self.c, self.d, self.f))


@dataclass(frozen=True)
class CSX5Coeffs:
    """Amplitudes of orbits 00000, 00011, 00101, 01111."""

    a: complex
    c: complex
    d: complex
    g: complex

    @classmethod
    def create(cls, a, c, d, g, normalize=False):
        return cls(*_normalized((a, c, d, g), normalize))

    @classmethod
    def from_state(cls, state):
        return cls(*(_csx_amplitudes(state, 5)))

    def to_state(self):
        return _to_state(5, (self.a, self.c, self.d, self.g))


def _csx_amplitudes(state, n):
    if state.n != n:
        raise ValueError(f"expected a {n}-qubit state, got n={state.n}")
    if not state.is_csx:
        raise ValidationError("state has amplitude on odd-weight orbits")
    return [complex(state.amplitudes[i]) for i in CSX_INDEX[n]]


def _to_state(n, values):
    amps = np.zeros(len(necklaces(n)), dtype=complex)
    amps[CSX_INDEX[n]] = values
    return CSState(n, amps)


def branches4(a, c, d, f):
    """Vectorized 4-qubit branches; returns an array of shape ``(..., 4)``."""
    a, c, d, f = (np.asarray(x) for x in (a, c, d, f))
    a2, c2, d2, f2 = (np.abs(x) ** 2 for x in (a, c, d, f))
    s1_mu = np.abs(c * np.conj(d) + d * np.conj(c)) / math.sqrt(2) - 2 * np.sqrt(
        (a2 + c2 / 4) * (c2 / 4 + f2)
    )
    s1_nu = np.abs(a * np.conj(c) + c * np.conj(f)) - c2 / 2 - d2
    s2_mu = c2 - 2 * np.sqrt((a2 + d2 / 2) * (d2 / 2 + f2))
    s2_nu = math.sqrt(2) * np.abs(a * np.conj(d) + d * np.conj(f)) - c2
    return np.stack([s1_mu, s1_nu, s2_mu, s2_nu], axis=-1)


def branches5(a, c, d, g):
    """Vectorized 5-qubit branches; returns an array of shape ``(..., 4)``."""
    a, c, d, g = (np.asarray(x) for x in (a, c, d, g))
    a2, c2, d2, g2 = (np.abs(x) ** 2 for x in (a, c, d, g))
    cross = d * np.conj(c) + c * np.conj(d)
    r5 = math.sqrt(5)
    s1_mu = 0.4 * (np.abs(cross + d2 + g2) - np.sqrt((5 * a2 + 2 * c2 + d2) * (c2 + 3 * g2)))
    s1_nu = 0.4 * (
        np.abs(r5 * a * np.conj(c) + 2 * c * np.conj(g) + d * np.conj(g)) - c2 - 2 * d2 - g2
    )
    s2_mu = 0.4 * (np.abs(cross + c2 + g2) - np.sqrt((5 * a2 + c2 + 2 * d2) * (d2 + 3 * g2)))
    s2_nu = 0.4 * (
        np.abs(r5 * a * np.conj(d) + 2 * d * np.conj(g) + c * np.conj(g)) - 2 * c2 - d2 - g2
    )
    return np.stack([s1_mu, s1_nu, s2_mu, s2_nu], axis=-1)


BRANCH_FUNCTIONS = {4: branches4, 5: branches5}


def csx4_branches(coeffs):
    """Unclamped branches ``(s1_mu, s1_nu, s2_mu, s2_nu)`` of a 4-qubit CSX state."""
    return Branches(*(float(x) for x in branches4(coeffs.a, coeffs.c, coeffs.d, coeffs.f)))


def csx5_branches(coeffs):
    """Unclamped branches ``(s1_mu, s1_nu, s2_mu, s2_nu)`` of a 5-qubit CSX state."""
    return Branches(*(float(x) for x in branches5(coeffs.a, coeffs.c, coeffs.d, coeffs.g)))


def csx_branches(state):
    """Closed-form branches of a 4- or 5-qubit CSX :class:`CSState`."""
    if state.n == 4:
        return csx4_branches(CSX4Coeffs.from_state(state))
    if state.n == 5:
        return csx5_branches(CSX5Coeffs.from_state(state))
    raise ValueError(f"closed forms exist for n=4 and n=5 only, got n={state.n}")


def branches_from_amplitudes(n, amplitudes):
    """Branches for a ``(..., n_orbits)`` stack of CSX orbit amplitudes."""
    if n not in BRANCH_FUNCTIONS:
        raise ValueError(f"closed forms exist for n=4 and n=5 only, got n={n}")
    amplitudes = np.asarray(amplitudes)
    cols = [amplitudes[..., i] for i in CSX_INDEX[n]]
    return BRANCH_FUNCTIONS[n](*cols)


def subconcurrences_from_branches(b):
    """``(..., 4)`` branch array -> ``(..., 2)`` spacing-1/spacing-2 subconcurrences."""
    b = np.asarray(b)
    return np.stack([np.maximum(b[..., 0], b[..., 1]), np.maximum(b[..., 2], b[..., 3])], axis=-1)
