"""Pairwise concurrence and subconcurrence of two-qubit density matrices.

The Wootters spectrum is obtained as the singular values of
``sqrt(rho) (Y x Y) conj(sqrt(rho))``.  Their squares are the eigenvalues of
``sqrt(rho) rho~ sqrt(rho)`` (equivalently of ``rho rho~``), but taking them
as singular values avoids square roots of roundoff-level eigenvalues, which
would otherwise cost eight digits for rank-deficient reduced states.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, XFormError
from .linalg import SIGMA_YY, _check_hermitian, hermitian_eig, matrix_sqrt_psd
from .linalg import partial_trace, singular_values
from .states import embed_batch

PSD_TOL = 1e-10
X_TOL = 1e-10

# (row, col) positions that must vanish in an X-form matrix
_NON_X = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]


def _check_spacing(n, spacing):
    if not 1 <= spacing <= n // 2:
        raise ValueError(f"spacing {spacing} out of range 1..{n // 2} for n={n}")


def pair_rdm(state, spacing):
    """Reduced density matrix of parties ``(0, spacing)`` of a CS state."""
    _check_spacing(state.n, spacing)
    return partial_trace(state.vector(), [0, spacing])


def pair_rdms(n, amplitudes, spacing):
    """Batched :func:`pair_rdm` for a ``(..., n_orbits)`` stack of amplitudes."""
    _check_spacing(n, spacing)
    return partial_trace(embed_batch(n, amplitudes), [0, spacing])


def _as_two_qubit(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise ValueError(f"expected 4x4 density matrices, got shape {rho.shape}")
    return rho


def wootters_spectrum(rho):
    """Descending square roots of the eigenvalues of ``rho rho~``.

    Parameters
    ----------
    rho : array_like, shape (..., 4, 4)
        Two-qubit density matrix or a stack of them.

    Returns
    -------
    ndarray, shape (..., 4)

    Raises
    ------
    ValidationError
        If ``rho`` is not Hermitian or has an eigenvalue below ``-1e-10``.
    """
    rho = _as_two_qubit(rho)
    root = matrix_sqrt_psd(rho, negative_tol=PSD_TOL)
    return singular_values(root @ SIGMA_YY @ np.conj(root))


def subconcurrence(rho):
    """Unclamped ``l1 - l2 - l3 - l4`` of the Wootters spectrum."""
    lam = wootters_spectrum(rho)
    sc = lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3]
    return float(sc) if np.ndim(sc) == 0 else sc


def concurrence(rho):
    """Wootters concurrence, ``max(0, subconcurrence)``."""
    sc = subconcurrence(rho)
    return max(0.0, sc) if np.ndim(sc) == 0 else np.maximum(0.0, sc)


@dataclass(frozen=True)
class XParams:
    """Entries of an X-form two-qubit density matrix.

    ``alpha..delta`` are the diagonal populations of |00>, |01>, |10>, |11>;
    ``mu`` is the |01><10| coherence and ``nu`` the |00><11| coherence.
    Fields may be scalars or equally shaped arrays.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    mu: complex
    nu: complex

    def matrix(self):
        shape = np.shape(self.alpha)
        m = np.zeros(shape + (4, 4), dtype=complex)
        m[..., 0, 0] = self.alpha
        m[..., 1, 1] = self.beta
        m[..., 2, 2] = self.gamma
        m[..., 3, 3] = self.delta
        m[..., 1, 2] = self.mu
        m[..., 2, 1] = np.conj(self.mu)
        m[..., 0, 3] = self.nu
        m[..., 3, 0] = np.conj(self.nu)
        return m


def extract_x(rho, tol=X_TOL):
    """Read the six X-form entries out of a density matrix.

    Raises
    ------
    XFormError
        If any of the eight off-pattern entries exceeds ``tol`` in magnitude;
        the largest offender is reported.
    ValidationError
        If ``rho`` is not Hermitian positive semidefinite.
    """
    rho = _as_two_qubit(rho)
    _check_hermitian(rho)
    off = np.stack([np.abs(rho[..., i, j]) for i, j in _NON_X], axis=-1)
    worst = float(np.max(off, initial=0.0))
    if worst > tol:
        flat = np.unravel_index(np.argmax(off), off.shape)
        pos = _NON_X[flat[-1]]
        raise XFormError(
            f"not an X-form matrix: |rho{pos}| = {worst:.3g} exceeds {tol:g}",
            index=pos,
            magnitude=worst,
        )
    w, _ = hermitian_eig(rho)
    if np.min(w, initial=0.0) < -PSD_TOL:
        raise ValidationError(f"matrix is not positive semidefinite (eigenvalue {np.min(w):.3g})")
    diag = np.real(np.diagonal(rho, axis1=-2, axis2=-1))
    return XParams(
        alpha=diag[..., 0],
        beta=diag[..., 1],
        gamma=diag[..., 2],
        delta=diag[..., 3],
        mu=rho[..., 1, 2],
        nu=rho[..., 0, 3],
    )


def x_subconcurrences(p):
    """The two unclamped X-state branch values ``(s_mu, s_nu)``.

    ``s_mu = 2(|mu| - sqrt(alpha delta))`` and
    ``s_nu = 2(|nu| - sqrt(beta gamma))``.  For a positive semidefinite X
    matrix the subconcurrence equals ``max(s_mu, s_nu)``.
    """
    s_mu = 2.0 * (np.abs(p.mu) - np.sqrt(np.clip(p.alpha * p.delta, 0.0, None)))
    s_nu = 2.0 * (np.abs(p.nu) - np.sqrt(np.clip(p.beta * p.gamma, 0.0, None)))
    return s_mu, s_nu


def x_concurrence(p):
    s_mu, s_nu = x_subconcurrences(p)
    return np.maximum(0.0, np.maximum(s_mu, s_nu))


def spacing_subconcurrences(n, amplitudes, spacings=(1, 2)):
    """Generic subconcurrences of a stack of CS states, one column per spacing."""
    amplitudes = np.atleast_2d(amplitudes)
    cols = [subconcurrence(pair_rdms(n, amplitudes, k)) for k in spacings]
    return np.stack([np.atleast_1d(c) for c in cols], axis=-1)
