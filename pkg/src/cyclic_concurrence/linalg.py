"""Dense complex linear algebra for registers of at most six qubits.

Every routine accepts a single matrix (or vector) or a stack of them along the
leading axes, so that batches of reduced density matrices can be processed
without Python-level loops.

Qubit order is big-endian throughout: qubit 0 is the most significant bit of
the computational-basis index.
"""

import numpy as np

from .errors import ValidationError

MAX_QUBITS = 6
MAX_DIM = 2**MAX_QUBITS

# Off-diagonal magnitude at which the cyclic Jacobi sweep is considered converged.
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60

HERMITIAN_TOL = 1e-10
# Eigenvalues of a PSD matrix with magnitude below this are roundoff and become 0.
ROUNDOFF_FLOOR = 1e-14
TINY = 1e-200

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_YY = np.kron(_SIGMA_Y, _SIGMA_Y).real


def kron(a, b):
    """Kronecker product of two matrices (or vectors).

    Raises
    ------
    ValueError
        If the product would exceed a 64 x 64 matrix.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    rows = (a.shape[0] if a.ndim else 1) * (b.shape[0] if b.ndim else 1)
    cols = (a.shape[1] if a.ndim > 1 else 1) * (b.shape[1] if b.ndim > 1 else 1)
    if rows > MAX_DIM or cols > MAX_DIM:
        raise ValueError(f"kron result {rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}")
    return np.kron(a, b)


def num_qubits(dim):
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return n


def partial_trace(state, keep):
    """Reduced density matrix of the qubits in ``keep``.

    Parameters
    ----------
    state : array_like, shape (..., 2**n)
        Pure state vector(s) in the computational basis.
    keep : sequence of int
        Zero-based qubit indices to keep, in the order they should appear in
        the output tensor factors.

    Returns
    -------
    ndarray, shape (..., 2**k, 2**k)
    """
    psi = np.asarray(state, dtype=complex)
    n = num_qubits(psi.shape[-1])
    keep = [int(q) for q in keep]
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate qubit index in keep={keep}")
    if any(q < 0 or q >= n for q in keep):
        raise ValueError(f"keep={keep} out of range for {n} qubits")
    batch = psi.shape[:-1]
    nb = len(batch)
    traced = [q for q in range(n) if q not in keep]
    t = psi.reshape(batch + (2,) * n)
    t = np.transpose(t, tuple(range(nb)) + tuple(nb + q for q in keep + traced))
    t = t.reshape(batch + (2 ** len(keep), 2 ** len(traced)))
    return t @ np.conj(np.swapaxes(t, -1, -2))


def _check_hermitian(m, tol=HERMITIAN_TOL):
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {m.shape}")
    if m.shape[-1] > MAX_DIM:
        raise ValueError(f"matrix size {m.shape[-1]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    dev = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))), initial=0.0)
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3g})")


def _rotation(app, aqq, apq):
    """Complex Jacobi rotation annihilating ``apq`` of [[app, apq], [conj(apq), aqq]].

    Returns ``(c, s, phase)`` for G = [[c, s], [-s conj(phase), c conj(phase)]],
    so that G^H M G is diagonal.
    """
    r = np.abs(apq)
    # entries this small are already zero at any working tolerance; dividing
    # by subnormal magnitudes would overflow the phase
    active = r > TINY
    safe_r = np.where(active, r, 1.0)
    phase = np.where(active, apq / safe_r, 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        theta = (aqq - app) / (2.0 * safe_r)
        t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(theta == 0, 1.0, t)
    t = np.where(active & np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c, phase


def _rotate_columns(x, p, q, c, s, phase):
    # x has layout (rows, cols, batch)
    xp = x[:, p].copy()
    xq = x[:, q]
    g10 = -s * np.conj(phase)
    g11 = c * np.conj(phase)
    x[:, p] = c * xp + g10 * xq
    x[:, q] = s * xp + g11 * xq


def _batch_last(m):
    lead = m.shape[:-2]
    size = m.shape[-1]
    x = np.moveaxis(m.reshape((-1,) + m.shape[-2:]), 0, -1)
    return np.ascontiguousarray(x), lead, size


def hermitian_eig(m, tol=JACOBI_TOL):
    """Eigendecomposition of Hermitian matrices by cyclic Jacobi rotations.

    Each sweep visits every (p, q) pair once and annihilates the element
    ``A[p, q]`` with a complex Givens rotation; sweeps stop when every
    off-diagonal magnitude in the batch is below ``tol``.

    Returns
    -------
    eigenvalues : ndarray, shape (..., N)
        Real, sorted in descending order.
    eigenvectors : ndarray, shape (..., N, N)
        Column ``i`` is the unit eigenvector for ``eigenvalues[..., i]``.
    """
    a = np.array(m, dtype=complex)
    _check_hermitian(a)
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    x, lead, size = _batch_last(a)
    v = np.zeros_like(x)
    v[np.arange(size), np.arange(size)] = 1.0
    pairs = [(p, q) for p in range(size - 1) for q in range(p + 1, size)]
    scale = max(1.0, float(np.max(np.abs(x), initial=0.0)))
    off_mask = ~np.eye(size, dtype=bool)

    for _ in range(JACOBI_MAX_SWEEPS):
        if not pairs or np.max(np.abs(x[off_mask]), initial=0.0) < tol * scale:
            break
        for p, q in pairs:
            c, s, phase = _rotation(x[p, p].real, x[q, q].real, x[p, q])
            _rotate_columns(x, p, q, c, s, phase)
            # rows: A <- G^H A, i.e. the conjugate rotation applied to rows
            rp = x[p].copy()
            rq = x[q]
            x[p] = c * rp - s * phase * rq
            x[q] = s * rp + c * phase * rq
            x[p, q] = 0.0
            x[q, p] = 0.0
            _rotate_columns(v, p, q, c, s, phase)
    else:
        raise ValidationError("Jacobi iteration did not converge")

    w = np.real(x[np.arange(size), np.arange(size)]).T.reshape(lead + (size,))
    v = np.moveaxis(v, -1, 0).reshape(lead + (size, size))
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    return w, v


def singular_values(m, tol=JACOBI_TOL):
    """Singular values of square matrices by one-sided (Hestenes) Jacobi.

    Columns are rotated pairwise until mutually orthogonal; the singular
    values are then the column norms.  Unlike square roots of Gram-matrix
    eigenvalues, small singular values keep absolute accuracy of order
    ``eps * |m|``.

    Returns
    -------
    ndarray, shape (..., N)
        Nonnegative, sorted in descending order.
    """
    a = np.array(m, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    x, lead, size = _batch_last(a)
    pairs = [(p, q) for p in range(size - 1) for q in range(p + 1, size)]

    # column pairs whose overlap is below this are numerically orthogonal
    floor = 1e-30 * np.max(np.sum(np.abs(x) ** 2, axis=0), axis=0, initial=0.0)

    for _ in range(JACOBI_MAX_SWEEPS):
        worst = 0.0
        for p, q in pairs:
            xp = x[:, p]
            xq = x[:, q]
            alpha = np.sum(np.abs(xp) ** 2, axis=0)
            beta = np.sum(np.abs(xq) ** 2, axis=0)
            gamma = np.sum(np.conj(xp) * xq, axis=0)
            denom = np.sqrt(alpha * beta)
            rel = np.where(np.abs(gamma) > floor, np.abs(gamma) / np.where(denom > 0, denom, 1.0), 0.0)
            worst = max(worst, float(np.max(rel, initial=0.0)))
            c, s, phase = _rotation(alpha, beta, np.where(denom > 0, gamma, 0.0))
            _rotate_columns(x, p, q, c, s, phase)
        if worst < tol:
            break
    else:
        raise ValidationError("one-sided Jacobi iteration did not converge")

    sv = np.sqrt(np.sum(np.abs(x) ** 2, axis=0)).T.reshape(lead + (size,))
    return -np.sort(-sv, axis=-1)


def clamp_psd_eigenvalues(w, negative_tol):
    """Zero roundoff-sized eigenvalues; reject clearly negative ones."""
    w = np.asarray(w, dtype=float)
    worst = np.min(w, initial=0.0)
    if worst < -negative_tol:
        raise ValidationError(f"matrix is not positive semidefinite (eigenvalue {worst:.3g})")
    return np.where(w < ROUNDOFF_FLOOR, 0.0, w)


def matrix_sqrt_psd(m, negative_tol=1e-8):
    """Principal square root of Hermitian positive semidefinite matrices."""
    w, v = hermitian_eig(m)
    w = clamp_psd_eigenvalues(w, negative_tol)
    root = (v * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return 0.5 * (root + np.conj(np.swapaxes(root, -1, -2)))


def spin_flip(rho):
    """Spin-flipped two-qubit matrix ``(Y x Y) conj(rho) (Y x Y)``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise ValueError(f"spin flip needs 4x4 matrices, got shape {rho.shape}")
    return SIGMA_YY @ np.conj(rho) @ SIGMA_YY
