"""Cyclically symmetric states in the necklace (cyclic-orbit) basis.

A cyclically symmetric (CS) state of ``n`` qubits assigns a single amplitude
to every orbit of ``n``-bit strings under rotation.  The orbit basis element
for a representative string ``s`` is the uniform superposition of the
distinct rotations of ``s``, normalized by the square root of the orbit size.

Party labels are zero-based here; bit strings are big-endian, so character 0
of a string is qubit 0.
"""

import functools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import MAX_QUBITS, num_qubits

NORM_TOL = 1e-12
MIN_QUBITS = 2


def _rotations(bits):
    return {bits[i:] + bits[:i] for i in range(len(bits))}


@dataclass(frozen=True)
class Necklace:
    """One cyclic orbit of ``n``-bit strings."""

    n: int
    representative: str
    orbit_size: int

    @property
    def weight(self):
        return self.representative.count("1")

    @property
    def members(self):
        return sorted(_rotations(self.representative))

    @property
    def period(self):
        return self.n // self.orbit_size


def orbit_size(bits):
    """Number of distinct rotations of a bit string."""
    return len(_rotations(bits))


def canonical(bits):
    """Lexicographically smallest rotation of ``bits``."""
    return min(_rotations(bits))


@functools.lru_cache(maxsize=None)
def necklaces(n, even_only=False):
    """All cyclic orbits of ``n``-bit strings, sorted by representative.

    Parameters
    ----------
    n : int
        Number of qubits, ``1 <= n <= 6``.
    even_only : bool
        Keep only orbits of even Hamming weight (the support of CSX states).
    """
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n={n} out of range 1..{MAX_QUBITS}")
    reps = {canonical(format(x, f"0{n}b")) for x in range(2**n)}
    out = [Necklace(n, r, orbit_size(r)) for r in sorted(reps)]
    if even_only:
        out = [nk for nk in out if nk.weight % 2 == 0]
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _orbit_index(n):
    return {nk.representative: i for i, nk in enumerate(necklaces(n))}


@functools.lru_cache(maxsize=None)
def embedding_matrix(n):
    """Real ``(2**n, n_orbits)`` matrix whose columns are the orbit basis kets."""
    orbits = necklaces(n)
    e = np.zeros((2**n, len(orbits)))
    for j, nk in enumerate(orbits):
        for s in nk.members:
            e[int(s, 2), j] = 1.0 / math.sqrt(nk.orbit_size)
    e.setflags(write=False)
    return e


@functools.lru_cache(maxsize=None)
def csx_mask(n):
    """Boolean mask over ``necklaces(n)`` selecting even-weight orbits."""
    mask = np.array([nk.weight % 2 == 0 for nk in necklaces(n)])
    mask.setflags(write=False)
    return mask


class CSState:
    """A normalized cyclically symmetric pure state.

    Parameters
    ----------
    n : int
        Number of qubits, ``2 <= n <= 6``.
    amplitudes : array_like of complex
        One amplitude per orbit of ``necklaces(n)``.
    normalize : bool
        Rescale to unit norm instead of rejecting non-normalized input.
    """

    __slots__ = ("n", "amplitudes")

    def __init__(self, n, amplitudes, normalize=False):
        if not MIN_QUBITS <= n <= MAX_QUBITS:
            raise ValueError(f"n={n} out of range {MIN_QUBITS}..{MAX_QUBITS}")
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (len(necklaces(n)),):
            raise ValueError(
                f"{n}-qubit CS state needs {len(necklaces(n))} amplitudes, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm == 0:
                raise ValidationError("cannot normalize the zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"CS state norm is {norm!r}, expected 1")
        amps.setflags(write=False)
        self.n = n
        self.amplitudes = amps

    @classmethod
    def from_orbits(cls, n, coefficients, normalize=False):
        """Build from a ``{representative: amplitude}`` mapping.

        Representatives may be any member of their orbit.
        """
        index = _orbit_index(n)
        amps = np.zeros(len(index), dtype=complex)
        for bits, value in coefficients.items():
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise ValueError(f"{bits!r} is not an {n}-bit string")
            amps[index[canonical(bits)]] += value
        return cls(n, amps, normalize=normalize)

    @property
    def orbits(self):
        return necklaces(self.n)

    def amplitude(self, bits):
        return self.amplitudes[_orbit_index(self.n)[canonical(bits)]]

    @property
    def is_csx(self):
        return bool(np.all(self.amplitudes[~csx_mask(self.n)] == 0))

    def vector(self):
        return embed(self)

    def __eq__(self, other):
        if not isinstance(other, CSState):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash((self.n, self.amplitudes.tobytes()))

    def __repr__(self):
        terms = ", ".join(
            f"{nk.representative}: {a:.6g}"
            for nk, a in zip(self.orbits, self.amplitudes)
            if a != 0
        )
        return f"CSState(n={self.n}, {{{terms}}})"

    def to_dict(self):
        return {
            "n": self.n,
            "orbits": [
                {"rep": nk.representative, "re": float(a.real), "im": float(a.imag)}
                for nk, a in zip(self.orbits, self.amplitudes)
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data, normalize=False):
        coeffs = {}
        try:
            for entry in data["orbits"]:
                coeffs[entry["rep"]] = coeffs.get(entry["rep"], 0) + complex(
                    entry.get("re", 0.0), entry.get("im", 0.0)
                )
            n = int(data["n"])
        except (KeyError, TypeError, AttributeError) as err:
            raise ValueError(f"malformed state record: missing or invalid {err}") from None
        return cls.from_orbits(n, coeffs, normalize=normalize)

    @classmethod
    def from_json(cls, text, normalize=False):
        return cls.from_dict(json.loads(text), normalize=normalize)


def embed(state):
    """Computational-basis vector of a CS state (length ``2**n``)."""
    return embedding_matrix(state.n) @ state.amplitudes


def embed_batch(n, amplitudes):
    """Embed a ``(..., n_orbits)`` stack of orbit amplitudes."""
    return np.asarray(amplitudes, dtype=complex) @ embedding_matrix(n).T


def project_cs(vector):
    """Project a state vector onto the CS subspace.

    Returns
    -------
    state : CSState
        The orbit-averaged amplitudes, renormalized.
    residual : float
        Norm of the component orthogonal to the CS subspace; zero exactly when
        the input is invariant under cyclic shifts.
    """
    v = np.asarray(vector, dtype=complex)
    n = num_qubits(v.size)
    e = embedding_matrix(n)
    amps = e.T @ v
    residual = float(np.linalg.norm(v - e @ amps))
    return CSState(n, amps, normalize=True), residual


def permute_qubits(vector, destination):
    """Move qubit ``i`` to position ``destination[i]`` (works on stacks)."""
    v = np.asarray(vector, dtype=complex)
    n = num_qubits(v.shape[-1])
    if sorted(destination) != list(range(n)):
        raise ValueError(f"{destination} is not a permutation of 0..{n - 1}")
    batch = v.shape[:-1]
    nb = len(batch)
    t = v.reshape(batch + (2,) * n)
    order = [0] * n
    for src, dst in enumerate(destination):
        order[dst] = src
    t = np.transpose(t, tuple(range(nb)) + tuple(nb + q for q in order))
    return t.reshape(v.shape)


def cyclic_shift(vector, steps=1):
    """Relabel parties ``i -> i + steps (mod n)``."""
    n = num_qubits(np.shape(vector)[-1])
    return permute_qubits(vector, [(i + steps) % n for i in range(n)])


@dataclass(frozen=True)
class Relabeling:
    """Party relabeling ``i -> m*i mod n``; bijective only for gcd(m, n) = 1."""

    n: int
    m: int

    def __post_init__(self):
        if math.gcd(self.m, self.n) != 1:
            raise ValueError(f"i -> {self.m}*i mod {self.n} is not invertible")

    @property
    def mapping(self):
        return tuple(self.m * i % self.n for i in range(self.n))

    def apply_bits(self, bits):
        out = ["0"] * self.n
        for i, dst in enumerate(self.mapping):
            out[dst] = bits[i]
        return "".join(out)

    def inverse(self):
        return Relabeling(self.n, pow(self.m, -1, self.n))

    @functools.cached_property
    def orbit_permutation(self):
        """Index map: orbit ``j`` of the input lands on orbit ``perm[j]``."""
        index = _orbit_index(self.n)
        return np.array(
            [index[canonical(self.apply_bits(nk.representative))] for nk in necklaces(self.n)]
        )


def relabel(state, m):
    """Move the content of party ``i`` to party ``m*i mod n``.

    Relabelings commute with rotations up to a rotation, so each orbit maps
    onto a single orbit of the same size and the amplitudes are simply
    permuted.  A pair at spacing ``k`` in ``state`` becomes a pair at spacing
    ``m*k mod n`` in the result.
    """
    r = m if isinstance(m, Relabeling) else Relabeling(state.n, int(m))
    if r.n != state.n:
        raise ValueError(f"relabeling is for n={r.n}, state has n={state.n}")
    amps = np.zeros_like(state.amplitudes)
    amps[r.orbit_permutation] = state.amplitudes
    return CSState(state.n, amps)


def relabel_batch(n, amplitudes, m):
    """Apply :func:`relabel` to a ``(..., n_orbits)`` stack of amplitudes."""
    perm = Relabeling(n, int(m)).orbit_permutation
    amplitudes = np.asarray(amplitudes)
    out = np.zeros_like(amplitudes)
    out[..., perm] = amplitudes
    return out


def dicke(n, j):
    """Symmetric Dicke state with ``j`` excitations, in the orbit basis."""
    if not 0 <= j <= n:
        raise ValueError(f"excitation count j={j} out of range 0..{n}")
    norm = math.sqrt(math.comb(n, j))
    amps = [
        math.sqrt(nk.orbit_size) / norm if nk.weight == j else 0.0 for nk in necklaces(n)
    ]
    return CSState(n, amps, normalize=True)


def adjacent_maximizer(size):
    """Known maximizer of adjacent-pair concurrence for 2 or 3 qubits.

    The Bell state for two qubits and the W state for three.
    """
    if size == 2:
        return np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    if size == 3:
        return dicke(3, 1).vector()
    raise ValueError(f"no known adjacent-concurrence maximizer for {size} qubits")


def theorem1_product(n, k):
    """Interleaved product of ``k`` copies of the ``n/k``-qubit maximizer.

    Copy ``i`` (``0 <= i < k``) lives on parties ``i, i + k, i + 2k, ...``, so
    parties at spacing ``k`` share a block and every other spacing pairs
    qubits from different blocks.
    """
    if k < 1 or n % k:
        raise ValueError(f"k={k} does not divide n={n}")
    size = n // k
    if size not in (2, 3):
        raise ValueError(f"n/k={size}: a maximizer is only known for 2 or 3 qubits")
    block = adjacent_maximizer(size)
    vec = block
    for _ in range(k - 1):
        vec = np.kron(vec, block)
    # qubit (i*size + j) of the block-major product sits at party k*j + i
    destination = [k * j + i for i in range(k) for j in range(size)]
    vec = permute_qubits(vec, destination)
    state, residual = project_cs(vec)
    if residual > NORM_TOL:
        raise ValidationError(f"product state is not cyclically invariant (residual {residual:.3g})")
    return state
