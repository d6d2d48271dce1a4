"""Pairwise concurrence of cyclically symmetric qubit states."""

__version__ = "0.1.0"

from .concurrence import concurrence, pair_rdm, subconcurrence, wootters_spectrum  # noqa: E402
from .errors import ValidationError, XFormError  # noqa: E402
from .states import CSState, necklaces, relabel  # noqa: E402

__all__ = [
    "CSState",
    "ValidationError",
    "XFormError",
    "__version__",
    "concurrence",
    "necklaces",
    "pair_rdm",
    "relabel",
    "subconcurrence",
    "wootters_spectrum",
]
