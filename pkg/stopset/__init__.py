try:
    # _version.py will be generated by setuptools_scm at build time
    from ._version import version as __version__  # type: ignore
except Exception:
    # If _version.py is missing (dev environment), fallback to setuptools_scm (if available)
    try:
        from setuptools_scm import get_version as _get_version  # type: ignore
        __version__ = _get_version(root="..", relative_to=__file__)
    except Exception:
        __version__ = "0+unknown"

from .enumerators import Enumerator, brute_force_stopping, brute_force_weight, theorem1_stopping
from .gf2 import BitMatrix, hamming_parity_matrix, parse_matrix, rank_gf2
from .hamming import hamming_Al, hamming_Sl_theorem2, hamming_stopping_enumerator
from .peeling import peel

__all__ = [
    "BitMatrix",
    "Enumerator",
    "brute_force_stopping",
    "brute_force_weight",
    "hamming_Al",
    "hamming_Sl_theorem2",
    "hamming_parity_matrix",
    "hamming_stopping_enumerator",
    "parse_matrix",
    "peel",
    "rank_gf2",
    "theorem1_stopping",
]
