"""Paraconsistent reasoning with LLM-grounded valuations.

Thin wrapper over the C++ core: weak Kleene connectives and restricted
quantifier functions over generalized truth values, a formula language with
evaluation and brute-force validity checking, the bilateral factuality
evaluation function with its first-write-wins valuation cache, and the
benchmark metrics (macro F1 given abstention, coverage, truth-value
distributions, bootstrap standard errors).
"""

from bilateral._core import *  # noqa: F401,F403
from bilateral._core import __doc__ as _core_doc  # noqa: F401

try:
    from bilateral._core import __version__  # noqa: F401
except ImportError:  # pragma: no cover
    __version__ = "0.1.0"
