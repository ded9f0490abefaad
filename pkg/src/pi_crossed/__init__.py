# pi_crossed/__init__.py
"""
pi-crossed top-level package.

Finite truncations of the operators behind partial-isometric crossed
products by semigroups, and a suite runner that checks their identities.

▪ The math library lives in `linalg`, `spaces`, `ops`, `reps`, `algebra`,
  `universal` and `sigma`.
▪ `pi_crossed.suites` holds the named verification suites and their runner;
  importing the package does not discover them.
"""

from pi_crossed.linalg import Tolerance
from pi_crossed.ops import Operator, guarded_norm, guarded_residual
from pi_crossed.report import CheckRecord, VerificationReport
from pi_crossed.spaces import SemigroupElement, enumerate_semigroup
from pi_crossed.universal import NormalForm, Word, evaluate, normalize

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Tolerance",
    "Operator",
    "guarded_norm",
    "guarded_residual",
    "CheckRecord",
    "VerificationReport",
    "SemigroupElement",
    "enumerate_semigroup",
    "NormalForm",
    "Word",
    "evaluate",
    "normalize",
]
