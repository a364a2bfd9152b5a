"""Exact computations on planar webs with rational data."""

import os
import sys

if "sympy" not in sys.modules:
    os.environ["SYMPY_GROUND_TYPES"] = "gmpy"

from sympy.polys.domains import QQ as _QQ  # noqa: E402
from gmpy2 import mpq as _mpq  # noqa: E402

if _QQ.dtype is not type(_mpq(0)):
    raise ImportError(
        "webgeom needs sympy's gmpy ground types; set SYMPY_GROUND_TYPES=gmpy "
        "or import webgeom before sympy"
    )

__version__ = "0.1.0"
