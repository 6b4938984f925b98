"""Exact F_p computations for affine sl2 vertex algebras in characteristic p."""
from modvertex.kernels import BACKEND
from modvertex.scalars import FpScalar, KPoly, Prime, fp_binom

__version__ = "0.1.0"
__all__ = ["BACKEND", "FpScalar", "KPoly", "Prime", "fp_binom", "__version__"]
