"""Exact verification of the 2-adic monodromy of the hyperelliptic family
y^2 = (x - a1)...(x - a_{2g+1}) and of its genus-one 4-torsion field."""

from .report import SCHEMA_VERSION, VerificationReport

__version__ = "0.1.0"

__all__ = ["SCHEMA_VERSION", "VerificationReport", "__version__"]
