"""Numerical calculus for linear relations in finite-dimensional Krein spaces."""

from .errors import *  # noqa: F401,F403
from .krein import KreinSpace, Decomposition, decomposition_from_contraction, reference_decomposition
from .numeric import Subspace, SpectrumResult
from .relation import LinearRelation, Relation, make_relation, graph_of, classify
from .report import VerificationReport

__version__ = "0.1.0"
