"""Topological semantics and satisfiability games for hybrid logic H(E)."""

from .formula import parse
from .game import solve
from .model import TopoModel, check_truth
from .topo import FiniteSpace

__all__ = ["FiniteSpace", "TopoModel", "check_truth", "parse", "solve"]
