"""Finite-index normal subgroup chains, Cayley graph widths and largeness witnesses."""
from .abelian import FiniteAbelianGroup, IntMatrix, smith_normal_form
from .chains import Chain, build_chain
from .coset_enum import CosetTable, todd_coxeter
from .errors import LargenessError, PreconditionError, ResourceLimitError
from .presentation import Presentation, parse_presentation
from .witness import largeness_witness

__all__ = ["Chain", "CosetTable", "FiniteAbelianGroup", "IntMatrix", "LargenessError",
           "Presentation", "PreconditionError", "ResourceLimitError", "build_chain",
           "largeness_witness", "parse_presentation", "smith_normal_form", "todd_coxeter"]
__version__ = "0.1.0"
