"""Exact cellular models of quasilocal operators on the line and shifted Frobenius structures.

Submodules:

``exact``        rational linear algebra (elimination, solve, kernels)
``cells``        cellular chains on R^n, completed periodic chains
``qloc``         translation-invariant quasilocal operators and their composition
``frob``         Frob_1, graph words and the generator catalog
``obstruction``  the obstruction pipeline and its reports
``cli``          the ``qlocfrob`` command
"""

from .cells import Chain, CompletedChain, boundary, cell, h0_class, omega, tensor
from .exact import Echelon, RationalMatrix, format_rational, kernel_basis, rank, solve
from .frob import FrobElement, GeneratorRecord, catalog_by_id, frob_act, frob_compose, generator_catalog
from .obstruction import (Assignment, PipelineConfig, obstruction, run_dioperadic, run_nogo)
from .qloc import (InvariantOperator, Wiring, apply, apply_completed, class_coeff, compose,
                   comult_paper, homology_dims, identity_op, mult_paper, op_boundary, permute,
                   solve_primitive)

__version__ = "0.1.0"

__all__ = [
    "Assignment", "Chain", "CompletedChain", "Echelon", "FrobElement", "GeneratorRecord",
    "InvariantOperator", "PipelineConfig", "RationalMatrix", "Wiring", "apply", "apply_completed",
    "boundary", "catalog_by_id", "cell", "class_coeff", "compose", "comult_paper", "format_rational",
    "frob_act", "frob_compose", "generator_catalog", "h0_class", "homology_dims", "identity_op",
    "kernel_basis", "mult_paper", "obstruction", "omega", "op_boundary", "permute", "rank",
    "run_dioperadic", "run_nogo", "solve", "solve_primitive", "tensor",
]
