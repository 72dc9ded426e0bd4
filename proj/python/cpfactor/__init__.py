"""Completely positive factorization: A = B B^T with entrywise-nonnegative B.

The heavy lifting lives in the C++ extension module ``cpfactor._core``; this
package re-exports its public surface.
"""

from ._core import (
    CpfactorError,
    Result,
    a4_explicit_factor,
    baseline_solve,
    dominant_cpf,
    factorize,
    generate,
    objective,
    procrustes,
    rel_error,
    special_matrix,
    sym_factor,
)

__all__ = [
    "CpfactorError",
    "Result",
    "a4_explicit_factor",
    "baseline_solve",
    "dominant_cpf",
    "factorize",
    "generate",
    "objective",
    "procrustes",
    "rel_error",
    "special_matrix",
    "sym_factor",
]
