"""Eigenvalues of singular matrix pencils."""

from ._singpencil import (
    NumericalFailure,
    ParseError,
    double_eig,
    generate,
    intersect,
    normal_rank,
    read_mtx,
    solve,
    solve_2ep,
    write_mtx,
)

__all__ = [
    "NumericalFailure",
    "ParseError",
    "double_eig",
    "generate",
    "intersect",
    "normal_rank",
    "read_mtx",
    "solve",
    "solve_2ep",
    "write_mtx",
]
