from ._core import (
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    Expr,
    InvalidStateError,
    ParseError,
    Problem,
    Series,
    UnresolvedError,
    fd_eigenvalue,
    solve,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "Error",
    "Expr",
    "InvalidStateError",
    "ParseError",
    "Problem",
    "Series",
    "UnresolvedError",
    "fd_eigenvalue",
    "solve",
]
