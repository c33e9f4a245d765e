"""Exception types shared across the package."""


class QtmChainError(Exception):
    """Base class for all package errors."""


class DomainError(QtmChainError, ValueError):
    """Argument outside the documented domain of an operation."""


class PoleError(QtmChainError, ArithmeticError):
    """Evaluation requested on top of a pole of a q-function.

    Attributes
    ----------
    level : q-function level whose zero was hit.
    argument : complex argument at which |q| fell below the pole threshold.
    root : the offending Bethe root (None for a Phi factor).
    """

    def __init__(self, level, argument, root=None):
        self.level = level
        self.argument = argument
        self.root = root
        what = f"q_{level}" if root is None else f"q_{level} (root {root})"
        super().__init__(f"pole of {what} hit at x = {argument}")


class UnsupportedSubsetError(QtmChainError, ValueError):
    """Vertex subset is not expressible as a range tableau."""


class ConvergenceError(QtmChainError, RuntimeError):
    """Iterative routine failed to converge; carries diagnostics."""

    def __init__(self, message, residual=None, iterations=None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(message)


class GridTooSmallError(QtmChainError, RuntimeError):
    """Function to be convolved has not decayed to its asymptote inside the window."""

    def __init__(self, tail, tol):
        self.tail = tail
        self.tol = tol
        super().__init__(
            f"tail magnitude {tail:.3e} at the grid edge exceeds {tol:.1e}; "
            "increase the half-width"
        )


class InconsistencyError(QtmChainError, RuntimeError):
    """Cross-check between two independently transcribed quantities failed."""


class UnreachableDensityError(QtmChainError, RuntimeError):
    """Density targets could not be matched by any chemical potential."""
