"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical or physical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative scheme exhausted its budget without converging."""


class InvalidCovarianceError(ValueError):
    """A matrix fails the requirements of a two-mode covariance matrix."""


class SingularMatrixError(InvalidCovarianceError):
    """A (block) determinant vanished where the formulas require it nonzero."""


class UncertaintyViolationError(InvalidCovarianceError):
    """The generalized two-mode uncertainty relation is violated."""


class OracleMismatchError(RuntimeError):
    """Two independent evaluation pathways disagreed beyond tolerance."""


class ConfigError(ValueError):
    """Invalid scenario configuration; carries the full list of violations."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ApproximationDomainWarning(UserWarning):
    """An approximation was evaluated outside its stated range of validity."""
