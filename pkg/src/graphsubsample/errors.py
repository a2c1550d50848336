"""Exception hierarchy shared by every stage of the pipeline."""


class GraphSubsampleError(Exception):
    pass


class ConfigError(GraphSubsampleError, ValueError):
    """Invalid template, spec or experiment configuration."""


class NumericalError(GraphSubsampleError, ArithmeticError):
    pass


class SvdConvergenceError(NumericalError):
    def __init__(self, shape, sweeps):
        self.shape = tuple(shape)
        self.sweeps = sweeps
        super().__init__(
            f"one-sided Jacobi SVD did not converge for a {shape[0]}x{shape[1]} "
            f"matrix after {sweeps} sweeps"
        )


class SingularOperatorError(NumericalError):
    """Raised when A_S T (or any square system) is numerically singular."""

    def __init__(self, condition, selected=None):
        self.condition = condition
        self.selected = None if selected is None else tuple(selected)
        msg = f"singular sampling operator (condition estimate {condition:.3e})"
        if self.selected is not None:
            msg += f" for selected nodes {list(self.selected)}"
        super().__init__(msg)


class RankDeficientSelectionError(NumericalError):
    def __init__(self, selected, ratio):
        self.selected = tuple(selected)
        self.ratio = ratio
        super().__init__(
            f"selection yields rank-deficient row block: nodes {list(self.selected)} "
            f"(sigma_min/sigma_max = {ratio:.3e})"
        )


class IsolatedNodeError(NumericalError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"node {node} has zero degree; D^-1/2 is undefined")


class StageError(GraphSubsampleError):
    """Wraps a failure with the name of the pipeline stage it came from."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
