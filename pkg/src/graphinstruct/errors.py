"""Exception hierarchy shared across the package."""


class GraphInstructError(Exception):
    """Base class for all package errors."""


class ConfigError(GraphInstructError):
    """Invalid or incomplete configuration."""


class GraphLoadError(GraphInstructError):
    """Malformed input file, dangling edge, or duplicate node id."""

    def __init__(self, message, path=None, line=None):
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class UnknownNodeError(GraphInstructError):
    """A node id not present in the graph was requested."""

    def __init__(self, node_id):
        super().__init__(f"unknown node id: {node_id!r}")
        self.node_id = node_id


class MissingAttributeError(GraphInstructError):
    """A template referenced an attribute the node does not carry."""

    def __init__(self, node_id, field):
        super().__init__(f"node {node_id!r} has no attribute {field!r}")
        self.node_id = node_id
        self.field = field


class BudgetTooSmallError(GraphInstructError):
    """Token budget does not cover the template boilerplate."""

    def __init__(self, budget, boilerplate, target=None):
        msg = f"budget {budget} is below boilerplate cost {boilerplate}"
        if target is not None:
            msg += f" for target {target!r}"
        super().__init__(msg)
        self.budget = budget
        self.boilerplate = boilerplate
        self.target = target


class InsufficientCotError(GraphInstructError):
    """A CoT quota was requested but no CoT records are available."""


class InsufficientRecordsError(GraphInstructError):
    """Not enough gold-labelled material to fill the requested packages."""


class AllocationError(GraphInstructError):
    """Infeasible package allocation request."""


class TransportError(GraphInstructError):
    """Remote text-generation request failed after retries."""
