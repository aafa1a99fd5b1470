"""Exception hierarchy shared by all modules."""


class CostGreedyError(Exception):
    """Base class for library errors."""


class StructuralError(CostGreedyError):
    """Malformed instance, realization or policy tree."""


class PreconditionError(CostGreedyError, ValueError):
    """An operation was called outside its domain."""


class ConfigurationError(CostGreedyError, ValueError):
    """Bad model parameters or instance/scenario configuration."""


class CapExceededError(CostGreedyError):
    """Exhaustive evaluation would exceed the configured enumeration cap."""


class CostModelViolation(CostGreedyError):
    """A cost model broke one of its axioms during a run."""


class MinimalDependencyError(CostGreedyError):
    """Partial-realization evaluation requested from a utility without minimal dependency."""


class InconsistentEvidenceError(CostGreedyError):
    """Observed labels have zero prior mass under the hypothesis class."""
