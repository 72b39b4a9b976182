"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A physical or numerical configuration violates its invariants."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


class AnalysisError(RuntimeError):
    """A post-processing step was asked to operate outside its valid window."""
