"""Exception types shared across the package."""


class HccmError(Exception):
    """Base class for all package-specific errors."""


class UnphysicalStateError(HccmError, ValueError):
    """A requested Gaussian state violates the uncertainty relation."""


class DegenerateSplitterError(HccmError, ValueError):
    """Beam splitter coefficients make the coefficient algebra singular."""


class AnomalousTermInaccessibleError(HccmError, ValueError):
    """The splitter is balanced, so the mixed field-intensity moment cancels."""


class InsufficientDataError(HccmError, ValueError):
    """Too few samples or grid points for the requested estimator."""


class DegenerateDesignError(HccmError, ValueError):
    """Regression design matrix is (numerically) rank deficient."""


class TruncationError(HccmError, ValueError):
    """Fock-space truncation leaks more probability than allowed."""


class ConfigError(HccmError, ValueError):
    """Invalid or unparsable experiment configuration."""


class DataError(HccmError, ValueError):
    """Record files are missing, malformed, or incomplete."""
