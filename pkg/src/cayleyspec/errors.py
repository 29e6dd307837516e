"""Exception types shared across the package."""


class CayleyError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CayleyError):
    """A structured description (config mapping or constructor input) is malformed."""


class InvalidAction(CayleyError):
    """Parameters do not define a valid group action or presentation."""


class CapacityExceeded(CayleyError):
    """A construction would exceed the configured size cap."""


class NotClassFunction(CayleyError):
    """Operation requires a class function; carries a witness if one was found."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class HypothesesViolated(CayleyError):
    """The split-spectrum invariance conditions failed; carries the report."""

    def __init__(self, report):
        super().__init__(
            "color function violates the invariance conditions of the "
            "split-extension spectrum formula"
        )
        self.report = report


class IrrepValidationFailed(CayleyError):
    """An irrep table failed validation; carries the report."""

    def __init__(self, report):
        issues = getattr(report, "issues", None)
        detail = "; ".join(str(issue) for issue in issues) if issues else "unknown issue"
        super().__init__(f"irrep table failed validation: {detail}")
        self.report = report


class LayerNotInvariant(CayleyError):
    """A layer set is not closed under exponent multiplication by r."""

    def __init__(self, message, layer_index=None, exponent=None):
        super().__init__(message)
        self.layer_index = layer_index
        self.exponent = exponent


class DimensionMismatch(CayleyError):
    """Operands disagree on dimension or total multiplicity."""


class IrrepsUnavailable(CayleyError):
    """No built-in irreducible representations exist for this group kind."""
