"""Exception types raised across the package."""


class FaradayCTError(Exception):
    """Base class for all package errors."""


class RegisterError(FaradayCTError, ValueError):
    """Invalid register construction or addressing."""


class DuplicateLabelError(RegisterError):
    pass


class UnknownLabelError(RegisterError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class NotNormalizedError(RegisterError):
    pass


class NonUnitaryError(RegisterError):
    pass


class KindMismatchError(RegisterError):
    pass


class NonUnitPhaseError(FaradayCTError, ValueError):
    """A lossy reflection (|r| < 1) reached the gate layer in strict mode."""


class CavitySingularityError(FaradayCTError, ZeroDivisionError):
    """The reflection-coefficient denominator vanishes for this parameter set."""


class ParityRuleError(FaradayCTError, ValueError):
    """Wave-plate kind does not match the control-count parity rule."""


class ProtocolSpecError(FaradayCTError, ValueError):
    pass


class NoPauliCorrection(FaradayCTError):
    """No element of {I, X, Z, ZX}^k restores the intended payload."""


class TableFormatError(FaradayCTError, ValueError):
    """A bundled or user-supplied table/equation file is malformed."""
