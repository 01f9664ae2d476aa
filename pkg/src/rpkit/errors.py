"""Error taxonomy shared by all rpkit modules."""


class RpkitError(Exception):
    """Base class for all rpkit errors."""


class InvalidConfig(RpkitError, ValueError):
    """Malformed algebra or lattice configuration."""


class SizeLimit(RpkitError):
    """Requested object exceeds the configured size cap."""


class ConfigMismatch(RpkitError, ValueError):
    """Operands built over different algebra configurations."""


class WrongHalf(RpkitError, ValueError):
    """Element supported outside the required half of the chain/lattice."""


class InvalidState(RpkitError, ValueError):
    """State functional violates its own invariants (e.g. non-hermitian H)."""


class InvalidArgument(RpkitError, ValueError):
    """Argument outside an operation's domain."""


class InvalidGeometry(RpkitError, ValueError):
    """Lattice geometry incompatible with the mid-bond reflection."""


class PreconditionViolation(RpkitError):
    """A documented operation precondition does not hold for the input."""


class ReconstructionFailure(RpkitError):
    """OS quantization produced an ill-defined transfer operator."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
