"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat
and the categories coarse: configuration, crypto/range, transport,
protocol state, and baseline infeasibility.
"""


class HegpError(Exception):
    """Base class for all package errors."""


class ConfigError(HegpError):
    """Invalid or inconsistent configuration / parameters."""


class DimensionMismatchError(ConfigError):
    """Operands disagree on dimension or packing layout."""


class NotPositiveDefiniteError(HegpError):
    """Covariance factorization failed; try a larger jitter."""


class RangeOverflowError(HegpError):
    """A fixed-point value left the calibrated encodable range."""


class DepthExceededError(HegpError):
    """A circuit needs more modulus-chain levels than are available."""


class CryptoError(HegpError):
    """Key or ciphertext level inconsistencies, decryption failures."""


class ProtocolError(HegpError):
    """Round sequencing or bookkeeping violation in a session."""


class TransportError(HegpError):
    """Framing, connection, or timeout failure below the protocol."""


class FrameFormatError(TransportError):
    """Wire frame rejected before payload parse."""


class InfeasibleError(HegpError):
    """Requested computation exceeds the configured maximum chain length."""
