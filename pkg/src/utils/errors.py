"""
Exception hierarchy for the PSC toolkit.

Library code raises these; only the CLI maps them to exit codes.
"""


class PscError(Exception):
    """Base class for all toolkit errors."""


# linalg

class RankDeficient(PscError):
    """Fewer singular values than requested exceed the rank threshold."""

    def __init__(self, message: str, rank: int = 0, rows=None):
        super().__init__(message)
        self.rank = rank
        self.rows = rows


class NotSymmetric(PscError):
    """A matrix passed to the symmetric eigensolver is not symmetric."""


class DimensionExhausted(PscError):
    """Requested rows exceed the remaining dimension of the signal space."""


# priors

class DegenerateGram(PscError):
    """H Σ Hᵀ is singular beyond ridge repair."""


class PriorConfigError(PscError):
    """A prior definition file is malformed or inconsistent."""


# sampler

class UnknownSamplerId(PscError):
    """No sampler is registered under the requested id."""


# quant

class NonFiniteInput(PscError):
    """A NaN or infinity reached a codec input."""


class InvalidCode(PscError):
    """An 8-bit code does not denote a canonical finite e4m3 value."""


# entropy / codec

class CorruptStream(PscError):
    """The range decoder detected an interval inconsistency or ran out of data."""


class ChecksumMismatch(PscError):
    """A header or payload checksum does not validate."""


class PriorMismatch(PscError):
    """The supplied prior does not match the digest recorded in the bitstream."""


class ConfigInvalid(PscError):
    """Codec configuration violates its invariants."""


# cli / io

class ShapeMismatch(PscError):
    """Two signals that must agree in shape do not."""


class SignalFormatError(PscError):
    """A signal file is malformed."""
