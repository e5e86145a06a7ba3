"""Exception and warning types shared across the toolkit."""


class OkraError(Exception):
    """Base class for all toolkit errors."""


class ZeroFeatures(OkraError):
    """A data matrix or frame plan was requested with zero feature columns."""


class DegenerateDraw(OkraError):
    """Random matrix was numerically rank-deficient even after a retry."""


class TooFewSamples(OkraError):
    """Cohort rule: every participant must contribute at least two images."""


class NonFinite(OkraError):
    """Input contains NaN or infinite entries."""


class DimensionMismatch(OkraError):
    """Operand shapes are inconsistent with each other or with the key."""


class WidthMismatch(OkraError):
    """Encoded submissions do not share one encoded width."""


class ImaginaryLeak(OkraError):
    """Recovered products carry a large imaginary part.

    This is the signature of submissions encoded under different keys; it is
    reported as an error instead of being silently discarded.
    """


class DuplicateOwner(OkraError):
    """Two submissions claim the same owner identifier."""


class UnknownOwner(OkraError):
    """Owner identifier is absent from the Gram index map."""


class KernelOverflow(OkraError):
    """Polynomial kernel evaluation produced non-finite values."""


class SingleClass(OkraError):
    """Classifier training needs at least two distinct labels."""


class UndefinedMetric(OkraError):
    """Requested metric is undefined for the given inputs (e.g. one-class AUC)."""


class ConfigError(OkraError):
    """Run configuration failed schema validation."""


class ProtocolError(OkraError):
    """Base class for wire-protocol failures; carries a stable error code."""

    code = "protocol"


class BadMagic(ProtocolError):
    code = "bad_magic"


class UnsupportedVersion(ProtocolError):
    code = "unsupported_version"


class UnknownFrameKind(ProtocolError):
    code = "unknown_kind"


class BodyTooLarge(ProtocolError):
    code = "body_too_large"


class Truncated(ProtocolError):
    code = "truncated"


class DigestMismatch(ProtocolError):
    code = "digest_mismatch"


class MalformedBody(ProtocolError):
    code = "malformed_body"


class SessionError(OkraError):
    """A federated session failed (timeout, abort, rejected submission)."""


class Rejected(SessionError):
    """The server refused a client's message; carries the relayed reason."""


class SessionTimeout(SessionError):
    """Not all expected parties submitted before the deadline."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(f"timed out waiting for parties: {', '.join(self.missing)}")


class DuplicateSubmission(SessionError):
    """A party submitted twice; the first submission is kept."""


class ConvergenceWarning(UserWarning):
    """Optimizer hit its iteration budget before meeting the tolerance."""


class RankDeficientWarning(UserWarning):
    """Fewer usable eigenvalues than requested components."""
