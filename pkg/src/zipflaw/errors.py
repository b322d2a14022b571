"""Exception hierarchy shared by every zipflaw module."""


class ZipfError(Exception):
    """Base class for all errors raised by zipflaw."""


class DomainError(ZipfError, ValueError):
    """A parameter or data value lies outside the mathematical domain."""


class DegenerateSampleError(ZipfError):
    """The sample has no interior likelihood maximum (e.g. every value equals the cutoff)."""


class ZeroVarianceError(ZipfError):
    """The per-point log-likelihood ratios are all identical, so the LR p-value is undefined."""


class IngestRejection(ZipfError):
    """A document was rejected during ingestion; ``reason`` is a short code."""

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class NoDelimitersError(IngestRejection):
    def __init__(self, detail="Project Gutenberg start/end markers not found"):
        super().__init__("no-delimiters", detail)


class FingerprintMismatchError(ZipfError):
    """Reports produced under different configurations were mixed in one aggregate."""
