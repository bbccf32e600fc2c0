"""Exception hierarchy shared by all modules."""


class AnseqError(Exception):
    """Base class for errors raised by anseq."""


class InputError(AnseqError, ValueError):
    """Malformed or out-of-range input (bad index, size mismatch, improper coloring)."""


class ResourceError(AnseqError):
    """A documented size guard was exceeded."""


class VerificationError(AnseqError):
    """A construction failed its own exhaustive check.

    Raised only when an internal invariant breaks; callers should treat it as a bug.
    """


class DecodeError(AnseqError, ValueError):
    """A configuration does not belong to any coded set of a subset encoding."""
