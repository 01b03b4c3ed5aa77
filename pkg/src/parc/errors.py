"""Exception hierarchy.

Everything raised for bad archive contents derives from :class:`CorruptArchive`
so callers (and the CLI) can tell data problems apart from usage mistakes,
which are plain :class:`ValueError`.
"""


class ParcError(Exception):
    pass


class CorruptArchive(ParcError):
    """Archive bytes cannot be decoded."""


# archive-level


class BadMagic(CorruptArchive):
    pass


class UnsupportedVersion(CorruptArchive):
    pass


class TruncatedArchive(CorruptArchive):
    pass


class SegmentSumMismatch(CorruptArchive):
    pass


class MalformedHeader(CorruptArchive):
    """Reserved fields set, unknown codec id, trailing bytes and the like."""


# segment-level


class CorruptSegment(CorruptArchive):
    pass


class BadModel(CorruptSegment):
    pass


class PayloadUnderrun(CorruptSegment):
    pass


class PayloadOverrun(CorruptSegment):
    pass


class CodeOutOfRange(CorruptSegment):
    pass
