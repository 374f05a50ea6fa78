"""Exception hierarchy.

Three intermediate bases exist so the CLI can map failures to its exit-code
contract: ingestion problems (exit 3), grid/interval alignment problems
(exit 5), and everything numeric (exit 4). Argument errors never reach
exceptions from this module; argparse handles those (exit 2).
"""


class WavecohError(Exception):
    """Base class for all library errors."""


class IngestError(WavecohError):
    """Base class for dataset parsing and validation failures."""


class AlignmentError(WavecohError):
    """Base class for failures aligning two series onto one grid."""


# series
class NonPositiveStep(WavecohError):
    pass


class EmptySeries(WavecohError):
    pass


class NonFiniteValue(WavecohError):
    def __init__(self, index, value):
        self.index = index
        super().__init__(f"non-finite value {value!r} at sample index {index}")


class TooShort(WavecohError):
    pass


class ZeroVariance(WavecohError):
    pass


class NoOverlap(AlignmentError):
    pass


class IncompatibleGrid(AlignmentError):
    pass


# pfa
class Underdetermined(WavecohError):
    pass


class SingularNormalMatrix(WavecohError):
    def __init__(self, condition, message=""):
        self.condition = condition
        text = message or "least-squares design matrix is numerically singular"
        super().__init__(f"{text} (condition number {condition:.3e})")


class BandOutOfRange(WavecohError):
    pass


class LengthMismatch(WavecohError):
    pass


# cwt
class ScaleBelowNyquist(WavecohError):
    pass


class SeriesTooShort(WavecohError):
    pass


class GridTooSparse(WavecohError):
    pass


# coherence
class GridMismatch(WavecohError):
    pass


class DimensionMismatch(WavecohError):
    pass


# significance
class InsufficientSurrogates(WavecohError):
    pass


# ingest
class FileUnreadable(IngestError):
    pass


class MalformedRow(IngestError):
    def __init__(self, line_number, reason):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {reason}")


class NonUniformStep(IngestError):
    def __init__(self, line_number, reason):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {reason}")


class EmptyAfterParse(IngestError):
    pass


class HeaderOnlyFile(IngestError):
    pass


class SpanMismatch(IngestError):
    pass


# rendering
class DegenerateRange(WavecohError):
    pass
