"""Exception types raised across the package.

Every error carries a stable ``code`` used by the command-line interface when
it reports failures as JSON.
"""


class DiagmultError(ValueError):
    code = "Error"


class DiagramError(DiagmultError):
    code = "InvalidDiagram"


class OverlappingBlocksError(DiagramError):
    code = "OverlappingBlocks"


class UncoveredVertexError(DiagramError):
    code = "UncoveredVertex"


class EmptyBlockError(DiagramError):
    code = "EmptyBlock"


class VertexOutOfRangeError(DiagramError):
    code = "VertexOutOfRange"


class KindMismatchError(DiagmultError):
    code = "KindMismatch"


class SizeMismatchError(DiagmultError):
    code = "SizeMismatch"


class ParityError(DiagmultError):
    code = "ParityError"


class IndexOutOfRangeError(DiagmultError):
    code = "IndexOutOfRange"


class NotAGroupElementError(DiagmultError):
    code = "NotAGroupElement"


class NotPlanarError(DiagmultError):
    code = "NotPlanar"


class NotCanonicalError(DiagmultError):
    code = "NotCanonical"


class MixedShapesError(DiagmultError):
    code = "MixedShapes"


class WeightCountMismatchError(DiagmultError):
    code = "WeightCountMismatch"


class ChecksumMismatchError(DiagmultError):
    code = "ChecksumMismatch"
