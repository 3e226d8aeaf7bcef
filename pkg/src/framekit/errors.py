"""Exception hierarchy shared by every framekit module."""


class FrameKitError(Exception):
    """Base class; the CLI maps any subclass to a non-zero exit."""


class ParseError(FrameKitError):
    def __init__(self, reason, position=None):
        self.reason = reason
        self.position = position
        where = f" at {position}" if position is not None else ""
        super().__init__(f"parse error{where}: {reason}")


class IntegrityError(FrameKitError):
    """A record references an id or name that does not resolve."""


class UnknownDocument(FrameKitError):
    pass


class MissingLayer(FrameKitError):
    """An overt label lacks its phrase type or grammatical function."""


class EmptyPattern(FrameKitError):
    """An annotation set has no overt labels, hence no valence pattern."""


class ProjectionError(FrameKitError):
    """A substitution cuts through a label boundary."""


class DimensionMismatch(FrameKitError):
    pass


class ZeroVector(FrameKitError):
    pass


class EmbeddingError(FrameKitError):
    pass


class NotATree(FrameKitError):
    pass


class CycleDetected(FrameKitError):
    pass


class UnknownFrameElement(FrameKitError):
    pass


class NoOccurrences(FrameKitError):
    pass


class EmptyTestSet(FrameKitError):
    pass
