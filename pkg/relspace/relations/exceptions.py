# relations/exceptions.py
"""Errors raised across the engine. Every one of them is a ValueError."""


class RelspaceError(ValueError):
    pass


# -------------------------
# relation-core
# -------------------------
class TypeMismatch(RelspaceError):
    """Two port types that have to agree do not."""


class IndexOutOfRange(RelspaceError):
    pass


# -------------------------
# diagrams
# -------------------------
class UnboundBox(RelspaceError):
    pass


class MalformedDiagram(RelspaceError):
    pass


class LayoutMismatch(RelspaceError):
    pass


class ArityMismatch(RelspaceError):
    pass


# -------------------------
# grammar
# -------------------------
class NoParse(RelspaceError):
    pass


class UnknownWord(RelspaceError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"Unknown word: {word!r}")


class BadTypeString(RelspaceError):
    pass


# -------------------------
# spaces / inference
# -------------------------
class SceneError(RelspaceError):
    pass


class SpaceTooLarge(SceneError):
    pass


class UnknownInhabitant(SceneError):
    pass


class UnknownRelation(SceneError):
    pass


class NotRepresentable(SceneError):
    """A quantity is not a whole number of grid steps."""
