"""Exception hierarchy.

Every error raised on purpose by the library derives from BloatLensError, so
the CLI can tell analysis failures apart from programming errors.
"""


class BloatLensError(Exception):
    """Base class for all analysis errors."""


class MalformedCoordinate(BloatLensError, ValueError):
    pass


class SchemaError(BloatLensError, ValueError):
    """An input document does not follow its schema.

    ``location`` is a dotted/indexed path into the document, e.g.
    ``snapshots[2].manifest[0].ga``.
    """

    def __init__(self, location: str, message: str, path=None):
        self.location = location
        self.message = message
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(f"{where}{location}: {message}")


class InvalidFacts(BloatLensError, ValueError):
    pass


class MissingArtifact(BloatLensError, LookupError):
    def __init__(self, coordinate):
        self.coordinate = coordinate
        super().__init__(f"artifact not found in registry: {coordinate}")


class DuplicateDeclaration(BloatLensError, ValueError):
    def __init__(self, ga):
        self.ga = ga
        super().__init__(f"dependency declared more than once: {ga}")


class UnknownOwner(BloatLensError, LookupError):
    def __init__(self, ga):
        self.ga = ga
        super().__init__(f"usage facts reference an artifact absent from the tree: {ga}")


class UnknownDependency(BloatLensError, LookupError):
    def __init__(self, ga):
        self.ga = ga
        super().__init__(f"dependency not in tree: {ga}")


class InsufficientPoints(BloatLensError, ValueError):
    pass


class NeverPresent(BloatLensError, LookupError):
    def __init__(self, ga):
        self.ga = ga
        super().__init__(f"dependency never present in history: {ga}")


class NoBloatedDependencies(BloatLensError, ZeroDivisionError):
    pass


class NotABloatAppearance(BloatLensError, ValueError):
    pass


class EmptyInput(BloatLensError, ValueError):
    pass
