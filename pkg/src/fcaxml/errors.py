"""Exception hierarchy shared by every layer of the package."""


class FcaXmlError(Exception):
    """Base class for all errors raised by fcaxml."""


class MalformedXml(FcaXmlError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class MixedContent(FcaXmlError):
    pass


class EmptyDocument(FcaXmlError):
    pass


class UnknownObject(FcaXmlError, KeyError):
    pass


class UnknownAttribute(FcaXmlError, KeyError):
    pass


class DuplicateObject(FcaXmlError, ValueError):
    pass


class InvalidConcept(FcaXmlError, IndexError):
    pass


class NotAParentNode(FcaXmlError, ValueError):
    pass


class MissingScale(FcaXmlError, KeyError):
    pass


class FunctionalityViolation(FcaXmlError, ValueError):
    pass


class GrammarError(FcaXmlError):
    def __init__(self, message, position=None):
        self.position = position
        where = f" at offset {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnsupportedFeature(GrammarError):
    pass


class PathNotFound(FcaXmlError):
    """Raised when a search path has no entry in the path dictionary.

    The message mirrors the ``Not-Found-Element`` outcome of query concept
    construction.
    """

    def __init__(self, path):
        self.path = path
        super().__init__(f"Not-Found-Element: {path}")


class EmptyIntent(FcaXmlError, ValueError):
    pass


class UnknownTarget(FcaXmlError, KeyError):
    pass


class IndexFormatError(FcaXmlError, ValueError):
    pass
