"""Exception types raised by the library."""


class SemsimError(ValueError):
    """Base class for data and configuration errors."""


class CorpusError(SemsimError):
    pass


class ResourceError(SemsimError):
    """Malformed embedding or taxonomy file."""


class MeasureError(SemsimError):
    pass


class ClassifierError(SemsimError):
    pass
