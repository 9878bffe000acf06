"""Exception hierarchy shared by every stage of the pipeline."""


class PFVError(Exception):
    """Base class for all pipeline errors."""


class ParseError(PFVError):
    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class SchemaError(PFVError):
    pass


class ConfigError(PFVError):
    pass


class DegenerateTaskError(PFVError):
    """A binary task lacks one of its two classes."""


class DegenerateSplitError(PFVError):
    pass


class DegenerateTableError(PFVError):
    pass


class DegenerateFitError(PFVError):
    pass


class SingularError(PFVError):
    pass


class SeparationError(PFVError):
    pass


class CollinearityError(PFVError):
    pass


class EstimatorError(PFVError):
    pass


class UndefinedAUROCError(PFVError):
    pass


class DomainError(PFVError, ValueError):
    pass


class ShapeError(PFVError, ValueError):
    pass
