"""Exception hierarchy for xres."""


class XresError(Exception):
    """Base error; `module` names the module that raised it."""
    module = "xres"

    def __str__(self):
        return f"{self.module}: {type(self).__name__}: {super().__str__()}"


class NonComposablePath(XresError):
    module = "words"


class NotFiniteWithinBound(XresError):
    module = "group_oracle"


class UnknownGenerator(XresError):
    module = "group_oracle"


class OracleMismatch(XresError):
    module = "group_oracle"


class PresentationSyntaxError(XresError):
    """Raised by the presentation parser; `position` is a character offset."""
    module = "presentation"

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NonLoopRelator(XresError):
    module = "presentation"


class UnknownRelator(XresError):
    module = "crossed_module"


class BasepointMismatch(XresError):
    module = "crossed_module"


class DimensionOutOfRange(XresError):
    module = "crossed_complex"


class MissingImage(XresError):
    module = "crossed_complex"


class NonIdentityBoundary(XresError):
    module = "crossed_complex"


class MissingOracle(XresError):
    module = "crossed_complex"


class DumpSyntaxError(XresError):
    module = "crossed_complex"

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"{message} (line {line})")
        self.line = line


class UnverifiedLift(XresError):
    module = "constructions"


class NotTwoObject(XresError):
    module = "constructions"


class LiftNotFound(XresError):
    module = "constructions"

    def __init__(self, message: str, dim: int = 0):
        super().__init__(f"{message} (dimension {dim})")
        self.dim = dim


class AmbiguousWithoutHints(XresError):
    module = "constructions"


class DimensionOverflow(XresError):
    module = "constructions"


class NotFinite(XresError):
    module = "verify"


class TooLarge(XresError):
    module = "cocycle"


class UnverifiedCocycle(XresError):
    module = "cocycle"
