"""
Exceptions raised by the diagram engine.
Commands translate them into exit codes (see szx.management.commands).
"""


class SZXError(Exception):
    """Base class for every engine error."""


class TypeMismatch(SZXError):
    """Boundaries of two diagrams do not agree."""


class SizeMismatch(SZXError):
    """Two types have different sizes where equal sizes are required."""


class NotPure(SZXError):
    """A discard or mix node was found where a pure map is required."""


class UnknownName(SZXError):
    """A gate, state, algorithm or bundled asset name is not known."""


class AnchorMismatch(SZXError):
    """The anchored subdiagram does not match the rule side."""


class SideConditionFailed(SZXError):
    """A rule was applied with parameters rejected by its side condition."""


class UnknownRule(SZXError):
    """The rule name is neither in the registry nor admitted by the script."""


class ValidationFailed(SZXError):
    """A diagram or proof script breaks a structural invariant."""


class PromiseViolated(SZXError):
    """An algorithm instance does not satisfy its promise."""


class Degenerate(SZXError):
    """Parameters outside the range where a construction is defined."""


class Inconsistent(SZXError):
    """A GF(2) linear system has no solution."""


class ShapeMismatch(SZXError):
    """Matrix shapes do not compose."""


class NotBoolean(SZXError):
    """A boolean function (one output bit) was required."""


class DocumentError(SZXError):
    """A JSON document could not be parsed."""
