"""Exception taxonomy shared across the package.

Everything derives from TreeglueError so callers can catch the package
wholesale; the CLI maps ConfigError to exit code 2 and the rest to 3.
"""


class TreeglueError(Exception):
    pass


class ConfigError(TreeglueError):
    """Bad user-facing configuration (CLI exit code 2)."""


class ParamOutOfRange(ConfigError):
    pass


class InvalidPath(TreeglueError):
    """Sequence is not a valid Lukasiewicz encoding of a plane tree."""


class IndexOutOfRange(TreeglueError):
    pass


class DegenerateBeta(TreeglueError):
    """Beta parameter hit the degenerate boundary (eta = 1 chains)."""


class TailNotRegular(TreeglueError):
    """Law admits no regularly varying tail / no usable inversion."""


class InsufficientAtoms(TreeglueError):
    pass


class TruncationBudgetExceeded(TreeglueError):
    """Stick-breaking could not reach the requested residual within budget."""


class RetriesExhausted(TreeglueError):
    pass


class InfeasibleConditioning(TreeglueError):
    """The conditioning event has probability zero under the law."""


class SupportTooLarge(TreeglueError):
    pass


class SizeLimit(TreeglueError):
    pass


class KitFailure(TreeglueError):
    """Decoration kit failed to produce a decoration for a requested size."""


class InvalidPoint(TreeglueError):
    pass


class ZeroMass(TreeglueError):
    pass


class BadRule(TreeglueError):
    pass


class NonGraphDecoration(TreeglueError):
    """Operation needs edge-level graph structure the decoration lacks."""


class DegenerateScales(TreeglueError):
    pass


class ConfigMismatch(TreeglueError):
    """Two runs being compared were produced under incompatible settings."""
