"""Exception hierarchy shared by all modules."""


class MultiphotonError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(MultiphotonError, ValueError):
    """Invalid model or SUSY settings, or an unusable run configuration."""


class MissingLevel(MultiphotonError, KeyError):
    """A custom model was asked for a level it does not tabulate."""

    def __init__(self, n):
        super().__init__(n)
        self.n = n

    def __str__(self):
        return f"energy level n={self.n} is not available in the custom model"


class TruncationFailure(MultiphotonError, ArithmeticError):
    """Coherent-state series did not converge before ``n_cap`` terms."""


class NegativeRadicand(MultiphotonError, ArithmeticError):
    """An m=2 uncertainty radicand was negative beyond round-off."""


class DimensionTooSmall(MultiphotonError, ValueError):
    """Truncated matrix basis too small for the requested operators."""


class PositionSpaceError(MultiphotonError, ArithmeticError):
    """Base for position-space singularities; carries grid locations."""

    def __init__(self, message, locations=()):
        super().__init__(message)
        self.locations = tuple(float(x) for x in locations)

    def __str__(self):
        msg = super().__str__()
        if self.locations:
            shown = ", ".join(f"{x:.6g}" for x in self.locations[:10])
            more = "" if len(self.locations) <= 10 else f" (+{len(self.locations) - 10} more)"
            msg = f"{msg} at x = {shown}{more}"
        return msg


class ZeroCrossing(PositionSpaceError):
    """Seed solution vanishes inside the grid."""


class SingularDenominator(PositionSpaceError):
    """Finite-difference beta recursion hits a zero denominator."""


class PoleProximity(PositionSpaceError, ConfigError):
    """Grid enters the guard band around a pole of the potential."""
