"""Exception hierarchy shared by every module of the package."""


class MeridianError(Exception):
    """Base class for all package errors."""


class DegenerateVector(MeridianError, ValueError):
    """A zero (or non-finite) vector was given where a direction is needed."""


class DomainError(MeridianError, ValueError):
    """A parameter lies outside the domain of a curve, profile or surface."""


class NotUnitSpeed(MeridianError, ValueError):
    """The meridian profile violates |f'| <= 1."""


class SingularProfile(MeridianError, ValueError):
    """The meridian curvature is undefined (g' = 0 while f'' != 0)."""


class BranchMismatch(MeridianError, ValueError):
    """A case-specific formula was requested outside its case."""


class LambdaVanishes(MeridianError, ValueError):
    """The pointwise 1-type factor vanishes somewhere on the grid."""


class GridTooSmall(MeridianError, ValueError):
    """The sample grid has fewer than 8x8 interior points."""


class InvalidInitialState(MeridianError, ValueError):
    """Initial data of an ODE is outside the admissible set."""


class SingularDenominator(MeridianError, ValueError):
    """The second-kind ODE degenerates at the initial point."""


class BranchBoundaryReached(MeridianError):
    """An ODE trajectory reached |f'| -> 1 or f -> 0.

    The partial solution is attached as ``solution``.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class InvariantDrift(MeridianError):
    """A conserved quantity drifted beyond tolerance during integration."""


class ConfigError(MeridianError, ValueError):
    """Invalid configuration record, with line and field diagnostics."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
