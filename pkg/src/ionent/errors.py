"""Exception types shared across the package."""


class IonEntError(Exception):
    pass


class DimensionMismatch(IonEntError, ValueError):
    pass


class NonHermitianInput(IonEntError, ValueError):
    pass


class NoConvergence(IonEntError, ArithmeticError):
    pass


class InvalidLevel(IonEntError, ValueError):
    pass


class InvalidParameter(IonEntError, ValueError):
    pass


class ZeroDetuning(IonEntError, ZeroDivisionError):
    pass


class InvalidState(IonEntError, ValueError):
    pass


class SeriesNotConverged(IonEntError, ArithmeticError):
    pass


class UnsupportedInitialState(IonEntError, ValueError):
    pass


class EmptySeries(IonEntError, ValueError):
    pass


class NumericalFailure(IonEntError, RuntimeError):
    """Raised by the sweep engine, annotated with the grid point that failed."""


class ConfigError(IonEntError, ValueError):
    def __init__(self, key, reason):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


class UnknownPreset(IonEntError, KeyError):
    def __str__(self):
        return f"unknown preset {self.args[0]!r}"
