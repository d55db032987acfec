"""Exception hierarchy. Each failure mode carries the CLI exit code it maps to."""


class OrthoFramesError(Exception):
    exit_code = 9


class ConfigError(OrthoFramesError):
    exit_code = 1


class SymbolNotPositive(OrthoFramesError):
    """The symbol function vanishes (or nearly so) somewhere on its torus."""

    exit_code = 2

    def __init__(self, message, location=None, value=None):
        super().__init__(message)
        self.location = location
        self.value = value


class NonConvergedQuadrature(OrthoFramesError):
    exit_code = 3


class GridMismatch(OrthoFramesError):
    exit_code = 4


class NotAFrame(OrthoFramesError):
    exit_code = 5


class DegenerateProbe(OrthoFramesError):
    exit_code = 6


class ShapeMismatch(OrthoFramesError):
    exit_code = 7


class NonConvergedSum(OrthoFramesError):
    exit_code = 8


#: exit code used by ``reproduce`` when at least one row misses its tolerance
EXIT_REPRODUCTION_FAILED = 10

EXIT_CODES = {
    0: "success",
    ConfigError.exit_code: "invalid configuration or command line",
    SymbolNotPositive.exit_code: "symbol function not strictly positive",
    NonConvergedQuadrature.exit_code: "quadrature did not converge",
    GridMismatch.exit_code: "(k,q) grid incompatible with L",
    NotAFrame.exit_code: "periodized spectrum unbounded or vanishing",
    DegenerateProbe.exit_code: "completeness probe produced a null function",
    ShapeMismatch.exit_code: "coefficient table has the wrong structure",
    NonConvergedSum.exit_code: "lattice sum did not converge",
    OrthoFramesError.exit_code: "other library error",
    EXIT_REPRODUCTION_FAILED: "a reproduction row missed its tolerance",
}
