"""Exception hierarchy shared by all toruslift modules."""


class Error(Exception):
    """Base class for all toruslift errors."""


class DimensionError(Error):
    """Operands have incompatible ranks (vector length vs. matrix size)."""


class UnimodularError(Error):
    """An integer matrix is not invertible over the integers (det != +-1)."""


class IncompleteCocycle(Error):
    """A nerve edge has no transition matrix in either orientation."""


class DisconnectedNerve(Error):
    """The 1-skeleton of the nerve is not connected."""


class NoCorrection(Error):
    """No chart-correction family exists for the requested generator images."""


class OutOfModel(Error):
    """An action result leaves the declared finite sample sets."""


class NotOnSpace(Error):
    """Coordinates violate the defining equations of the cylinder space."""


class AssemblyError(Error):
    """Chart liftings and gluing data do not assemble into a global lifting."""


class ReconstructionError(Error):
    """A candidate witness fails the equivariance re-check."""


class InvalidSigma(Error):
    """An obstruction table is not a torus cocycle slice by slice."""


class InputError(Error):
    """Malformed or inconsistent user input (CLI exit code 1)."""


class ScenarioError(InputError):
    """Scenario file error, carrying the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
