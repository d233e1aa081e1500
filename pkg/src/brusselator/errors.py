"""Exception hierarchy shared by the analysis and simulation modules."""

from __future__ import annotations


class BrusselatorError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BrusselatorError, ValueError):
    """One or more inputs are out of range.

    ``fields`` maps each offending field name to a short reason so callers
    (the CLI in particular) can report every problem at once.
    """

    def __init__(self, fields: dict[str, str]):
        self.fields = dict(fields)
        msg = "; ".join(f"{k}: {v}" for k, v in self.fields.items())
        super().__init__(msg or "invalid input")


class DegenerateError(BrusselatorError):
    """Codimension-two or otherwise degenerate configuration; no type call."""


class ResonanceError(BrusselatorError):
    """A mode block that must be inverted is singular."""

    def __init__(self, k: int, value: float, what: str = "det M_k"):
        self.k = k
        self.value = value
        super().__init__(f"{what} vanishes at mode k={k} (value {value:.3e})")


class NoCriticalScale(BrusselatorError):
    """The critical-length discriminant is negative: HopfFirst for every L."""


class BlowUpError(BrusselatorError):
    """Simulation state became non-finite or exceeded the blow-up threshold."""

    def __init__(self, t: float, trajectory=None):
        self.t = t
        self.trajectory = trajectory
        super().__init__(f"numerical blow-up at t={t:.6g}; try halving dt")


class NotSteady(BrusselatorError):
    """Trajectory has not settled onto an equilibrium."""


class NotCyclic(BrusselatorError):
    """Trajectory does not show a converged periodic orbit."""


class ContaminationError(BrusselatorError):
    """Linear-regime fit polluted by nonlinear effects; reduce the seed."""
