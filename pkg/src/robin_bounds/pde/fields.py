"""Result containers for the 2D solvers."""

import os
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Nodal values on a GridDomain; ``nodes`` are flat grid indices."""

    domain: object
    nodes: np.ndarray
    values: np.ndarray

    def on_inside(self):
        """Values at the strictly-inside nodes (zero where the field is not stored)."""
        d = self.domain
        full = np.zeros(d.nx * d.ny)
        full[self.nodes] = self.values
        return full[np.flatnonzero(d.inside.ravel())]

    def as_grid(self, fill=np.nan):
        d = self.domain
        full = np.full(d.nx * d.ny, fill)
        full[self.nodes] = self.values
        return full.reshape(d.nx, d.ny)


@dataclass(eq=False)
class EigenSolveResult:
    lam: float
    u: ScalarField
    iterations: int
    quotient_history: list = field(default_factory=list)

    @property
    def lambda_(self):
        return self.lam


def max_iterations(default):
    """Iteration cap, overridable through ROBIN_BOUNDS_MAXITER."""
    raw = os.environ.get("ROBIN_BOUNDS_MAXITER")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            return default
        if value > 0:
            return value
    return default
