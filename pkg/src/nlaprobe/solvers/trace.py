"""Per-iteration solver records."""

import csv
import os
from dataclasses import dataclass, field

import numpy as np


@dataclass
class SolveTrace:
    """Iteration history of an iterative solver.

    Row ``t`` describes the state after ``iterations[t]`` solver steps (row 0
    is the initial guess). ``aerr`` holds the A-norm error ``||x_t - x*||_A``
    when the true solution was supplied, otherwise NaN. ``epochs`` counts the
    work in units of ``n`` rows read: one CG or GMRES matvec is one epoch,
    ``n`` coordinate steps of RCD are one epoch.
    """

    iterations: list = field(default_factory=list)
    epochs: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    aerr: list = field(default_factory=list)
    converged: bool = False
    x: np.ndarray = None

    def record(self, it, epoch, residual, aerr=np.nan):
        self.iterations.append(int(it))
        self.epochs.append(int(epoch))
        self.residuals.append(float(residual))
        self.aerr.append(float(aerr))

    def __len__(self):
        return len(self.iterations)

    @property
    def wall_iterations(self) -> int:
        return self.iterations[-1] if self.iterations else 0

    def error_ratios(self) -> np.ndarray:
        """``aerr[t] / aerr[0]``."""
        a = np.asarray(self.aerr)
        return a / a[0] if a[0] > 0 else np.zeros_like(a)

    def to_csv(self, target) -> None:
        """Write ``iteration,epoch,residual,aerr`` rows (``repr`` floats)."""
        own = isinstance(target, (str, os.PathLike))
        fh = open(target, "w", newline="") if own else target
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "epoch", "residual", "aerr"])
            for row in zip(self.iterations, self.epochs, self.residuals, self.aerr):
                w.writerow([row[0], row[1], repr(row[2]), repr(row[3])])
        finally:
            if own:
                fh.close()
