"""Common result record for all optimizer runs."""

from dataclasses import dataclass, field


@dataclass
class SolverReport:
    """Outcome of one optimizer run.

    ``objective`` is the solver's native minimax value (PAPR scale for the
    phase solver, peak amplitude for the sign solvers); ``papr``/``papr_db``
    always give the realized oversampled PAPR of the returned loading.
    """

    objective: float
    papr: float
    papr_db: float
    iterations: int = 0
    nodes: int = 0
    bound_gap: float | None = None
    wall_time: float = 0.0
    converged: bool = True
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.objective < 0:
            raise ValueError("objective must be non-negative")
