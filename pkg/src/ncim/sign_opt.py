"""Binary sign loading: exact minimax, angular discretization, and bounds.

Restricting the phase loading to {+1, -1} turns peak minimization into a
binary minimax program.  The complex modulus in each peak constraint is
either kept exact or replaced by its polyhedral under-approximation over P
equispaced angles (the discrete norm), which sandwiches the true modulus
within a factor sec(pi/P).  Both programs are solved exactly by depth-first
branch-and-bound with a triangle-inequality node bound, or by plain
enumeration; the two paths share one leaf evaluator so their results agree
bit for bit.
"""

import time
from dataclasses import dataclass

import numpy as np

from .frames import Frame
from .report import SolverReport
from .transforms import TransformPlan, papr


class InstanceTooLargeError(ValueError):
    """Enumeration requested beyond the exhaustive size cap."""


@dataclass(frozen=True)
class DiscretizationConfig:
    """P equispaced angles starting at zero; P >= 3 keeps sec(pi/P) finite."""

    levels: int = 5

    def __post_init__(self):
        if self.levels < 3:
            raise ValueError("levels must be >= 3")

    @property
    def angles(self) -> np.ndarray:
        return np.arange(self.levels) * (2.0 * np.pi / self.levels)

    @property
    def norm_ratio(self) -> float:
        """Upper-bound factor sec(pi/P) between true and discrete norm."""
        return float(1.0 / np.cos(np.pi / self.levels))


def discrete_norm(v: complex, disc: DiscretizationConfig) -> float:
    """Max of Re(v)cos(theta) + Im(v)sin(theta) over the angle set.

    Satisfies ``|v|_D <= |v| <= |v|_D * sec(pi/P)``.
    """
    th = disc.angles
    v = complex(v)
    return float(np.max(v.real * np.cos(th) + v.imag * np.sin(th)))


@dataclass
class SignSolverOptions:
    method: str = "auto"  # auto | branch-and-bound | exhaustive
    exhaustive_cap: int = 20
    sample_range: str = "nr"  # peak over all N*R samples, or "n" for the first N

    def __post_init__(self):
        if self.method not in ("auto", "branch-and-bound", "exhaustive"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.sample_range not in ("nr", "n"):
            raise ValueError("sample_range must be 'nr' or 'n'")


def _n_eval(config, sample_range: str) -> int:
    return config.n_samples if sample_range == "nr" else config.n_subcarriers


def amplitude_steering(frame: Frame, sample_range: str = "nr",
                       plan: TransformPlan | None = None) -> np.ndarray:
    """Amplitude-scaled transform columns on the frame support."""
    if plan is None:
        plan = TransformPlan.from_config(frame.config)
    elif not plan.matches(frame.config):
        raise ValueError("plan dimensions do not match frame config")
    n_eval = _n_eval(frame.config, sample_range)
    return frame.config.amplitude * plan.steering(frame.support, n_eval)


@dataclass
class ConstraintSystem:
    """Linear peak constraints of the discretized sign program.

    ``coefficients[n, p, k]`` multiplies sign k in the row for sample n and
    angle p; the row value at a sign vector s is the discretized modulus
    component Re(v_n)cos(theta_p) + Im(v_n)sin(theta_p).
    """

    coefficients: np.ndarray
    angles: np.ndarray
    support: np.ndarray
    sample_range: str

    @property
    def n_rows(self) -> int:
        return self.coefficients.shape[0] * self.coefficients.shape[1]

    def as_matrix(self) -> np.ndarray:
        """Rows flattened sample-major: row index = n * levels + p."""
        bk = self.coefficients.shape[2]
        return self.coefficients.reshape(self.n_rows, bk)

    def evaluate(self, signs) -> float:
        """Max row value: the discretized peak of the sign-loaded frame."""
        return float(np.max(self.as_matrix() @ np.asarray(signs, dtype=np.float64)))


def build_constraints(frame: Frame, disc: DiscretizationConfig,
                      plan: TransformPlan | None = None,
                      sample_range: str = "nr") -> ConstraintSystem:
    """Assemble the (samples x levels) peak rows for a frame's support."""
    a = amplitude_steering(frame, sample_range, plan)
    th = disc.angles
    coeff = (
        a.real[:, None, :] * np.cos(th)[None, :, None]
        + a.imag[:, None, :] * np.sin(th)[None, :, None]
    )
    return ConstraintSystem(coeff, th, np.asarray(frame.support), sample_range)


def _exact_evaluator(a: np.ndarray):
    def evaluate(signs: np.ndarray) -> float:
        return float(np.max(np.abs(a @ signs)))

    return evaluate


def _rows_evaluator(rows: np.ndarray):
    def evaluate(signs: np.ndarray) -> float:
        return float(np.max(rows @ signs))

    return evaluate


def _enumerate_signs(bk: int, evaluate, fix_first: bool, cap: int):
    """Scan sign vectors in +1-first lexicographic order, keep the first best."""
    n_free = bk - 1 if fix_first else bk
    if n_free > cap:
        raise InstanceTooLargeError(
            f"{n_free} free signs exceed the exhaustive cap of {cap}"
        )
    shifts = np.arange(n_free - 1, -1, -1, dtype=np.int64)
    signs = np.ones(bk, dtype=np.float64)
    best = np.inf
    best_signs = None
    count = 0
    for code in range(1 << n_free):
        bits = (code >> shifts) & 1
        signs[bk - n_free :] = 1.0 - 2.0 * bits
        value = evaluate(signs)
        count += 1
        if value < best:
            best = value
            best_signs = signs.copy()
    return best_signs, best, count


def _bnb_exact(a: np.ndarray, bk: int, evaluate, fix_first: bool):
    """Depth-first search with the modulus triangle-inequality bound."""
    tail = np.abs(a)[:, ::-1].cumsum(axis=1)[:, ::-1]
    tail = np.concatenate([tail, np.zeros((a.shape[0], 1))], axis=1)
    signs = np.ones(bk, dtype=np.float64)
    state = {"best": np.inf, "signs": None, "nodes": 0}

    def visit(depth: int, fixed: np.ndarray):
        state["nodes"] += 1
        bound = max(0.0, float((np.abs(fixed) - tail[:, depth]).max()))
        if bound >= state["best"]:
            return
        if depth == bk:
            value = evaluate(signs)
            if value < state["best"]:
                state["best"] = value
                state["signs"] = signs.copy()
            return
        branches = (1.0,) if (depth == 0 and fix_first) else (1.0, -1.0)
        for sg in branches:
            signs[depth] = sg
            visit(depth + 1, fixed + sg * a[:, depth])
        signs[depth] = 1.0

    visit(0, np.zeros(a.shape[0], dtype=np.complex128))
    return state["signs"], state["best"], state["nodes"]


def _bnb_rows(coeff: np.ndarray, bk: int, evaluate, fix_first: bool):
    """Depth-first search on the discretized rows with a magnitude-sum bound."""
    n_samp, levels, _ = coeff.shape
    tail = np.abs(coeff)[:, :, ::-1].cumsum(axis=2)[:, :, ::-1]
    tail = np.concatenate([tail, np.zeros((n_samp, levels, 1))], axis=2)
    signs = np.ones(bk, dtype=np.float64)
    state = {"best": np.inf, "signs": None, "nodes": 0}

    def visit(depth: int, fixed: np.ndarray):
        state["nodes"] += 1
        bound = max(0.0, float((fixed - tail[:, :, depth]).max()))
        if bound >= state["best"]:
            return
        if depth == bk:
            value = evaluate(signs)
            if value < state["best"]:
                state["best"] = value
                state["signs"] = signs.copy()
            return
        branches = (1.0,) if (depth == 0 and fix_first) else (1.0, -1.0)
        for sg in branches:
            signs[depth] = sg
            visit(depth + 1, fixed + sg * coeff[:, :, depth])
        signs[depth] = 1.0

    visit(0, np.zeros((n_samp, levels), dtype=np.float64))
    return state["signs"], state["best"], state["nodes"]


def _realized_papr(frame: Frame, signs: np.ndarray) -> float:
    values = np.zeros(frame.config.n_subcarriers, dtype=np.complex128)
    values[frame.support] = frame.config.amplitude * signs
    plan = TransformPlan.from_config(frame.config)
    return papr(plan.transform(values), frame.config.mean_power)


def _make_report(frame, signs, value, count, is_nodes, t0) -> SolverReport:
    realized = _realized_papr(frame, signs)
    return SolverReport(
        objective=value,
        papr=realized,
        papr_db=10.0 * np.log10(realized),
        nodes=count if is_nodes else 0,
        iterations=0 if is_nodes else count,
        bound_gap=0.0,
        wall_time=time.perf_counter() - t0,
    )


def solve_exact_binary(frame: Frame, opts: SignSolverOptions | None = None
                       ) -> tuple[np.ndarray, SolverReport]:
    """Minimize the true peak modulus over sign loadings.

    The global sign flip is a symmetry of the modulus, so the first sign is
    fixed to +1 and the canonical representative is returned; among equal
    objectives the +1-first lexicographic order decides.
    """
    if opts is None:
        opts = SignSolverOptions()
    t0 = time.perf_counter()
    a = amplitude_steering(frame, opts.sample_range)
    bk = frame.config.n_active_total
    evaluate = _exact_evaluator(a)
    if opts.method == "exhaustive":
        signs, value, count = _enumerate_signs(bk, evaluate, True, opts.exhaustive_cap)
        return signs, _make_report(frame, signs, value, count, False, t0)
    signs, value, count = _bnb_exact(a, bk, evaluate, True)
    return signs, _make_report(frame, signs, value, count, True, t0)


def solve_discretized(frame: Frame, disc: DiscretizationConfig,
                      opts: SignSolverOptions | None = None
                      ) -> tuple[np.ndarray, SolverReport]:
    """Minimize the discretized peak (max constraint row) over sign loadings.

    The angle set is not symmetric under negation for odd P, so the flip
    symmetry of the exact program is unavailable and all sign vectors are
    searched.
    """
    if opts is None:
        opts = SignSolverOptions()
    t0 = time.perf_counter()
    cs = build_constraints(frame, disc, sample_range=opts.sample_range)
    bk = frame.config.n_active_total
    evaluate = _rows_evaluator(cs.as_matrix())
    if opts.method == "exhaustive":
        signs, value, count = _enumerate_signs(bk, evaluate, False, opts.exhaustive_cap)
        return signs, _make_report(frame, signs, value, count, False, t0)
    signs, value, count = _bnb_rows(cs.coefficients, bk, evaluate, False)
    return signs, _make_report(frame, signs, value, count, True, t0)


def verify_discretization_bound(exact_value: float, discretized_value: float,
                                levels: int) -> bool:
    """Certificate relating the two optima: exact <= discretized * sec(pi/P)."""
    return exact_value <= discretized_value / np.cos(np.pi / levels) + 1e-12
