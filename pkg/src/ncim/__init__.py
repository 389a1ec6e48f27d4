"""PAPR reduction and detection for non-coherent OFDM with index modulation."""

from .baselines import (
    PHASE_ALPHABET,
    PtsConfig,
    SlmCandidateSet,
    make_slm_candidates,
    pts_select,
    slm_select,
)
from .channel import (
    ChannelConfig,
    IndexErrorResult,
    apply_channel,
    ml_detect,
    ml_detect_batch,
    simulate_index_error_rate,
    snr_to_noise_variance,
    trial_rng,
)
from .config import FrameConfig, default_config, small_config
from .estimators import (
    DiscreteSignReducer,
    EnergyDetector,
    FrameEncoder,
    MinimaxPhaseReducer,
    PartialTransmitReducer,
    SelectedMappingReducer,
    SignExchangeReducer,
)
from .exchange import HeuristicState, exchange_sign, heuristic_signs, initial_state
from .frames import (
    Frame,
    NonDecodablePatternError,
    bits_per_cluster,
    bits_per_frame,
    build_frame,
    decode_indices,
    encode_indices,
    pattern_support,
    random_frame,
    random_payload,
    subset_rank,
    subset_table,
    subset_unrank,
)
from .harness import (
    SCHEMES,
    BenchRow,
    CcdfCurve,
    ExperimentSpec,
    TimingTable,
    make_scheme,
    run_bench,
    run_ber,
    run_ccdf,
)
from .phase_opt import (
    PhaseSolverOptions,
    optimize_phases,
    smoothed_gradient,
    smoothed_objective,
)
from .report import SolverReport
from .sign_opt import (
    ConstraintSystem,
    DiscretizationConfig,
    InstanceTooLargeError,
    SignSolverOptions,
    build_constraints,
    discrete_norm,
    solve_discretized,
    solve_exact_binary,
    verify_discretization_bound,
)
from .transforms import (
    TransformPlan,
    frame_papr,
    frame_papr_db,
    oversampled_transform,
    oversampled_transform_direct,
    pairwise_sample_power,
    papr,
    papr_db,
    sample_power_profile,
    second_papr,
    second_papr_db,
)

__version__ = "0.1.0"
