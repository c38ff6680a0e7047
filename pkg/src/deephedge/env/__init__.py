from .baselines import BASELINE_KINDS, baseline_policy
from .config import EnvConfig
from .core import (
    TRACE_COLUMNS,
    EpisodeTrace,
    HedgingEnv,
    Observation,
    PanelView,
    StepOutcome,
    VecHedgingEnv,
    constant_policy,
    episode_starts,
    replay_split,
    rollout,
    step_economics,
    traces_to_csv_text,
)
