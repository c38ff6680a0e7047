from .blend import (
    BlendReport,
    LegStats,
    blend,
    blend_sweep,
    frontier_frame,
    leg_stats,
    min_variance_weight,
)
from .metrics import (
    EVAL_COLUMNS,
    EvalReport,
    cost_normalized_profit,
    evaluate_traces,
    max_drawdown,
    reports_frame,
    sharpe,
    turnover_and_hit_rate,
)
from .regimes import PAPER_PERIODS, TERCILE_LABELS, RegimeTable, period_buckets, regime_attribution, vix_terciles
from .significance import SharpeCI, block_bootstrap_ci, naive_se, newey_west_se, sharpe_nw_se
