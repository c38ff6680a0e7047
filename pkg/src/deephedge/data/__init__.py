from .normalize import NormStats, apply_norm, fit_norm_stats, normalize_array
from .panel import (
    DERIVED_COLUMNS,
    FEATURE_COLUMNS,
    INPUT_COLUMNS,
    PANEL_COLUMNS,
    PAPER_SPLIT,
    SPLIT_NAMES,
    FeaturePanel,
    PanelSpec,
    PanelSplits,
    SplitSpec,
    build_panel,
    compute_forward_return,
    features_from_quotes,
    read_input_csv,
    read_panel_csv,
    realized_vol,
    split_labels,
    split_panel,
)
from .quotes import QuoteRecord, forward_fill_guarded, select_quote
from .synthetic import SynthConfig, SyntheticMarket, generate_synthetic, simulate_market
