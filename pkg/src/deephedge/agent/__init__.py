from .checkpoint import Checkpoint, feature_fingerprint, load_checkpoint, save_checkpoint
from .distribution import (
    action_log_prob,
    deterministic_action,
    normal_entropy,
    sample_action,
    squashed_log_prob,
)
from .gae import compute_gae, normalize_advantages
from .loss import Batch, LossInfo, loss_and_grads
from .network import (
    PolicyParams,
    clip_by_global_norm,
    flatten,
    forward,
    global_norm,
    init_params,
    unflatten,
    zeros_like,
)
from .optim import AdamState, adam_update, cosine_lr
from .policy import GaussianPolicy
from .trainer import TrainConfig, TrainResult, train
