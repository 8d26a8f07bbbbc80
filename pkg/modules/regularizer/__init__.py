from .models import Lemma2Report, ProbMatrix, WeightDiag  # noqa: F401
from .services import (  # noqa: F401
    default_weight_diag,
    grad_loss0,
    grad_loss0_logits,
    lemma2_check,
    loss_components,
    nonuniformity_counts,
    nonuniformity_sweep,
    softmax_backward,
    softmax_rows,
)
