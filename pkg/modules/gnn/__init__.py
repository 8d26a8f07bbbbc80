from .models import (  # noqa: F401
    VARIANTS,
    Dataset,
    FeatureMatrix,
    GcnParams,
    Metrics,
    Split,
    TrainConfig,
)
from .datasets import load_cora, load_file_dataset, sbm_dataset  # noqa: F401
from .services import evaluate, gcn_forward, make_split, train, tune_eta  # noqa: F401
