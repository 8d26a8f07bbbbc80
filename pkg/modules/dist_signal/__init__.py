from .models import (  # noqa: F401
    BoundReport,
    Coupling,
    CoverResult,
    DiscreteDistribution,
    JointDistribution,
    Marginals,
)
from .services import (  # noqa: F401
    coupling_lp_oracle,
    optimal_coupling,
    tv_cover,
    tv_exact,
    tv_l1_l2,
    tv_tree_rooted,
    wasserstein_sq,
)
from .bounds import check_bounds, run_bounds_suite  # noqa: F401
