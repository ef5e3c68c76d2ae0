"""Position auctions for queues: efficient ordering, VCG and GSP rules,
equilibrium checks, revenue bounds and a brute-force oracle."""

from .bounds import (
    Bound,
    RevenueBounds,
    gsp_revenue_upper,
    revenue_bounds,
    vcg_revenue_lower_dp,
    vcg_pairwise_follower_rate_sum,
    vcg_revenue_upper,
    vcg_revenue_upper_efficient,
)
from .core import (
    Instance,
    Ordering,
    Participant,
    smith_order,
    total_weighted_waiting,
    validate_instance,
    value_rate,
    waiting_cost,
    waiting_costs,
)
from .dynamics import Trace, best_response, run_dynamics
from .equilibrium import (
    gsp_deviation_gain,
    gsp_window_check,
    is_nash,
    is_nash_gsp,
    is_nash_vcg,
    max_equilibrium_bids_gsp,
    max_equilibrium_bids_vcg,
    min_equilibrium_bids_vcg,
    near_sorted_check,
    vcg_deviation_gain,
    vcg_window_check,
    window_check,
)
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .mechanisms import (
    BidProfile,
    GameDescription,
    MechanismKind,
    Outcome,
    gsp_outcome,
    induced_utility,
    make_profile,
    run_mechanism,
    vcg_outcome,
)
from .oracle import enumerate_equilibria, oracle_optimal_ordering, oracle_revenue_extremes

__version__ = "0.1.0"
