"""Battery-mediated smart-meter privacy: EMS channel, block policy, exact leakage."""
from .errors import DomainError, InvariantViolation, PolicyInfeasibleError, ResourceError
from .leakage import (LeakageReport, binary_entropy, brute_force_min_leakage, exact_leakage,
                      mean_interval_bound, theorem1_bound, theorem2_rate, theorem3_bound,
                      theorem4_rate, verify_disjointness)
from .model import (BatteryTrajectory, EmsConfig, Violation, enumerate_stable_set, is_stable,
                    step, trajectory)
from .policy import (BlockAlphabet, PolicyTable, apply_policy, choose_block, echo_policy,
                     greedy_charge_policy, max_block_length)
from .processes import (SequenceDistribution, iid_process, markov_process, mean_block_process,
                        mean_of, point_mass, uniform_block_process)

__version__ = "0.1.0"
