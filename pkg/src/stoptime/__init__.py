"""Worst-case expected total reward of Markov chains and MDPs when the
stopping time is random with a fixed mean."""
from .errors import (BudgetExceeded, InvariantError, ParseError, PeriodTooLarge,
                     PreconditionError, RangeError)
from .model import (BiDirac, MarkovChain, MarkovStrategy, Mdp, Method, StoppingDistribution,
                    ValueBracket, bidirac_with_expectation, expected_utility, load_model, save_model)
from .chains import (absorption_probs, asymptote, convergence_bound, decompose, gain_bias,
                     steady_state, utility_prefix)
from .stopvalue import (UPSeq, approx_value, bidirac_value, check_distribution_value,
                        lower_bound_family, oracle_value, val_cycle)
from .decide import Answer, ExactInstance, Verdict, bottom_line, exact_decide
from .reductions import (AgtInstance, MarkovReachInstance, PositivityInstance, brute_force_Agt,
                         embed_bias, normalize_no_incoming_initial, reduce_Agt_to_exact,
                         reduce_markovreach_to_positivity)
from .mdp import (back_edge_transform, estimate_value, evaluate_strategy, memory_example,
                  three_component_example, mean_payoff, mec_decompose, reward_bounds, uniformize)
from .etr import export_etr
