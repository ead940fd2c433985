"""First-order methods with higher-degree inexact (delta, L, q)-models."""
from .errors import (BudgetExceeded, InfeasibleStart, LineSearchExhausted,
                     MissingGapEvaluator, ZeroGradient)
from .fgm import (DeltaSchedule, admissible_delta, epsilon_of_q, fgm_bound,
                  restart_schedule, run_adaptive_fgm, run_restarted_fgm, solve_alpha,
                  universal_complexity_bound)
from .gm import GmConfig, gm_bound, run_adaptive_gm
from .model import (InexactOracle, LinearModel, ModelEvaluation, collapse_to_q0, holder_L,
                    make_absolute_noise_oracle, make_exact_oracle, make_holder_oracle,
                    make_relative_noise_oracle, make_shifted_point_oracle, model_residual)
from .problems import (BestApproximation, FermatTorricelliSteiner, ReferenceValue,
                       generate_best_approx, generate_fts, load_problem, reference_fmin,
                       save_problem)
from .sets import Box, EuclideanBall, FeasibleSet, ProductSet, prox_linear, prox_model
from .strong import StrongOracle, quadratic_strong_oracle, run_strong_gm, strong_bound
from .subgradient import RULES, StepRule, run_projected_subgradient, step_size
from .trace import RunResult, read_trace_csv, trace_to_csv
from .vi import (SaddleProblem, VIModel, affine_operator_model, bilinear_saddle,
                 operator_model, run_mirror_prox, saddle_gap, saddle_to_vi, vi_bound,
                 weak_gap)

__version__ = "0.1.0"
