"""Transient analysis of file dissemination in peer-to-peer swarms.

Sample paths of the swarm jump processes, their branching and fluid-limit
approximations, the fixed request-rate model and the investment problem of
a content owner, plus an experiment harness that produces plot-ready data.
"""

__version__ = "0.1.0"

from .model import (ControlParams, FixedRateParams, FixedRateState, GeneralParams, GeneralState,
                    InvalidCounts, InvalidFractions, InvalidRate, MeanFieldState, ParameterError,
                    derived_quantities, params_from_json, params_to_json, validate)
from .branching import (BranchingParams, Supercritical, branching_validity_horizon,
                        expected_extinction_time, extinction_cdf, extinction_probability,
                        survival_upper_bound)
from .meanfield import (MeanFieldParams, conserved_quantity, fully_coop_closed_form, integrate_ode,
                        peak_fraction, phase_sweep, phase_transition_theta, terminal_time,
                        terminal_uninfected)
from .fixedrate import (FixedRateMeanField, max_torrent, scaled_trajectory, stop_time,
                        sweep_phase_diagram, terminal_uninfected_fraction)
from .control import (NoInteriorMax, acquisition_cdf, delay_curve, expected_delay,
                      integrate_control_ode, optimize_alpha, utility)
from .ctmc import (Trajectory, simulate_branching, simulate_fixed_rate, simulate_fully_cooperative,
                   simulate_general, simulate_hybrid, simulate_with_publishers)
from .ensemble import EmpiricalCdf, EnsembleResult, child_seed, empirical_cdf, run_ensemble
from .exact import exact_small_n
from .experiments import ExperimentConfig, UnknownFigure, figure, run
