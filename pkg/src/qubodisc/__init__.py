"""Correlation-based binary discretization of continuous variables for QUBO annealers."""

from ._backend import DEFAULT as BACKEND
from .annealer import AnnealResult, AnnealSchedule, anneal
from .datagen import GeneratorConfig, generate, trial_splits
from .encoding import DEFAULT_BASIS, BasisVector, EncodingPlan, decode, full_plan, reduce_plan
from .errors import DimensionError, PairingError, SingularityError
from .gibbs_sampler import (
    CorrelationReport,
    SamplerConfig,
    correlation_matrix,
    sample_chain,
    select_pairs,
)
from .harness import ExperimentConfig, TrialReport, random_pairs, run_experiment, run_trial
from .qubo_core import (
    IsingProblem,
    QuboProblem,
    delta_energy,
    energy,
    ising_to_qubo,
    qubo_to_ising,
)
from .regression import RegressionDataset, build_qubo, cost_reduced, exact_solve, mae

__version__ = "0.1.0"
