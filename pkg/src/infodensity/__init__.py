"""Simulation of how a Markov learner's information density shapes the
randomness of the mistakes it makes."""

from .bitseq import BitSequence, count_words, frequency_of_ones, to_ascii_bytes
from .complexity import algorithmic_complexity, compress_len, sys_ratio
from .harness import RunConfig, SweepGrid, aggregate, paper_grid, run_one, sweep, threshold_rho
from .learner import decide, estimate, predict_and_score, system_bytes
from .randomness import bernoulli_word_model, delta_zero, divergence, empirical_distribution
from .source import SourceModel, generate, make_paper_source, make_rng

__version__ = "0.1.0"
