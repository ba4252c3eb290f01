"""adder-capacity: capacity bounds of the Q-frequency S-user vector adder channel."""

from .__about__ import __version__
from .channel import BoundValue, ChannelConfig, InputDistribution, read_distribution_file, relative
from .coordinated import (
    coord_large_gamma_asymptote, coord_lower_asymptotic, coord_lower_finite,
    coord_upper_asymptotic, coord_upper_finite,
)
from .errors import CapacityError
from .numerics import SeriesControl
from .oracle import (
    OutputDistribution, enumerate_output_distribution, exact_entropy, exact_single_user_mi,
    lemma1_check, output_probability,
)
from .simulator import SimulationConfig, SimulationEstimate, estimate_entropy, estimate_mi, sample_output
from .uncoordinated import (
    GammaStarResult, cached_gamma_star, distorted_distribution, find_gamma_star, lemma2_sequence,
    single_user_mi, uc_lower_asymptotic, uc_sum_rate, uc_unif_asymptotic, uc_upper_asymptotic,
    uc_upper_finite,
)

__all__ = [
    '__version__',
    'BoundValue', 'ChannelConfig', 'InputDistribution', 'read_distribution_file', 'relative',
    'coord_large_gamma_asymptote', 'coord_lower_asymptotic', 'coord_lower_finite',
    'coord_upper_asymptotic', 'coord_upper_finite',
    'CapacityError', 'SeriesControl',
    'OutputDistribution', 'enumerate_output_distribution', 'exact_entropy', 'exact_single_user_mi',
    'lemma1_check', 'output_probability',
    'SimulationConfig', 'SimulationEstimate', 'estimate_entropy', 'estimate_mi', 'sample_output',
    'GammaStarResult', 'cached_gamma_star', 'distorted_distribution', 'find_gamma_star', 'lemma2_sequence',
    'single_user_mi', 'uc_lower_asymptotic', 'uc_sum_rate', 'uc_unif_asymptotic', 'uc_upper_asymptotic',
    'uc_upper_finite',
]
