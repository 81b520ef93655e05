"""Multifractal spectra of the Farey-Brocot partition under the hyperbolic measure."""
from .farey_core import (Domain, FareyInterval, LevelStats, DyadicMeasureResult, mediant,
                         traverse_level, reduce_level, iter_intervals, level_endpoints,
                         level_stats, interval_of, appearance_level, dyadic_measure)
from .contfrac import (CFExpansion, ConvergentSequence, DigitFrequencies, expand, cumulants,
                       lemma1_estimate, alpha_sequence, lr_word, cf_of_word)
from .partition import QGrid, TauSample, make_qgrid, tau_bar, tau_bar_prime, beta_k
from .spectra import (LegendrePoint, SpectrumCurve, NumericalError, legendre_spectrum,
                      invert_spectrum, computational_spectrum, alpha_unity, alpha_max,
                      calibrate_q_max, concavity_report)
from .theory import (SystemSolution, TheoreticalPoint, PhiSample, PhiCurve, SolverError, dim_EK,
                     K_of_m, lambda_bar, alpha_of_m_large, solve_system, theoretical_point,
                     theoretical_spectrum, phi_curve)
from .verify import (ComparisonRow, first_legendre_rows, second_legendre_rows, phi_first_rows,
                     phi_derivative_rows, restricted_rows, error_report, table_level, build_table)

__version__ = "0.1.0"
