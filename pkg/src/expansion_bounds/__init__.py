"""Numerical lower bounds on the edge expansion of random regular graphs."""
__version__ = "0.1.0"

from .asymmetric import Certificate, CellBound, certify_asymmetric, cell_upper_bound
from .baseline import BaselineResult, baseline, bollobas_bound, bollobas_eta
from .entropy import EntropyProblem, EntropySolution, phi_star, solve_entropy
from .symmetric import h_value, nu_star

__all__ = [
    "BaselineResult", "Certificate", "CellBound", "EntropyProblem", "EntropySolution",
    "baseline", "bollobas_bound", "bollobas_eta", "cell_upper_bound", "certify_asymmetric",
    "h_value", "nu_star", "phi_star", "solve_entropy",
]
