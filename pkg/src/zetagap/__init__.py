"""Numerical companion to a zeta' zero-gap theorem: special functions, certified
zero location, zero counting and the kernel identities behind the bound."""

from .specfun import Accuracy, ComplexPoint, EvalResult, hardy_z, log_gamma, riemann_siegel_theta, zeta, zeta_prime
from .zerofinder import (CertifiedZeros, Rectangle, ZetaPrimeZero, ZetaZero, count_zeros_rectangle,
                         locate_critical_zeros, locate_zeta_prime_zeros, refine_root_newton)
from .counting import CountingValues, n_of_t, s_of_t
from .theoremlab import PoissonKernel, kernel_closed_forms, lemma1_sum, pair_nearest, solve_c0

__all__ = [
    "Accuracy", "ComplexPoint", "EvalResult", "hardy_z", "log_gamma", "riemann_siegel_theta",
    "zeta", "zeta_prime", "CertifiedZeros", "Rectangle", "ZetaPrimeZero", "ZetaZero",
    "count_zeros_rectangle", "locate_critical_zeros", "locate_zeta_prime_zeros",
    "refine_root_newton", "CountingValues", "n_of_t", "s_of_t", "PoissonKernel",
    "kernel_closed_forms", "lemma1_sum", "pair_nearest", "solve_c0",
]
