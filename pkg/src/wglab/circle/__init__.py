"""Frequency side: arcs, complete sums, generating functions, scans, moments."""

from .arcs import ArcPoint, arc_parameters, circle_distance, classify, classify_bruteforce, convergents
from .spectral import (
    ArcScan,
    box_hat,
    energy_direct,
    energy_pairs,
    fourier_grid,
    moment_norm,
    moment_report,
    pseudorandomness_report,
    scan_sequence,
    sparse_hat,
)
from .sums import (
    H_d,
    check_modulus_shape,
    complete_sum_S,
    complete_sum_V,
    complete_sum_V_spectrum,
    gen_fn,
    gen_fn_roots,
    major_arc_residual,
    major_arc_terms,
    nu_integral,
    psi,
    smooth_sum_nu,
    v_q_closed_form,
    w_smooth_split,
)
from .vinogradov import vinogradov_count, vinogradov_count_nested

__all__ = [
    "ArcPoint",
    "ArcScan",
    "H_d",
    "arc_parameters",
    "box_hat",
    "check_modulus_shape",
    "circle_distance",
    "classify",
    "classify_bruteforce",
    "complete_sum_S",
    "complete_sum_V",
    "complete_sum_V_spectrum",
    "convergents",
    "energy_direct",
    "energy_pairs",
    "fourier_grid",
    "gen_fn",
    "gen_fn_roots",
    "major_arc_residual",
    "major_arc_terms",
    "moment_norm",
    "moment_report",
    "nu_integral",
    "pseudorandomness_report",
    "psi",
    "scan_sequence",
    "smooth_sum_nu",
    "sparse_hat",
    "v_q_closed_form",
    "vinogradov_count",
    "vinogradov_count_nested",
    "w_smooth_split",
]
