"""Closed-form Lq-spectra and box dimensions of planar box-like
graph-directed self-affine measures, validated against brute-force
oracles."""

from .diagonal import (DiagonalBranch, box_dimension_diagonal,
                       diag_weight_matrix, edge_stationary, gamma_endpoints,
                       lq_spectrum_diagonal, lq_spectrum_ifs_diagonal)
from .errors import (BracketFailure, BudgetExceeded, CrossCheckError,
                     FormatError, GifsValidationError, MalformedPattern,
                     NotAdmissible, NotAtRhoOne, NotDiagonalSystem,
                     NotIrreducible, NotSingleVertex, RegimeAmbiguous,
                     Violation)
from .general import (GeneralBranch, HatEdge, box_dimension_general,
                      hat_edge_matrix, hat_edges, hat_gamma, hat_words,
                      ifs_collapsed_matrix, ifs_spectrum_via_collapsed,
                      lq_spectrum_general, mate)
from .model import (AffineEdge, GifsModel, RoscReport, WordGeometry,
                    check_rosc, compose_word, load_model, validate_gifs)
from .oracles import (BoxCountResult, PressureBracket, box_count_spectrum,
                      box_count_tau, gamma_pressure, pressure,
                      stopping_set_sum, variational_tau_ifs)
from .projections import (DoubledGraph, FamilySplit, TauPair,
                          build_doubled_graph, partition_families,
                          projection_tau, tau_pair)
from .spectral import (HatSplit, LabeledMatrix, PerronData, perron_data,
                       reducible_split, solve_rho_one, spectral_radius,
                       stationary_g)
from .spectrum import SpectrumPoint, q_grid, spectrum_point, spectrum_rows

__version__ = "0.1.0"

__all__ = [
    "AffineEdge", "BoxCountResult", "BracketFailure", "BudgetExceeded",
    "CrossCheckError", "DiagonalBranch", "DoubledGraph", "FamilySplit",
    "FormatError", "GeneralBranch", "GifsModel", "GifsValidationError",
    "HatEdge", "HatSplit", "LabeledMatrix", "MalformedPattern",
    "NotAdmissible", "NotAtRhoOne", "NotDiagonalSystem", "NotIrreducible",
    "NotSingleVertex", "PerronData", "PressureBracket", "RegimeAmbiguous",
    "RoscReport", "SpectrumPoint", "TauPair", "Violation", "WordGeometry",
    "box_count_spectrum", "box_count_tau", "box_dimension_diagonal",
    "box_dimension_general", "build_doubled_graph", "check_rosc",
    "compose_word", "diag_weight_matrix", "edge_stationary",
    "gamma_endpoints", "gamma_pressure", "hat_edge_matrix", "hat_edges",
    "hat_gamma", "hat_words", "ifs_collapsed_matrix",
    "ifs_spectrum_via_collapsed", "load_model", "lq_spectrum_diagonal",
    "lq_spectrum_general", "lq_spectrum_ifs_diagonal", "mate",
    "partition_families", "perron_data", "pressure", "projection_tau",
    "q_grid", "reducible_split", "solve_rho_one", "spectral_radius",
    "spectrum_point", "spectrum_rows", "stationary_g", "stopping_set_sum",
    "tau_pair", "validate_gifs", "variational_tau_ifs",
]
