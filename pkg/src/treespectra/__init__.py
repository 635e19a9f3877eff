"""Spectra of self-similar groups acting on rooted trees.

Builds level-n permutation representations and weighted averaging
operators for groups given by wreath recursion, computes their spectra,
compares them against closed-form limit sets (intervals and Julia-set
images), constructs Schreier action graphs and substitutional graphs,
and evaluates characteristic-polynomial identities.

Set TREESPECTRA_THREADS before the first import to cap the BLAS/OpenMP
thread count of the numerical backends.
"""
import os as _os

_threads = _os.environ.get("TREESPECTRA_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)
del _os, _threads

from ._kernels import BACKEND
from .automata import (
    BUILTIN_NAMES,
    Generator,
    SelfSimilarGroup,
    act_vertex,
    builtin_group,
    ggs_group,
    load_group,
    parse_group,
    parse_word,
)
from .charpoly import (
    FactorParams,
    charpoly_product,
    charpoly_product_scaled,
    charpoly_value,
    check_product_identity,
    check_rational_recursion,
    product_zeros,
    spectral_correspondence,
)
from .eigen import SpectrumApprox, hausdorff_distance, multiset_contained, symmetric_eigenvalues
from .levelrep import (
    LevelRep,
    WeightedOperator,
    build_level_rep,
    hecke_operator,
    level_permutation,
    uniform_hecke_operator,
    uniform_weights,
    verify_block_identities,
    vertex_index,
)
from .schreier import (
    GrowthSeries,
    LabeledGraph,
    action_graph,
    ball_growth,
    growth_exponent,
    markov_operator,
    rooted_labeled_isomorphic,
    to_csv,
    to_dot,
)
from .spectra import (
    JuliaApprox,
    SpectralSet,
    julia_backward,
    predicted_spectrum,
    set_distance,
)
from .substitution import (
    SubstitutionRule,
    SubstitutionSystem,
    expand,
    find_embeddings,
    gamma_substitution_system,
    load_substitution_system,
)

__version__ = "0.1.0"
