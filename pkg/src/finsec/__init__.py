"""Finite sections of structured operators on l^2.

Generators for Toeplitz, Hankel, Cuntz, permutation and interlacing-chain
matrix sequences, singular value and spectral diagnostics over a finite
horizon, and exact algebraic identity checks.
"""
from .exceptions import (
    EmptySet, FinsecError, NegativeSquare, NotInterlacing, NotNormal, NotSelfAdjoint,
    NumericalBreakdown, SpectrumMismatch, TooFewIndices, ZeroOnCircle,
)
from .identities import (
    IdentityReport, cuntz_projection_check, cuntz_relations_check, norm_formula_check,
    reflection_check, widom_check,
)
from .matgen import (
    InterlaceChain, MatrixSequence, arveson_permutation, arveson_pi, block_flip, cuntz_difference,
    cuntz_isometry, cuntz_word, embed, exf340_sequence, exf340_tuples, finite_rank, hankel,
    interlace_chain, interlace_extend, random_interlace_chain, reflect_conjugate, toeplitz,
)
from .seqlab import (
    DichotomyReport, PointClass, SingularProfile, Verdict, alpha_parity_check, classify_compact,
    classify_fractal_normal, classify_fredholm, classify_point, classify_stability, dichotomy_scan,
    extract_fractal_subsequence, profile, stabilize, stabilizing_perturbation,
)
from .spectra import count_in_interval, hausdorff, limiting_sets, singular_values, sym_eigenvalues
from .symbols import FourierSymbol, conj_flip, evaluate, flip, multiply, sup_norm, winding_number

__version__ = "0.1.0"
