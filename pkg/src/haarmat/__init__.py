"""Haar-random matrices from U(N), O(N), USp(2N) and the circular ensembles."""
from .checks import MatrixProperty, ResidualReport, check, check_ensemble
from .qr import HouseholderStep, QrConvention, QrFactors, SingularMatrixError, householder_step, phase_fix, qr_decompose
from .quaternion import Quaternion, QuaternionArray, embed_matrix, embed_scalar, q_mul, qm_conj_transpose, qm_mul
from .rng import NormalScalarKind, RngStream, ginibre_matrix, normal_complex, normal_quaternion, normal_real
from .sampler import (
    Algorithm,
    EnsembleKind,
    EnsembleSpec,
    sample,
    sample_batch,
    sample_coe,
    sample_cse,
    sample_cue_wrong,
    sample_haar_orthogonal,
    sample_haar_sp_quaternion,
    sample_haar_unitary,
    sample_haar_usp,
    sample_orthogonal_householder_product,
    sample_permutation,
    sample_sphere,
    sample_unitary_householder_product,
)
from .spectra import (
    EigenphaseSet,
    GofReport,
    HistogramData,
    chi_square_uniform,
    dedup_kramers,
    density_histogram,
    eigenphases,
    ks_test,
    spacings,
    wigner_surmise,
)

__version__ = "0.1.0"
