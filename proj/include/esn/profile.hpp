#pragma once

#include "esn/replica.hpp"
#include "esn/types.hpp"

#include <cstdint>

namespace esn {

/// Symmetric PSD matrix with its eigendecomposition, sizes descending.
struct CovarianceDecomposition {
    MatrixXd covariance;
    MatrixXd directions;  ///< orthonormal columns Q_i
    VectorXd sizes;       ///< sigma_i^2, nonincreasing, clamped at 0
};

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
/// Negative eigenvalues are clamped to 0 in `sizes`.
CovarianceDecomposition decompose(const MatrixXd& symmetric);

/// Mean-removed covariance <(x - <x>)(x - <x>)^T>_t with its decomposition.
CovarianceDecomposition covariance(const StateMatrix& states);

/// Mean-removed cross-covariance <(a - <a>)(b - <b>)^T>_t, symmetrized as
/// (C + C^T) / 2 unless `symmetrize` is false. cross_covariance(a, a) equals
/// covariance(a).covariance exactly.
MatrixXd cross_covariance(const StateMatrix& a, const StateMatrix& b, bool symmetrize = true);

/// Pointwise replica mean x^c(t).
Trajectory consistent_component(const ReplicaEnsemble& ensemble);

/// n^i(t) = x^i(t) - x^c(t).
Trajectory inconsistent_component(const ReplicaEnsemble& ensemble, std::size_t replica);

/// Symmetric inverse square root restricted to well-conditioned directions.
struct Whitening {
    MatrixXd transform;   ///< T_o
    int retained = 0;
    int discarded = 0;    ///< directions with sigma^2 <= null_threshold * max sigma^2
};

inline constexpr double kDefaultNullThreshold = 1e-10;

/// T_o = Q diag(1/sigma) Q^T over retained directions. Throws
/// Error("degenerate response") when nothing is retained.
Whitening whitening_transform(const CovarianceDecomposition& full,
                              double null_threshold = kDefaultNullThreshold);

struct ProfileOptions {
    double regularization = 0.0;     ///< measurement-noise amplitude lambda
    double null_threshold = kDefaultNullThreshold;
    bool use_ensemble_mean = false;  ///< C_c from covariance(x^c) instead of the 1-2 cross-covariance
    double effective_threshold = 0.5;
    std::uint64_t noise_seed = 0;    ///< measurement noise streams, one per replica
};

struct ConsistencyProfile {
    VectorXd levels;                  ///< consistency levels over retained directions, descending, >= 0
    MatrixXd directions;              ///< consistency readout vectors T_o e_k in original coordinates
    MatrixXd whitened_directions;     ///< e_k, eigenvectors of the whitened consistent covariance
    CovarianceDecomposition full;     ///< PCA of the full response (replica 1)
    MatrixXd consistent_covariance;   ///< C_c before whitening
    Whitening whitening;
    int effective_dimension = 0;      ///< levels above effective_threshold
    int clamped_levels = 0;           ///< negative sampled levels set to 0
    double global_consistency = 0.0;  ///< gamma-hat^2 of replicas 1 and 2 as analysed
    double regularization = 0.0;
};

/// Adds lambda * xi(t) to every state sample, an independent stream per replica.
ReplicaEnsemble add_measurement_noise(const ReplicaEnsemble& ensemble, double amplitude, std::uint64_t seed);

/// Whitens the consistent covariance by the full-response covariance and
/// reads off its eigenvalues as consistency levels.
ConsistencyProfile consistency_profile(const ReplicaEnsemble& ensemble, const ProfileOptions& options = {});

/// Gamma_i^2 of the projections a . Q_i and b . Q_i for every column of
/// `directions`; NaN where a projection has zero variance.
VectorXd pc_readout_consistencies(const StateMatrix& a, const StateMatrix& b, const MatrixXd& directions);

/// Samples of the 2-D test system with its exact consistent component.
struct TestSystemSample {
    ReplicaEnsemble ensemble;  ///< K >= 2
    Trajectory consistent;     ///< the generating x^c(t)
};

/// x^c = xi1 (1, 1) + xi2 (0.5, -0.5); n^i = nu1i (1, 0) + nu2i (0, 0.3);
/// x^i = x^c + n^i; all coefficients IID N(0, 1) from (seed, test_system).
TestSystemSample test_system_sample(Index length, std::uint64_t seed, int replicas = 2);

/// Exact second moments of the test system.
MatrixXd test_system_consistent_covariance();
MatrixXd test_system_noise_covariance();
MatrixXd test_system_full_covariance();

/// Empirical-vs-analytic comparison of the test system.
struct TestSystemAudit {
    MatrixXd full_empirical, full_analytic;
    MatrixXd consistent_empirical, consistent_analytic;
    MatrixXd whitening;
    MatrixXd whitened_full;         ///< T_o C_xx T_o
    MatrixXd whitened_consistent;   ///< T_o C_c T_o
    MatrixXd whitened_inconsistent; ///< T_o C_n T_o, C_n from x^1 - x^c
    MatrixXd consistent_axes;       ///< eigenvectors of whitened_consistent, levels descending
    MatrixXd inconsistent_axes;     ///< eigenvectors of whitened_inconsistent, matched to consistent_axes
    VectorXd levels;                ///< consistency levels, descending
    VectorXd inconsistent_levels;   ///< e_k^T C_n-bar e_k along consistent_axes
    VectorXd axis_cosines;          ///< |cos| between matched axes
    double full_error = 0.0;        ///< Frobenius relative
    double consistent_error = 0.0;
    double whitened_error = 0.0;    ///< |T_o C_xx T_o - I|_F / |I|_F
};

TestSystemAudit test_system_audit(const TestSystemSample& sample);

/// Frobenius norm of (a - b) relative to b.
double relative_frobenius(const MatrixXd& a, const MatrixXd& b);

}  // namespace esn
