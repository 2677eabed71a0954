#include "esn/profile.hpp"

#include "esn/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace esn {

namespace {

MatrixXd centered_product(const StateMatrix& a, const StateMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("covariance: shape mismatch");
    if (a.rows() < 2)
        throw std::invalid_argument("covariance: need at least 2 samples");
    const StateMatrix ac = a.rowwise() - a.colwise().mean();
    const StateMatrix bc = b.rowwise() - b.colwise().mean();
    MatrixXd c = ac.transpose() * bc;
    c /= static_cast<double>(a.rows());
    return c;
}

MatrixXd symmetrized(const MatrixXd& c)
{
    return 0.5 * (c + c.transpose());
}

}  // namespace

double relative_frobenius(const MatrixXd& a, const MatrixXd& b)
{
    return (a - b).norm() / b.norm();
}

CovarianceDecomposition decompose(const MatrixXd& symmetric)
{
    if (symmetric.rows() != symmetric.cols())
        throw std::invalid_argument("decompose: matrix must be square");
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success)
        throw Error("decompose: eigenvalue solve did not converge");
    CovarianceDecomposition d;
    d.covariance = symmetric;
    d.directions = solver.eigenvectors().rowwise().reverse();
    d.sizes = solver.eigenvalues().reverse().cwiseMax(0.0);
    return d;
}

CovarianceDecomposition covariance(const StateMatrix& states)
{
    return decompose(symmetrized(centered_product(states, states)));
}

MatrixXd cross_covariance(const StateMatrix& a, const StateMatrix& b, bool symmetrize)
{
    MatrixXd c = centered_product(a, b);
    return symmetrize ? symmetrized(c) : c;
}

Trajectory consistent_component(const ReplicaEnsemble& ensemble)
{
    ensemble.validate();
    Trajectory out;
    out.first_step = ensemble.replicas.front().first_step;
    out.states = ensemble.replicas.front().states;
    for (std::size_t k = 1; k < ensemble.size(); ++k)
        out.states += ensemble.replicas[k].states;
    out.states /= static_cast<double>(ensemble.size());
    return out;
}

Trajectory inconsistent_component(const ReplicaEnsemble& ensemble, std::size_t replica)
{
    if (replica >= ensemble.size())
        throw std::invalid_argument("inconsistent_component: replica index out of range");
    Trajectory out = consistent_component(ensemble);
    out.states = ensemble.replicas[replica].states - out.states;
    return out;
}

Whitening whitening_transform(const CovarianceDecomposition& full, double null_threshold)
{
    const Index n = full.sizes.size();
    const double top = n > 0 ? full.sizes[0] : 0.0;
    Whitening w;
    w.transform = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        const double s2 = full.sizes[i];
        if (top > 0.0 && s2 > null_threshold * top) {
            const VectorXd& q = full.directions.col(i);
            w.transform.noalias() += (q / std::sqrt(s2)) * q.transpose();
            ++w.retained;
        } else {
            ++w.discarded;
        }
    }
    if (w.retained == 0)
        throw Error("degenerate response");
    return w;
}

ReplicaEnsemble add_measurement_noise(const ReplicaEnsemble& ensemble, double amplitude, std::uint64_t seed)
{
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("measurement noise amplitude must be >= 0");
    ReplicaEnsemble out = ensemble;
    if (amplitude == 0.0)
        return out;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        Rng rng = make_rng(seed, Stream::measurement_noise, k);
        StateMatrix& s = out.replicas[k].states;
        for (Index t = 0; t < s.rows(); ++t)
            for (Index i = 0; i < s.cols(); ++i)
                s(t, i) += amplitude * gauss(rng);
    }
    return out;
}

ConsistencyProfile consistency_profile(const ReplicaEnsemble& ensemble, const ProfileOptions& options)
{
    ensemble.validate();
    const ReplicaEnsemble noisy = options.regularization > 0.0
                                      ? add_measurement_noise(ensemble, options.regularization, options.noise_seed)
                                      : ensemble;
    const StateMatrix& a = noisy.replicas[0].states;
    const StateMatrix& b = noisy.replicas[1].states;

    ConsistencyProfile p;
    p.regularization = options.regularization;
    p.full = covariance(a);
    p.consistent_covariance = options.use_ensemble_mean && noisy.size() > 2
                                  ? covariance(consistent_component(noisy).states).covariance
                                  : cross_covariance(a, b);
    p.whitening = whitening_transform(p.full, options.null_threshold);

    // Work in the retained principal subspace: M = S^-1 U^T C_c U S^-1.
    const Index n = a.cols();
    const Index r = p.whitening.retained;
    MatrixXd basis(n, r);
    VectorXd inv_sigma(r);
    // retained directions are the leading ones since sizes are sorted
    for (Index j = 0; j < r; ++j) {
        basis.col(j) = p.full.directions.col(j);
        inv_sigma[j] = 1.0 / std::sqrt(p.full.sizes[j]);
    }
    MatrixXd scaled = basis * inv_sigma.asDiagonal();
    MatrixXd whitened = scaled.transpose() * p.consistent_covariance * scaled;
    whitened = symmetrized(whitened);
    const CovarianceDecomposition inner = decompose(whitened);
    Eigen::SelfAdjointEigenSolver<MatrixXd> raw(whitened, Eigen::EigenvaluesOnly);
    p.clamped_levels = static_cast<int>((raw.eigenvalues().array() < 0.0).count());

    p.levels = inner.sizes;
    p.whitened_directions = basis * inner.directions;
    p.directions = scaled * inner.directions;
    p.effective_dimension = static_cast<int>((p.levels.array() > options.effective_threshold).count());
    p.global_consistency = global_consistency(node_consistency(a, b));
    return p;
}

VectorXd pc_readout_consistencies(const StateMatrix& a, const StateMatrix& b, const MatrixXd& directions)
{
    if (a.cols() != directions.rows() || b.cols() != directions.rows())
        throw std::invalid_argument("pc_readout_consistencies: dimension mismatch");
    const MatrixXd ya = a * directions;
    const MatrixXd yb = b * directions;
    VectorXd out(directions.cols());
    for (Index i = 0; i < directions.cols(); ++i) {
        try {
            out[i] = readout_consistency(ya.col(i), yb.col(i));
        } catch (const Error&) {
            out[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

MatrixXd test_system_consistent_covariance()
{
    return (MatrixXd(2, 2) << 1.25, 0.75, 0.75, 1.25).finished();
}

MatrixXd test_system_noise_covariance()
{
    return (MatrixXd(2, 2) << 1.0, 0.0, 0.0, 0.09).finished();
}

MatrixXd test_system_full_covariance()
{
    return test_system_consistent_covariance() + test_system_noise_covariance();
}

TestSystemSample test_system_sample(Index length, std::uint64_t seed, int replicas)
{
    if (length < 2)
        throw std::invalid_argument("test_system_sample: need at least 2 samples");
    if (replicas < 2)
        throw std::invalid_argument("test_system_sample: need at least 2 replicas");
    TestSystemSample s;
    s.consistent.states.resize(length, 2);
    s.ensemble.replicas.resize(static_cast<std::size_t>(replicas));
    for (auto& r : s.ensemble.replicas)
        r.states.resize(length, 2);
    Rng rng = make_rng(seed, Stream::test_system);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index t = 0; t < length; ++t) {
        const double xi1 = gauss(rng), xi2 = gauss(rng);
        const double c0 = xi1 + 0.5 * xi2;
        const double c1 = xi1 - 0.5 * xi2;
        s.consistent.states(t, 0) = c0;
        s.consistent.states(t, 1) = c1;
        for (auto& r : s.ensemble.replicas) {
            const double nu1 = gauss(rng), nu2 = gauss(rng);
            r.states(t, 0) = c0 + nu1;
            r.states(t, 1) = c1 + 0.3 * nu2;
        }
    }
    s.ensemble.initial_seeds.assign(static_cast<std::size_t>(replicas), derive_seed(seed, Stream::test_system));
    s.ensemble.noise_seeds = s.ensemble.initial_seeds;
    return s;
}

TestSystemAudit test_system_audit(const TestSystemSample& sample)
{
    const StateMatrix& x1 = sample.ensemble.replicas.at(0).states;
    const StateMatrix& x2 = sample.ensemble.replicas.at(1).states;
    TestSystemAudit au;
    const CovarianceDecomposition full = covariance(x1);
    au.full_empirical = full.covariance;
    au.full_analytic = test_system_full_covariance();
    au.consistent_empirical = cross_covariance(x1, x2);
    au.consistent_analytic = test_system_consistent_covariance();
    au.whitening = whitening_transform(full).transform;
    const MatrixXd& t = au.whitening;
    au.whitened_full = t * au.full_empirical * t.transpose();
    au.whitened_consistent = symmetrized(t * au.consistent_empirical * t.transpose());
    const StateMatrix residual = x1 - sample.consistent.states;
    au.whitened_inconsistent = symmetrized(t * covariance(residual).covariance * t.transpose());

    const CovarianceDecomposition c = decompose(au.whitened_consistent);
    const CovarianceDecomposition nn = decompose(au.whitened_inconsistent);
    const Index n = c.sizes.size();
    au.consistent_axes = c.directions;
    au.levels = c.sizes;
    au.inconsistent_axes.resize(n, n);
    au.inconsistent_levels.resize(n);
    au.axis_cosines.resize(n);
    for (Index k = 0; k < n; ++k) {
        Index best = 0;
        double best_cos = -1.0;
        for (Index j = 0; j < n; ++j) {
            const double cs = std::abs(c.directions.col(k).dot(nn.directions.col(j)));
            if (cs > best_cos) {
                best_cos = cs;
                best = j;
            }
        }
        au.inconsistent_axes.col(k) = nn.directions.col(best);
        au.axis_cosines[k] = best_cos;
        au.inconsistent_levels[k] = c.directions.col(k).dot(au.whitened_inconsistent * c.directions.col(k));
    }
    au.full_error = relative_frobenius(au.full_empirical, au.full_analytic);
    au.consistent_error = relative_frobenius(au.consistent_empirical, au.consistent_analytic);
    au.whitened_error = relative_frobenius(au.whitened_full, MatrixXd::Identity(n, n));
    return au;
}

}  // namespace esn
