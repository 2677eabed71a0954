#include "esn/profile.hpp"
#include "esn/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace esn;

namespace {

StateMatrix gaussian(Index rows, Index cols, std::uint64_t seed)
{
    Rng rng = make_rng(seed, Stream::noise);
    std::normal_distribution<double> g;
    StateMatrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i)
        m.data()[i] = g(rng);
    return m;
}

NetworkRealization network(int n, double p, double rho, std::uint64_t seed)
{
    NetworkSpec s;
    s.size = n;
    s.wiring_probability = p;
    s.spectral_radius = rho;
    s.seed = seed;
    return build_network(s);
}

ReplicaEnsemble esn_ensemble(int n, double rho, Index length, int replicas, std::uint64_t seed)
{
    const NetworkRealization net = network(n, 0.1, rho, seed);
    auto drive = std::make_shared<const Drive>(gaussian_drive(length, 1, seed + 1));
    return replica_run(net, drive, replicas, seed + 2);
}

ReplicaEnsemble pair(const StateMatrix& a, const StateMatrix& b)
{
    ReplicaEnsemble e;
    e.replicas.resize(2);
    e.replicas[0].states = a;
    e.replicas[1].states = b;
    return e;
}

// max and min of the readout consistency w'C_c w / w'C_xx w over directions
// w = (cos t, sin t), by exhaustive angle scan
std::pair<double, double> scan_consistency(const MatrixXd& cc, const MatrixXd& cxx)
{
    double hi = -1e300, lo = 1e300;
    const int steps = 200000;
    for (int k = 0; k < steps; ++k) {
        const double t = std::numbers::pi * k / steps;
        const Eigen::Vector2d w(std::cos(t), std::sin(t));
        const double q = w.dot(cc * w) / w.dot(cxx * w);
        hi = std::max(hi, q);
        lo = std::min(lo, q);
    }
    return {hi, lo};
}

double spearman(const VectorXd& a, const VectorXd& b)
{
    auto ranks = [](const VectorXd& v) {
        std::vector<Index> idx(static_cast<std::size_t>(v.size()));
        for (Index i = 0; i < v.size(); ++i)
            idx[static_cast<std::size_t>(i)] = i;
        std::sort(idx.begin(), idx.end(), [&](Index x, Index y) { return v[x] < v[y]; });
        VectorXd r(v.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            r[idx[k]] = static_cast<double>(k);
        return r;
    };
    const VectorXd ra = ranks(a).array() - (a.size() - 1) / 2.0;
    const VectorXd rb = ranks(b).array() - (b.size() - 1) / 2.0;
    return ra.dot(rb) / (ra.norm() * rb.norm());
}

}  // namespace

TEST(Covariance, ConstantTrajectory)
{
    const CovarianceDecomposition d = covariance(StateMatrix::Constant(50, 3, 0.7));
    EXPECT_LT(d.covariance.norm(), 1e-25);
    EXPECT_LT(d.sizes.norm(), 1e-25);
}

TEST(Covariance, PerfectlyCorrelatedPair)
{
    StateMatrix x(4, 2);
    x << 1, 1, -1, -1, 1, 1, -1, -1;
    const CovarianceDecomposition d = covariance(x);
    EXPECT_LT((d.covariance - MatrixXd::Ones(2, 2)).norm(), 1e-15);
    EXPECT_NEAR(d.sizes[0], 2.0, 1e-14);
    EXPECT_NEAR(d.sizes[1], 0.0, 1e-14);
}

TEST(Covariance, WhiteNoiseNearIdentity)
{
    const Index T = 100000;
    const CovarianceDecomposition d = covariance(gaussian(T, 4, 1));
    EXPECT_LT((d.covariance - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 5.0 / std::sqrt(double(T)));
}

TEST(Covariance, DecompositionInvariants)
{
    StateMatrix x = gaussian(3000, 6, 2);
    x.col(3) = x.col(0) - 0.5 * x.col(1);
    const CovarianceDecomposition d = covariance(x);
    EXPECT_LT((d.covariance - d.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    for (Index i = 1; i < d.sizes.size(); ++i)
        EXPECT_LE(d.sizes[i], d.sizes[i - 1]);
    EXPECT_GE(d.sizes.minCoeff(), 0.0);
    const MatrixXd back = d.directions * d.sizes.asDiagonal() * d.directions.transpose();
    EXPECT_LT((back - d.covariance).norm(), 1e-9 * d.covariance.norm());
}

TEST(CrossCovariance, SelfEqualsCovarianceExactly)
{
    const StateMatrix a = gaussian(500, 5, 3);
    EXPECT_TRUE(cross_covariance(a, a) == covariance(a).covariance);
}

TEST(CrossCovariance, IndependentNoiseNearZero)
{
    const Index T = 100000;
    const MatrixXd c = cross_covariance(gaussian(T, 3, 4), gaussian(T, 3, 5));
    EXPECT_LT(c.cwiseAbs().maxCoeff(), 5.0 / std::sqrt(double(T)));
}

TEST(CrossCovariance, SymmetrizedOnRequest)
{
    const StateMatrix a = gaussian(200, 3, 4);
    const StateMatrix b = 0.5 * a + gaussian(200, 3, 5);
    const MatrixXd raw = cross_covariance(a, b, false);
    const MatrixXd sym = cross_covariance(a, b);
    EXPECT_GT((raw - raw.transpose()).norm(), 0.0);
    EXPECT_LT((sym - 0.5 * (raw + raw.transpose())).norm(), 1e-15);
}

TEST(ConsistentComponent, Examples)
{
    const StateMatrix a = gaussian(100, 3, 6);
    const ReplicaEnsemble same = pair(a, a);
    EXPECT_TRUE(consistent_component(same).states == a);
    EXPECT_EQ(inconsistent_component(same, 1).states.norm(), 0.0);
    const ReplicaEnsemble opposite = pair(a, -a);
    EXPECT_EQ(consistent_component(opposite).states.norm(), 0.0);
}

TEST(Whitening, Identity)
{
    const Whitening w = whitening_transform(decompose(MatrixXd::Identity(3, 3)));
    EXPECT_LT((w.transform - MatrixXd::Identity(3, 3)).norm(), 1e-15);
    EXPECT_EQ(w.retained, 3);
}

TEST(Whitening, Diagonal)
{
    const Whitening w = whitening_transform(decompose((MatrixXd(2, 2) << 4, 0, 0, 1).finished()));
    EXPECT_LT((w.transform - (MatrixXd(2, 2) << 0.5, 0, 0, 1).finished()).norm(), 1e-15);
}

TEST(Whitening, IdentityOnExactMatrices)
{
    const MatrixXd a = gaussian(8, 8, 7);
    const MatrixXd c = a * a.transpose() + 0.1 * MatrixXd::Identity(8, 8);
    const MatrixXd t = whitening_transform(decompose(c)).transform;
    EXPECT_LT((t - t.transpose()).norm(), 1e-12);
    EXPECT_LT((t * c * t.transpose() - MatrixXd::Identity(8, 8)).norm(), 1e-8);
}

TEST(Whitening, NullDirectionsProjectedOut)
{
    MatrixXd c = MatrixXd::Zero(3, 3);
    c(0, 0) = 2.0;
    c(1, 1) = 0.5;
    const Whitening w = whitening_transform(decompose(c));
    EXPECT_EQ(w.retained, 2);
    EXPECT_EQ(w.discarded, 1);
    const MatrixXd id = w.transform * c * w.transform.transpose();
    EXPECT_NEAR(id(0, 0), 1.0, 1e-14);
    EXPECT_NEAR(id(1, 1), 1.0, 1e-14);
    EXPECT_EQ(id(2, 2), 0.0);
}

TEST(Whitening, DegenerateResponse)
{
    try {
        whitening_transform(decompose(MatrixXd::Zero(2, 2)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "degenerate response");
    }
}

TEST(TestSystem, AnalyticMoments)
{
    const MatrixXd cc = test_system_consistent_covariance();
    const MatrixXd cxx = test_system_full_covariance();
    EXPECT_LT((cxx - (MatrixXd(2, 2) << 2.25, 0.75, 0.75, 1.34).finished()).norm(), 1e-15);
    EXPECT_LT((cxx - cc - test_system_noise_covariance()).norm(), 1e-15);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(cc);
    EXPECT_NEAR(es.eigenvalues()[1], 2.0, 1e-14);
    EXPECT_NEAR(es.eigenvalues()[0], 0.5, 1e-14);
}

TEST(TestSystem, SampleAuditMatchesAnalyticSystem)
{
    const TestSystemSample s = test_system_sample(1000000, 42);
    const TestSystemAudit au = test_system_audit(s);
    EXPECT_LT(au.consistent_error, 0.02);
    EXPECT_LT(au.full_error, 0.02);
    EXPECT_LT(au.whitened_error, 0.02);
    for (Index k = 0; k < 2; ++k) {
        EXPECT_GE(au.axis_cosines[k], 0.99);
        EXPECT_NEAR(au.levels[k] + au.inconsistent_levels[k], 1.0, 0.02);
    }
    // complementarity in whitened coordinates
    const MatrixXd sum = au.whitened_consistent + au.whitened_inconsistent;
    EXPECT_LT((sum - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.02);

    // levels are the extreme readout consistencies
    const auto [hi, lo] = scan_consistency(test_system_consistent_covariance(), test_system_full_covariance());
    EXPECT_NEAR(au.levels[0], hi, 0.01);
    EXPECT_NEAR(au.levels[1], lo, 0.01);
    const ConsistencyProfile p = consistency_profile(s.ensemble);
    EXPECT_LT((p.levels - au.levels).norm(), 1e-12);
}

TEST(TestSystem, EnsembleMeanMatchesCrossCovariance)
{
    const TestSystemSample s = test_system_sample(100000, 7, 16);
    ASSERT_EQ(s.ensemble.size(), 16u);
    const MatrixXd mean_cov = covariance(consistent_component(s.ensemble).states).covariance;
    const MatrixXd cross = cross_covariance(s.ensemble.replicas[2].states, s.ensemble.replicas[3].states);
    EXPECT_LT(relative_frobenius(mean_cov, cross), 0.05);
}

TEST(ConsistentComponent, EnsembleMeanMatchesCrossCovarianceInInconsistentNetwork)
{
    const ReplicaEnsemble e = esn_ensemble(100, 3.0, 101000, 16, 3);
    const MatrixXd mean_cov = covariance(consistent_component(e).states).covariance;
    const MatrixXd cross = cross_covariance(e.replicas[2].states, e.replicas[3].states);
    EXPECT_LT(relative_frobenius(mean_cov, cross), 0.05);
}

TEST(Profile, ConsistentRegimeHasUnitLevels)
{
    const ReplicaEnsemble e = esn_ensemble(100, 1.0, 11000, 2, 10);
    const ConsistencyProfile p = consistency_profile(e);
    ASSERT_GT(p.levels.size(), 0);
    EXPECT_GT(p.levels.minCoeff(), 0.99);
    EXPECT_LT(p.levels.maxCoeff(), 1.01);
    const VectorXd g = pc_readout_consistencies(e.replicas[0].states, e.replicas[1].states, p.full.directions);
    for (Index i = 0; i < g.size(); ++i)
        if (std::isfinite(g[i]))
            EXPECT_GE(g[i], 0.999) << i;
}

TEST(Profile, IdenticalReplicasGiveUnitReadouts)
{
    const StateMatrix a = gaussian(500, 4, 11);
    const CovarianceDecomposition d = covariance(a);
    const VectorXd g = pc_readout_consistencies(a, a, d.directions);
    EXPECT_LT((g - VectorXd::Ones(4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Profile, InconsistentRegimeInvariants)
{
    const ReplicaEnsemble e = esn_ensemble(100, 3.0, 21000, 2, 20);
    const ConsistencyProfile p = consistency_profile(e);
    ASSERT_LT(p.global_consistency, 0.9);
    for (Index i = 1; i < p.levels.size(); ++i)
        EXPECT_LE(p.levels[i], p.levels[i - 1]);
    EXPECT_GE(p.levels.minCoeff(), 0.0);
    EXPECT_LE(p.levels.maxCoeff(), 1.02);
    EXPECT_LT(p.levels.minCoeff(), 0.5);

    // mean level equals the whitened trace ratio
    const MatrixXd t = p.whitening.transform;
    const double trace = (t * p.consistent_covariance * t.transpose()).trace() / p.levels.size();
    const double clamped_mass = p.levels.mean();
    EXPECT_NEAR(clamped_mass, trace, 0.02);

    // levels match the readout consistency of their own directions
    const VectorXd g = pc_readout_consistencies(e.replicas[0].states, e.replicas[1].states, p.directions);
    for (Index k = 0; k < p.levels.size(); ++k)
        if (p.levels[k] > 0.0)
            EXPECT_NEAR(g[k], p.levels[k], 0.05) << k;

    // larger principal components tend to be more consistent
    const VectorXd pc = pc_readout_consistencies(e.replicas[0].states, e.replicas[1].states, p.full.directions);
    EXPECT_GT(spearman(p.full.sizes, pc), 0.0);
}

TEST(Profile, RotationInvariance)
{
    const ReplicaEnsemble e = esn_ensemble(40, 3.0, 6000, 2, 30);
    const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(gaussian(40, 40, 31)).householderQ();
    ReplicaEnsemble rotated = e;
    for (auto& r : rotated.replicas)
        r.states = r.states * q;
    const ConsistencyProfile a = consistency_profile(e);
    const ConsistencyProfile b = consistency_profile(rotated);
    ASSERT_EQ(a.levels.size(), b.levels.size());
    EXPECT_LT((a.levels - b.levels).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Profile, RegularizationRemovesSmallDirections)
{
    const ReplicaEnsemble e = esn_ensemble(100, 1.0, 11000, 2, 40);
    int previous = 101;
    for (double lambda : {0.01, 0.03, 0.1}) {
        ProfileOptions o;
        o.regularization = lambda;
        o.noise_seed = 5;
        const ConsistencyProfile p = consistency_profile(e, o);
        EXPECT_EQ(p.regularization, lambda);
        EXPECT_LT(p.effective_dimension, previous) << lambda;
        previous = p.effective_dimension;
    }
}

TEST(Profile, EnsembleMeanOption)
{
    const ReplicaEnsemble e = esn_ensemble(60, 3.0, 6000, 4, 50);
    ProfileOptions o;
    o.use_ensemble_mean = true;
    const ConsistencyProfile mean_based = consistency_profile(e, o);
    const MatrixXd expected = covariance(consistent_component(e).states).covariance;
    EXPECT_LT((mean_based.consistent_covariance - expected).norm(), 1e-12 * expected.norm());
}

TEST(MeasurementNoise, AmplitudeAndIndependence)
{
    const ReplicaEnsemble e = pair(StateMatrix::Zero(50000, 2), StateMatrix::Zero(50000, 2));
    const ReplicaEnsemble n = add_measurement_noise(e, 0.2, 9);
    const double sd = std::sqrt(n.replicas[0].states.col(0).squaredNorm() / 50000.0);
    EXPECT_NEAR(sd, 0.2, 0.2 * 5.0 * std::sqrt(0.5 / 50000.0));
    EXPECT_FALSE(n.replicas[0].states == n.replicas[1].states);
    EXPECT_THROW(add_measurement_noise(e, -1.0, 9), std::invalid_argument);
}
