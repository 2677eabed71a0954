#include "esn/random.hpp"
#include "esn/replica.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace esn;

namespace {

StateMatrix white_noise(Index rows, Index cols, std::uint64_t seed)
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

}  // namespace

TEST(NodeConsistency, IdenticalSeriesGiveExactOnes)
{
    const StateMatrix a = white_noise(500, 6, 1);
    const VectorXd g = node_consistency(a, a);
    for (Index i = 0; i < g.size(); ++i)
        EXPECT_EQ(g[i], 1.0);
}

TEST(NodeConsistency, NegatedSeriesGiveMinusOne)
{
    const StateMatrix a = white_noise(500, 6, 1);
    const StateMatrix b = -a;
    const VectorXd g = node_consistency(a, b);
    for (Index i = 0; i < g.size(); ++i)
        EXPECT_NEAR(g[i], -1.0, 1e-15);
}

TEST(NodeConsistency, IndependentNoiseWithinNullBand)
{
    const Index T = 100000;
    const VectorXd g = node_consistency(white_noise(T, 8, 1), white_noise(T, 8, 2));
    for (Index i = 0; i < g.size(); ++i)
        EXPECT_NEAR(g[i], 0.0, 5.0 / std::sqrt(double(T)));
}

TEST(NodeConsistency, SymmetricAndAffineInvariant)
{
    const StateMatrix a = white_noise(2000, 5, 3);
    StateMatrix b = 0.6 * a + 0.8 * white_noise(2000, 5, 4);
    const VectorXd ab = node_consistency(a, b);
    EXPECT_TRUE(ab == node_consistency(b, a));

    StateMatrix as = a, bs = b;
    as.col(2) *= 37.5;
    bs.col(2) *= 37.5;
    as.col(3).array() += 4.0;
    const VectorXd scaled = node_consistency(as, bs);
    EXPECT_LT((scaled - ab).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NodeConsistency, ConstantNodesAreExcluded)
{
    StateMatrix a = white_noise(100, 3, 5);
    StateMatrix b = a;
    a.col(1).setConstant(0.3);
    const VectorXd g = node_consistency(a, b);
    EXPECT_TRUE(std::isnan(g[1]));
    EXPECT_EQ(g[0], 1.0);
    Trajectory ta, tb;
    ta.states = a;
    tb.states = b;
    const ConsistencyReport r = consistency_report(ta, tb);
    EXPECT_EQ(r.excluded, 1);
    EXPECT_EQ(r.global, 1.0);
    EXPECT_EQ(r.samples, 100);
}

TEST(NodeConsistency, ShapeContract)
{
    EXPECT_THROW(node_consistency(white_noise(10, 3, 1), white_noise(10, 4, 1)), std::invalid_argument);
    EXPECT_THROW(node_consistency(white_noise(1, 3, 1), white_noise(1, 3, 1)), std::invalid_argument);
}

TEST(GlobalConsistency, Mean)
{
    EXPECT_EQ(global_consistency(VectorXd::Ones(5)), 1.0);
    EXPECT_EQ(global_consistency((VectorXd(2) << 1.0, 0.0).finished()), 0.5);
    EXPECT_EQ(global_consistency((VectorXd(3) << 1.0, std::nan(""), 0.0).finished()), 0.5);
}

TEST(GlobalConsistency, AllExcludedIsDegenerate)
{
    try {
        global_consistency(VectorXd::Constant(3, std::nan("")));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "degenerate ensemble");
    }
}

TEST(ReadoutConsistency, Examples)
{
    const VectorXd y = white_noise(1000, 1, 9).col(0);
    EXPECT_NEAR(readout_consistency(y, y), 1.0, 1e-15);
    EXPECT_NEAR(readout_consistency(y, (3.0 * y.array() + 7.0).matrix()), 1.0, 1e-12);
    const Index T = 100000;
    EXPECT_NEAR(readout_consistency(white_noise(T, 1, 1).col(0), white_noise(T, 1, 2).col(0)), 0.0,
                5.0 / std::sqrt(double(T)));
}

TEST(ReadoutConsistency, ConstantSeriesRejected)
{
    const VectorXd y = white_noise(100, 1, 9).col(0);
    try {
        readout_consistency(y, VectorXd::Constant(100, 2.5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "zero-variance readout");
    }
}

TEST(ReplicaRun, EchoStateRegimeConverges)
{
    const NetworkRealization net = network(200, 0.1, 1.0, 31);
    auto drive = std::make_shared<const Drive>(gaussian_drive(3000, 1, 4));
    const ReplicaEnsemble e = replica_run(net, drive, 2, 17);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NE(e.initial_seeds[0], e.initial_seeds[1]);
    EXPECT_LT((e.replicas[0].states - e.replicas[1].states).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_GE(consistency_report(e).global, 0.9999);
}

TEST(ReplicaRun, SharedInitialStateIsBitIdentical)
{
    const NetworkRealization net = network(100, 0.1, 3.0, 31);
    auto drive = std::make_shared<const Drive>(gaussian_drive(2000, 1, 4));
    ReplicaOptions o;
    o.washout = 500;
    o.initial_states = {random_initial_state(100, 5), random_initial_state(100, 5)};
    const ReplicaEnsemble e = replica_run(net, drive, 2, 17, o);
    EXPECT_TRUE(e.replicas[0].states == e.replicas[1].states);
}

TEST(ReplicaRun, ChaoticRegimeDiverges)
{
    const NetworkRealization net = network(200, 0.1, 3.0, 31);
    auto drive = std::make_shared<const Drive>(gaussian_drive(3000, 1, 4));
    const ReplicaEnsemble e = replica_run(net, drive, 2, 17);
    EXPECT_GT((e.replicas[0].states - e.replicas[1].states).cwiseAbs().maxCoeff(), 0.1);
    const ConsistencyReport r = consistency_report(e);
    // exchanging the replicas leaves gamma-hat^2 unchanged
    EXPECT_EQ(r.global, consistency_report(e.replicas[1], e.replicas[0]).global);
}

TEST(ReplicaRun, NeedsTwoReplicas)
{
    const NetworkRealization net = network(20, 0.2, 1.0, 1);
    auto drive = std::make_shared<const Drive>(gaussian_drive(200, 1, 4));
    ReplicaOptions o;
    o.washout = 10;
    EXPECT_THROW(replica_run(net, drive, 1, 1, o), std::invalid_argument);
}

TEST(ReplicaRun, NoiseBreaksConsistency)
{
    const NetworkRealization net = network(100, 0.1, 1.0, 3);
    auto drive = std::make_shared<const Drive>(gaussian_drive(4000, 1, 4));
    ReplicaOptions o;
    o.noise_mix = 0.3;
    const ReplicaEnsemble e = replica_run(net, drive, 3, 17, o);
    EXPECT_EQ(e.size(), 3u);
    EXPECT_NE(e.noise_seeds[0], e.noise_seeds[1]);
    const double g = consistency_report(e).global;
    EXPECT_LT(g, 0.99);
    EXPECT_GT(g, 0.0);
}

TEST(ReplicaRun, GlobalConsistencyAtRadiusThree)
{
    // N = 200, p = 0.10: mean over 10 realizations lies in [0.15, 0.45]
    double sum = 0.0;
    for (std::uint64_t k = 0; k < 10; ++k) {
        const NetworkRealization net = network(200, 0.10, 3.0, 100 + k);
        auto drive = std::make_shared<const Drive>(gaussian_drive(11000, 1, 200 + k));
        sum += consistency_report(replica_run(net, drive, 2, 300 + k)).global;
    }
    const double mean = sum / 10.0;
    EXPECT_GE(mean, 0.15);
    EXPECT_LE(mean, 0.45);
}
