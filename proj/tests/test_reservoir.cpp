#include "esn/reservoir.hpp"
#include "esn/signals.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace esn;

namespace {

NetworkSpec spec_of(int n, double p, double rho, std::uint64_t seed)
{
    NetworkSpec s;
    s.size = n;
    s.wiring_probability = p;
    s.spectral_radius = rho;
    s.seed = seed;
    return s;
}

NetworkRealization fixed_net(const MatrixXd& w, const MatrixXd& v, const VectorXd& b)
{
    NetworkSpec s;
    s.size = static_cast<int>(w.rows());
    s.input_dim = static_cast<int>(v.cols());
    return NetworkRealization(s, w, v, b);
}

}  // namespace

TEST(SpectralRadius, SmallMatrices)
{
    EXPECT_NEAR(spectral_radius(MatrixXd::Identity(2, 2)), 1.0, 1e-14);
    EXPECT_NEAR(spectral_radius((MatrixXd(2, 2) << 0, 2, 0, 0).finished()), 0.0, 1e-14);
    // eigenvalues +-i
    EXPECT_NEAR(spectral_radius((MatrixXd(2, 2) << 0, 1, -1, 0).finished()), 1.0, 1e-14);
}

TEST(SpectralRadius, RejectsNonSquare)
{
    EXPECT_THROW(spectral_radius(MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(BuildNetwork, EmptyDrawIsDegenerate)
{
    try {
        build_network(spec_of(2, 0.0, 1.0, 5));
        FAIL() << "expected degenerate connectivity";
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "degenerate connectivity");
    }
}

TEST(BuildNetwork, ZeroRadiusWithoutEdgesIsAllowed)
{
    const NetworkRealization net = build_network(spec_of(3, 0.0, 0.0, 5));
    EXPECT_EQ(net.weights().norm(), 0.0);
}

TEST(BuildNetwork, HitsRequestedRadius)
{
    const NetworkRealization net = build_network(spec_of(200, 0.025, 2.2, 11));
    EXPECT_NEAR(spectral_radius(net.weights()), 2.2, 1e-9 * 2.2);
    EXPECT_NEAR(net.achieved_radius(), 2.2, 1e-9 * 2.2);
}

TEST(BuildNetwork, NonzeroCountWithinBinomialBand)
{
    const NetworkRealization net = build_network(spec_of(500, 0.10, 1.0, 3));
    const auto nnz = static_cast<double>((net.weights().array() != 0.0).count());
    const double mean = 500.0 * 500.0 * 0.1;
    const double sd = std::sqrt(500.0 * 500.0 * 0.1 * 0.9);
    EXPECT_NEAR(nnz, mean, 5.0 * sd);
    EXPECT_EQ(net.sparse_weights().nonZeros(), static_cast<Index>(nnz));
}

TEST(BuildNetwork, DiagonalEntriesAreDrawn)
{
    const NetworkRealization net = build_network(spec_of(400, 0.5, 1.0, 9));
    const auto diag = (net.weights().diagonal().array() != 0.0).count();
    EXPECT_GT(diag, 150);
    EXPECT_LT(diag, 250);
}

TEST(BuildNetwork, InputWeightsAndBias)
{
    NetworkSpec s = spec_of(100, 0.1, 1.0, 4);
    s.input_dim = 3;
    s.bias = 0.25;
    const NetworkRealization net = build_network(s);
    EXPECT_EQ(net.input_weights().rows(), 100);
    EXPECT_EQ(net.input_weights().cols(), 3);
    EXPECT_LE(net.input_weights().cwiseAbs().maxCoeff(), 1.0);
    EXPECT_TRUE((net.bias().array() == 0.25).all());
}

TEST(BuildNetwork, SameSeedIsBitIdentical)
{
    const NetworkRealization a = build_network(spec_of(150, 0.1, 1.5, 21));
    const NetworkRealization b = build_network(spec_of(150, 0.1, 1.5, 21));
    const NetworkRealization c = build_network(spec_of(150, 0.1, 1.5, 22));
    EXPECT_TRUE(a.weights() == b.weights());
    EXPECT_TRUE(a.input_weights() == b.input_weights());
    EXPECT_FALSE(a.weights() == c.weights());
}

TEST(BuildNetwork, RadiusDoesNotChangeTheDraw)
{
    // the mask and values come from the seed alone; rho is a pure rescale
    const NetworkRealization a = build_network(spec_of(120, 0.1, 1.0, 8));
    const NetworkRealization b = build_network(spec_of(120, 0.1, 3.0, 8));
    EXPECT_LT((a.weights() * 3.0 - b.weights()).norm(), 1e-12 * b.weights().norm());
}

TEST(BuildNetwork, RejectsBadSpec)
{
    EXPECT_THROW(build_network(spec_of(0, 0.1, 1.0, 1)), std::invalid_argument);
    EXPECT_THROW(build_network(spec_of(10, 1.5, 1.0, 1)), std::invalid_argument);
    EXPECT_THROW(build_network(spec_of(10, 0.1, -1.0, 1)), std::invalid_argument);
}

TEST(Rescale, MultipliesRadiusExactly)
{
    const NetworkRealization net = build_network(spec_of(100, 0.1, 1.0, 2));
    for (double c : {0.5, 1.7, 3.0}) {
        const NetworkRealization r = net.rescaled(c);
        EXPECT_NEAR(spectral_radius(r.weights()), c, 1e-9 * c);
        EXPECT_NEAR(r.achieved_radius(), c * net.achieved_radius(), 1e-12 * c);
        EXPECT_TRUE(r.input_weights() == net.input_weights());
    }
}

TEST(Step, ZeroNetworkGivesZero)
{
    const auto net = fixed_net(MatrixXd::Zero(3, 3), MatrixXd::Zero(3, 1), VectorXd::Zero(3));
    const VectorXd x = step(VectorXd::Constant(3, 0.4), VectorXd::Ones(1), net, 0.0, VectorXd());
    EXPECT_TRUE((x.array() == 0.0).all());
}

TEST(Step, BiasOnlyGivesTanhOne)
{
    const auto net = fixed_net(MatrixXd::Zero(4, 4), MatrixXd::Zero(4, 1), VectorXd::Ones(4));
    const VectorXd x = step(VectorXd::Constant(4, -0.9), VectorXd::Constant(1, 2.0), net, 0.0, VectorXd());
    for (Index i = 0; i < 4; ++i)
        EXPECT_NEAR(x[i], 0.761594, 1e-6);
}

TEST(Step, FullNoiseMixWithZeroNoiseGivesZero)
{
    const NetworkRealization net = build_network(spec_of(20, 0.3, 1.0, 1));
    const VectorXd x = step(VectorXd::Constant(20, 0.5), VectorXd::Ones(1), net, 1.0, VectorXd::Zero(20));
    EXPECT_TRUE((x.array() == 0.0).all());
}

TEST(Step, MatchesFormula)
{
    const NetworkRealization net = build_network(spec_of(30, 0.2, 1.3, 6));
    const VectorXd x = VectorXd::LinSpaced(30, -0.8, 0.8);
    const VectorXd u = VectorXd::Constant(1, 0.37);
    const VectorXd xi = VectorXd::LinSpaced(30, 1.0, -2.0);
    const double r = 0.3;
    const VectorXd expected =
        ((1 - r) * (net.weights() * x + net.input_weights() * u + net.bias()) + r * xi).array().tanh().matrix();
    EXPECT_LT((step(x, u, net, r, xi) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Step, RejectsMismatchedDimensions)
{
    const NetworkRealization net = build_network(spec_of(10, 0.3, 1.0, 1));
    EXPECT_THROW(step(VectorXd::Zero(9), VectorXd::Zero(1), net, 0.0, VectorXd()), std::invalid_argument);
    EXPECT_THROW(step(VectorXd::Zero(10), VectorXd::Zero(2), net, 0.0, VectorXd()), std::invalid_argument);
    EXPECT_THROW(step(VectorXd::Zero(10), VectorXd::Zero(1), net, 0.5, VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Run, LengthAfterWashout)
{
    const NetworkRealization net = build_network(spec_of(20, 0.2, 1.0, 1));
    const Drive d = gaussian_drive(11, 1, 3);
    RunOptions o;
    o.washout = 10;
    const Trajectory t = run(net, d, VectorXd::Zero(20), o);
    EXPECT_EQ(t.length(), 1);
    EXPECT_EQ(t.first_step, 10u);
    o.washout = 11;
    EXPECT_THROW(run(net, d, VectorXd::Zero(20), o), std::invalid_argument);
}

TEST(Run, RowsAreConsecutiveSteps)
{
    const NetworkRealization net = build_network(spec_of(25, 0.2, 1.4, 1));
    const Drive d = gaussian_drive(40, 1, 3);
    RunOptions o;
    o.washout = 5;
    const Trajectory t = run(net, d, VectorXd::Zero(25), o);
    for (Index k = 1; k < t.length(); ++k) {
        const VectorXd prev = t.states.row(k - 1).transpose();
        const VectorXd u = d.samples.row(5 + k).transpose();
        const VectorXd next = step(prev, u, net, 0.0, VectorXd());
        EXPECT_LT((next - t.states.row(k).transpose()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Run, LaggedAlignmentUsesPreviousInput)
{
    const NetworkRealization net = build_network(spec_of(15, 0.2, 1.0, 1));
    const Drive d = gaussian_drive(20, 1, 3);
    RunOptions o;
    o.washout = 0;
    o.alignment = InputAlignment::lagged;
    const Trajectory lagged = run(net, d, VectorXd::Zero(15), o);
    Drive shifted = d;
    shifted.samples.bottomRows(19) = d.samples.topRows(19);
    shifted.samples(0, 0) = 0.0;
    o.alignment = InputAlignment::concurrent;
    const Trajectory concurrent = run(net, shifted, VectorXd::Zero(15), o);
    EXPECT_LT((lagged.states.bottomRows(19) - concurrent.states.bottomRows(19)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Run, DeterministicAndBounded)
{
    const NetworkRealization net = build_network(spec_of(100, 0.1, 3.0, 4));
    const Drive d = gaussian_drive(3000, 1, 5);
    const VectorXd x0 = random_initial_state(100, 1);
    RunOptions o;
    o.washout = 100;
    const Trajectory a = run(net, d, x0, o);
    const Trajectory b = run(net, d, x0, o);
    EXPECT_TRUE(a.states == b.states);
    EXPECT_LT(a.states.cwiseAbs().maxCoeff(), 1.0);
    o.noise_mix = 0.4;
    o.noise_seed = 77;
    const Trajectory c = run(net, d, x0, o);
    const Trajectory e = run(net, d, x0, o);
    EXPECT_TRUE(c.states == e.states);
    EXPECT_LT(c.states.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Run, EchoStateConvergence)
{
    const NetworkRealization net = build_network(spec_of(500, 0.10, 1.0, 12));
    const Drive d = gaussian_drive(1100, 1, 13);
    RunOptions o;
    o.washout = 1000;
    const Trajectory a = run(net, d, random_initial_state(500, 1, 0), o);
    const Trajectory b = run(net, d, random_initial_state(500, 1, 1), o);
    EXPECT_LT((a.states - b.states).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Run, RejectsNonFiniteDrive)
{
    const NetworkRealization net = build_network(spec_of(10, 0.3, 1.0, 1));
    Drive d = gaussian_drive(10, 1, 1);
    d.samples(4, 0) = std::nan("");
    RunOptions o;
    o.washout = 1;
    try {
        run(net, d, VectorXd::Zero(10), o);
        FAIL() << "expected invalid drive";
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "invalid drive");
    }
}

TEST(InitialState, UniformOnOpenInterval)
{
    const VectorXd x = random_initial_state(10000, 3, 2);
    EXPECT_LT(x.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_NEAR(x.mean(), 0.0, 5.0 * std::sqrt(1.0 / 3.0 / 10000.0));
    EXPECT_TRUE(x == random_initial_state(10000, 3, 2));
    EXPECT_FALSE(x == random_initial_state(10000, 3, 3));
}
