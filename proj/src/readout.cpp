#include "esn/readout.hpp"

#include "esn/random.hpp"

#include <cmath>
#include <limits>

namespace esn {

RidgeSolver::RidgeSolver(StateMatrix states, double ridge) : states_(std::move(states)), ridge_(ridge)
{
    if (!(ridge >= 0.0) || !std::isfinite(ridge))
        throw std::invalid_argument("ridge parameter must be finite and >= 0");
    if (states_.rows() < 2)
        throw std::invalid_argument("ridge fit needs at least 2 samples");
    const Index n = states_.cols();
    const double ts = static_cast<double>(states_.rows());
    mean_ = states_.colwise().mean().transpose();
    StateMatrix centered = states_.rowwise() - mean_.transpose();
    MatrixXd gram = MatrixXd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    gram.diagonal().array() += ridge * ridge * ts;
    factor_.compute(gram);

    const VectorXd d = factor_.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (factor_.info() != Eigen::Success || !(d.minCoeff() > 1e-13 * dmax))
        throw Error("rank-deficient design; increase lambda");
}

Readout RidgeSolver::fit(const VectorXd& target) const
{
    if (target.size() != states_.rows())
        throw std::invalid_argument("ridge fit: target length mismatch");
    const double zbar = target.mean();
    // X_c^T (z - zbar) == X^T (z - zbar) because the centered target sums to zero
    const VectorXd rhs = states_.transpose() * (target.array() - zbar).matrix();
    Readout r;
    r.weights = factor_.solve(rhs);
    r.bias = zbar - mean_.dot(r.weights);
    r.ridge = ridge_;
    return r;
}

std::vector<Readout> RidgeSolver::fit(const MatrixXd& targets) const
{
    if (targets.rows() != states_.rows())
        throw std::invalid_argument("ridge fit: target length mismatch");
    const VectorXd zbar = targets.colwise().mean().transpose();
    const MatrixXd rhs = states_.transpose() * (targets.rowwise() - zbar.transpose());
    const MatrixXd weights = factor_.solve(rhs);
    std::vector<Readout> out(static_cast<std::size_t>(targets.cols()));
    for (Index j = 0; j < targets.cols(); ++j) {
        Readout& r = out[static_cast<std::size_t>(j)];
        r.weights = weights.col(j);
        r.bias = zbar[j] - mean_.dot(r.weights);
        r.ridge = ridge_;
    }
    return out;
}

Readout ridge_fit(const StateMatrix& states, const VectorXd& target, double ridge)
{
    return RidgeSolver(states, ridge).fit(target);
}

VectorXd apply_readout(const StateMatrix& states, const Readout& readout)
{
    if (states.cols() != readout.weights.size())
        throw std::invalid_argument("apply_readout: width mismatch");
    VectorXd y = states * readout.weights;
    y.array() += readout.bias;
    return y;
}

namespace {

double correlation_or_zero(const VectorXd& a, const VectorXd& b)
{
    try {
        return readout_consistency(a, b);
    } catch (const Error&) {
        return 0.0;
    }
}

}  // namespace

MemoryProfile memory_task(const Trajectory& states, const Drive& drive, const MemoryOptions& options,
                          const Trajectory* replica)
{
    if (drive.width() != 1)
        throw std::invalid_argument("memory_task: drive must be scalar");
    if (options.max_lag < 0)
        throw std::invalid_argument("memory_task: max_lag must be >= 0");
    if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0))
        throw std::invalid_argument("memory_task: train fraction must lie in (0, 1)");
    if (replica && (replica->length() != states.length() || replica->width() != states.width() ||
                    replica->first_step != states.first_step))
        throw std::invalid_argument("memory_task: replica shape mismatch");
    if (static_cast<Index>(states.first_step) + states.length() > drive.length())
        throw std::invalid_argument("memory_task: trajectory longer than drive");

    const auto first = static_cast<Index>(states.first_step);
    const int lags = options.max_lag + 1;

    MemoryProfile p;
    p.ridge = options.ridge;
    p.accuracy = VectorXd::Zero(lags);
    p.accuracy_in_sample = VectorXd::Zero(lags);
    if (replica)
        p.readout_consistency = VectorXd::Zero(lags);

    // Lags sharing a start row share one design, so they are fitted and
    // scored together with matrix products.
    int tau = 0;
    while (tau < lags) {
        // rows whose target u(first + i - tau) exists
        const Index start = std::max<Index>(0, tau - first);
        int end = tau + 1;
        while (end < lags && std::max<Index>(0, end - first) == start)
            ++end;
        const Index usable = states.length() - start;
        const Index train = static_cast<Index>(std::floor(options.train_fraction * static_cast<double>(usable)));
        const Index test = usable - train;
        if (train < 2 || test < 2)
            throw std::invalid_argument("memory_task: max_lag too large for the sample length");

        const int count = end - tau;
        MatrixXd targets(usable, count);
        for (int j = 0; j < count; ++j)
            for (Index i = 0; i < usable; ++i)
                targets(i, j) = drive.samples(first + start + i - (tau + j), 0);

        const RidgeSolver solver(StateMatrix(states.states.middleRows(start, train)), options.ridge);
        const std::vector<Readout> fits = solver.fit(MatrixXd(targets.topRows(train)));
        MatrixXd weights(states.width(), count);
        VectorXd bias(count);
        for (int j = 0; j < count; ++j) {
            weights.col(j) = fits[static_cast<std::size_t>(j)].weights;
            bias[j] = fits[static_cast<std::size_t>(j)].bias;
        }
        const auto predict = [&](const StateMatrix& x, Index row, Index rows) {
            MatrixXd y = x.middleRows(row, rows) * weights;
            y.rowwise() += bias.transpose();
            return y;
        };
        const MatrixXd y_train = predict(states.states, start, train);
        const MatrixXd y_test = predict(states.states, start + train, test);
        MatrixXd y_rep;
        if (replica)
            y_rep = predict(replica->states, start + train, test);

        for (int j = 0; j < count; ++j) {
            const int lag = tau + j;
            p.accuracy_in_sample[lag] = correlation_or_zero(targets.col(j).head(train), y_train.col(j));
            p.accuracy[lag] = correlation_or_zero(targets.col(j).tail(test), y_test.col(j));
            if (replica)
                p.readout_consistency[lag] = correlation_or_zero(y_test.col(j), y_rep.col(j));
            p.lags.push_back(lag);
        }
        p.train_samples = train;
        p.test_samples = test;
        tau = end;
    }
    p.capacity = memory_capacity(p);
    return p;
}

MemoryProfile memory_task(const NetworkRealization& net, std::shared_ptr<const Drive> drive,
                          const MemoryOptions& options, std::size_t washout, bool with_replica,
                          std::uint64_t seed, double noise_mix)
{
    ReplicaOptions ro;
    ro.washout = washout;
    ro.noise_mix = noise_mix;
    if (with_replica) {
        const ReplicaEnsemble e = replica_run(net, drive, 2, seed, ro);
        return memory_task(e.replicas[0], *drive, options, &e.replicas[1]);
    }
    RunOptions run_options;
    run_options.washout = washout;
    run_options.noise_mix = noise_mix;
    run_options.noise_seed = derive_seed(seed, Stream::noise, 0);
    const Trajectory t = run(net, *drive, random_initial_state(net.size(), seed, 0), run_options);
    return memory_task(t, *drive, options);
}

double memory_capacity(const MemoryProfile& profile)
{
    double sum = 0.0;
    for (Index i = 0; i < profile.accuracy.size(); ++i)
        if (profile.lags.empty() ? i >= 1 : profile.lags[static_cast<std::size_t>(i)] >= 1)
            sum += profile.accuracy[i] * profile.accuracy[i];
    return sum;
}

}  // namespace esn
