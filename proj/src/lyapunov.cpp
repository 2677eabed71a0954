#include "esn/lyapunov.hpp"

#include "esn/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace esn {

MatrixXd jacobian(const VectorXd& preact, const MatrixXd& w)
{
    if (w.rows() != w.cols() || preact.size() != w.rows())
        throw std::invalid_argument("jacobian: dimension mismatch");
    const VectorXd t = preact.array().tanh().matrix();
    const VectorXd slope = (1.0 - t.array().square()).matrix();
    return slope.asDiagonal() * w;
}

double kaplan_yorke(const VectorXd& spectrum)
{
    const Index n = spectrum.size();
    for (Index i = 1; i < n; ++i)
        if (spectrum[i] > spectrum[i - 1])
            throw std::invalid_argument("kaplan_yorke: spectrum must be sorted descending");
    if (n == 0 || spectrum[0] < 0.0)
        return 0.0;
    double partial = 0.0;
    for (Index j = 0; j < n; ++j) {
        const double next = partial + spectrum[j];
        if (next < 0.0)
            return static_cast<double>(j) + partial / std::abs(spectrum[j]);
        partial = next;
    }
    return static_cast<double>(n);
}

LyapunovReport cle_spectrum(const NetworkRealization& net, const Drive& drive, const LyapunovOptions& options)
{
    const int n = net.size();
    const int k = options.exponents <= 0 ? n : std::min(options.exponents, n);
    if (options.reortho_interval < 1)
        throw std::invalid_argument("cle_spectrum: reorthonormalization interval must be >= 1");
    if (options.steps < 1)
        throw std::invalid_argument("cle_spectrum: steps must be >= 1");
    if (drive.width() != net.input_dim())
        throw std::invalid_argument("cle_spectrum: drive width mismatch");
    if (static_cast<Index>(options.washout + options.steps) > drive.length())
        throw std::invalid_argument("cle_spectrum: drive shorter than washout + steps");
    if (!drive.samples.allFinite())
        throw Error("invalid drive");

    VectorXd x = random_initial_state(n, options.seed, 0);
    VectorXd a(n);
    auto advance = [&](Index t) {
        a.noalias() = net.sparse_weights() * x;
        a.noalias() += net.input_weights() * drive.samples.row(t).transpose();
        a += net.bias();
        x = a.array().tanh().matrix();
    };
    for (std::size_t t = 0; t < options.washout; ++t)
        advance(static_cast<Index>(t));

    MatrixXd frame = MatrixXd::Identity(n, k);
    MatrixXd image(n, k);
    VectorXd log_growth = VectorXd::Zero(k);
    Eigen::HouseholderQR<MatrixXd> qr;

    const auto tail_start = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(options.steps)));
    double run_min = std::numeric_limits<double>::infinity();
    double run_max = -std::numeric_limits<double>::infinity();

    for (std::size_t s = 0; s < options.steps; ++s) {
        advance(static_cast<Index>(options.washout + s));
        image.noalias() = net.sparse_weights() * frame;
        frame = (1.0 - x.array().square()).matrix().asDiagonal() * image;

        const bool last = s + 1 == options.steps;
        if ((s + 1) % static_cast<std::size_t>(options.reortho_interval) != 0 && !last)
            continue;
        qr.compute(frame);
        const auto& packed = qr.matrixQR();
        frame.setIdentity();
        frame.applyOnTheLeft(qr.householderQ());
        for (int i = 0; i < k; ++i) {
            const double r = packed(i, i);
            log_growth[i] += std::log(std::abs(r));
            if (r < 0.0)
                frame.col(i) = -frame.col(i);
        }
        if (s + 1 > tail_start) {
            const double estimate = log_growth[0] / static_cast<double>(s + 1);
            run_min = std::min(run_min, estimate);
            run_max = std::max(run_max, estimate);
        }
    }

    LyapunovReport report;
    report.exponents = log_growth / static_cast<double>(options.steps);
    std::sort(report.exponents.begin(), report.exponents.end(), std::greater<>());
    report.steps = options.steps;
    report.reortho_interval = options.reortho_interval;
    report.ky_dimension = kaplan_yorke(report.exponents);
    report.negative_fraction =
        static_cast<double>((report.exponents.array() < 0.0).count()) / static_cast<double>(k);
    report.drift = std::isfinite(run_min) ? run_max - run_min : 0.0;
    report.converged = report.drift < options.drift_threshold;
    return report;
}

}  // namespace esn
