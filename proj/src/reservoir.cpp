#include "esn/reservoir.hpp"

#include "esn/random.hpp"
#include "esn/signals.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace esn {

void NetworkSpec::validate() const
{
    if (size < 1)
        throw std::invalid_argument("network size must be >= 1");
    if (!(wiring_probability >= 0.0 && wiring_probability <= 1.0))
        throw std::invalid_argument("wiring probability must lie in [0, 1]");
    if (!(spectral_radius >= 0.0) || !std::isfinite(spectral_radius))
        throw std::invalid_argument("spectral radius must be finite and >= 0");
    if (input_dim < 1)
        throw std::invalid_argument("input dimension must be >= 1");
    if (!std::isfinite(bias))
        throw std::invalid_argument("bias must be finite");
}

double spectral_radius(const MatrixXd& w)
{
    if (w.rows() != w.cols())
        throw std::invalid_argument("spectral_radius: matrix must be square");
    if (w.size() == 0)
        return 0.0;
    Eigen::EigenSolver<MatrixXd> solver(w, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw Error("spectral_radius: eigenvalue solve did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

NetworkRealization::NetworkRealization(NetworkSpec spec, MatrixXd weights, MatrixXd input_weights,
                                       VectorXd bias)
    : NetworkRealization(spec, std::move(weights), std::move(input_weights), std::move(bias), -1.0)
{
}

NetworkRealization::NetworkRealization(NetworkSpec spec, MatrixXd weights, MatrixXd input_weights,
                                       VectorXd bias, double radius)
    : spec_(spec), weights_(std::move(weights)), input_weights_(std::move(input_weights)),
      bias_(std::move(bias))
{
    const Index n = weights_.rows();
    if (weights_.cols() != n || input_weights_.rows() != n || bias_.size() != n)
        throw std::invalid_argument("NetworkRealization: inconsistent matrix dimensions");
    spec_.size = static_cast<int>(n);
    spec_.input_dim = static_cast<int>(input_weights_.cols());
    sparse_weights_ = weights_.sparseView();
    sparse_weights_.makeCompressed();
    achieved_radius_ = radius >= 0.0 ? radius : spectral_radius(weights_);
}

NetworkRealization NetworkRealization::rescaled(double rho) const
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("rescaled: spectral radius must be finite and >= 0");
    NetworkSpec s = spec_;
    s.spectral_radius = rho;
    if (rho == 0.0)
        return NetworkRealization(s, MatrixXd::Zero(size(), size()), input_weights_, bias_, 0.0);
    if (achieved_radius_ == 0.0)
        throw Error("degenerate connectivity");
    const double scale = rho / achieved_radius_;
    return NetworkRealization(s, weights_ * scale, input_weights_, bias_, achieved_radius_ * scale);
}

NetworkRealization build_network(const NetworkSpec& spec)
{
    spec.validate();
    const int n = spec.size;

    MatrixXd w = MatrixXd::Zero(n, n);
    {
        Rng rng = make_rng(spec.seed, Stream::weights);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (coin(rng) < spec.wiring_probability)
                    w(i, j) = gauss(rng);
    }

    MatrixXd v(n, spec.input_dim);
    {
        Rng rng = make_rng(spec.seed, Stream::input_weights);
        std::uniform_real_distribution<double> uniform(-1.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < spec.input_dim; ++l)
                v(i, l) = uniform(rng);
    }

    VectorXd beta = VectorXd::Constant(n, spec.bias);

    const double raw = spectral_radius(w);
    if (spec.spectral_radius == 0.0)
        return NetworkRealization(spec, MatrixXd::Zero(n, n), std::move(v), std::move(beta));
    if (raw == 0.0)
        throw Error("degenerate connectivity");
    NetworkRealization base(spec, std::move(w), std::move(v), std::move(beta));
    return base.rescaled(spec.spectral_radius);
}

VectorXd preactivation(const NetworkRealization& net, const VectorXd& x, const VectorXd& u)
{
    if (x.size() != net.size() || u.size() != net.input_dim())
        throw std::invalid_argument("preactivation: dimension mismatch");
    VectorXd a = net.sparse_weights() * x;
    a.noalias() += net.input_weights() * u;
    a += net.bias();
    return a;
}

VectorXd step(const VectorXd& x, const VectorXd& u, const NetworkRealization& net, double noise_mix,
              const VectorXd& noise)
{
    if (!(noise_mix >= 0.0 && noise_mix <= 1.0))
        throw std::invalid_argument("step: noise mix must lie in [0, 1]");
    VectorXd a = preactivation(net, x, u);
    if (noise_mix != 0.0) {
        if (noise.size() != net.size())
            throw std::invalid_argument("step: noise sample has wrong length");
        a = (1.0 - noise_mix) * a + noise_mix * noise;
    }
    return a.array().tanh().matrix();
}

VectorXd random_initial_state(int size, std::uint64_t seed, std::uint64_t index)
{
    Rng rng = make_rng(seed, Stream::initial_state, index);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VectorXd x(size);
    for (int i = 0; i < size; ++i)
        x[i] = uniform(rng);
    return x;
}

Trajectory run(const NetworkRealization& net, const Drive& drive, const VectorXd& x0,
               const RunOptions& options)
{
    const Index steps = drive.length();
    const int n = net.size();
    if (drive.width() != net.input_dim() || x0.size() != n)
        throw std::invalid_argument("run: dimension mismatch");
    if (static_cast<Index>(options.washout) >= steps)
        throw std::invalid_argument("run: washout must be shorter than the drive");
    if (!(options.noise_mix >= 0.0 && options.noise_mix <= 1.0))
        throw std::invalid_argument("run: noise mix must lie in [0, 1]");
    if (!drive.samples.allFinite())
        throw Error("invalid drive");

    Trajectory out;
    out.first_step = options.washout;
    out.states.resize(steps - static_cast<Index>(options.washout), n);

    const bool noisy = options.noise_mix != 0.0;
    Rng rng = make_rng(options.noise_seed, Stream::noise);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double keep = 1.0 - options.noise_mix;

    VectorXd x = x0;
    VectorXd a(n);
    VectorXd u(net.input_dim());
    for (Index t = 0; t < steps; ++t) {
        if (options.alignment == InputAlignment::concurrent)
            u = drive.samples.row(t).transpose();
        else if (t == 0)
            u.setZero();
        else
            u = drive.samples.row(t - 1).transpose();

        a.noalias() = net.sparse_weights() * x;
        a.noalias() += net.input_weights() * u;
        a += net.bias();
        if (noisy) {
            for (int i = 0; i < n; ++i)
                a[i] = keep * a[i] + options.noise_mix * gauss(rng);
        }
        x = a.array().tanh().matrix();
        if (t >= static_cast<Index>(options.washout))
            out.states.row(t - static_cast<Index>(options.washout)) = x.transpose();
    }
    return out;
}

}  // namespace esn
