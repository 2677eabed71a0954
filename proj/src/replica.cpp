#include "esn/replica.hpp"

#include "esn/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace esn {

void ReplicaEnsemble::validate() const
{
    if (replicas.size() < 2)
        throw std::invalid_argument("replica ensemble needs K >= 2");
    for (const auto& r : replicas)
        if (r.length() != replicas.front().length() || r.width() != replicas.front().width())
            throw std::invalid_argument("replica trajectories differ in shape");
}

ReplicaEnsemble replica_run(const NetworkRealization& net, std::shared_ptr<const Drive> drive, int replicas,
                            std::uint64_t master_seed, const ReplicaOptions& options)
{
    if (replicas < 2)
        throw std::invalid_argument("replica_run: K must be >= 2");
    if (!drive)
        throw std::invalid_argument("replica_run: drive is null");
    if (!options.initial_states.empty() && options.initial_states.size() != static_cast<std::size_t>(replicas))
        throw std::invalid_argument("replica_run: need one initial state per replica");

    ReplicaEnsemble out;
    out.drive = drive;
    out.noise_mix = options.noise_mix;
    out.replicas.reserve(static_cast<std::size_t>(replicas));
    for (int k = 0; k < replicas; ++k) {
        const auto idx = static_cast<std::uint64_t>(k);
        const std::uint64_t init_seed = derive_seed(master_seed, Stream::initial_state, idx);
        const std::uint64_t noise_seed = derive_seed(master_seed, Stream::noise, idx);
        VectorXd x0 = options.initial_states.empty()
                          ? random_initial_state(net.size(), master_seed, idx)
                          : options.initial_states[static_cast<std::size_t>(k)];
        RunOptions ro;
        ro.washout = options.washout;
        ro.noise_mix = options.noise_mix;
        ro.noise_seed = noise_seed;
        ro.alignment = options.alignment;
        out.replicas.push_back(run(net, *drive, x0, ro));
        out.initial_seeds.push_back(init_seed);
        out.noise_seeds.push_back(noise_seed);
    }
    return out;
}

namespace {

// Pearson correlation with population moments. Written so that a == b gives
// exactly 1 (sqrt(s*s) == s in IEEE arithmetic) and b == -a exactly -1.
double pearson(const double* a, const double* b, Index n, Index stride, double variance_floor,
               bool* degenerate)
{
    double ma = 0.0, mb = 0.0;
    for (Index t = 0; t < n; ++t) {
        ma += a[t * stride];
        mb += b[t * stride];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (Index t = 0; t < n; ++t) {
        const double da = a[t * stride] - ma;
        const double db = b[t * stride] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    const double nn = static_cast<double>(n);
    if (saa / nn < variance_floor || sbb / nn < variance_floor) {
        *degenerate = true;
        return std::numeric_limits<double>::quiet_NaN();
    }
    *degenerate = false;
    const double c = sab / std::sqrt(saa * sbb);
    return std::clamp(c, -1.0, 1.0);
}

// Constant up to round-off of its own magnitude.
bool effectively_constant(const VectorXd& y)
{
    const double lo = y.minCoeff();
    const double hi = y.maxCoeff();
    return hi - lo <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
}

}  // namespace

VectorXd node_consistency(const StateMatrix& a, const StateMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("node_consistency: shape mismatch");
    if (a.rows() < 2)
        throw std::invalid_argument("node_consistency: need at least 2 samples");
    VectorXd out(a.cols());
    bool degenerate = false;
    for (Index i = 0; i < a.cols(); ++i)
        out[i] = pearson(a.data() + i, b.data() + i, a.rows(), a.cols(), kVarianceFloor, &degenerate);
    return out;
}

double global_consistency(const VectorXd& node_values)
{
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < node_values.size(); ++i) {
        if (std::isfinite(node_values[i])) {
            sum += node_values[i];
            ++count;
        }
    }
    if (count == 0)
        throw Error("degenerate ensemble");
    return sum / static_cast<double>(count);
}

double readout_consistency(const VectorXd& y, const VectorXd& y_replica)
{
    if (y.size() != y_replica.size())
        throw std::invalid_argument("readout_consistency: length mismatch");
    if (y.size() < 2)
        throw std::invalid_argument("readout_consistency: need at least 2 samples");
    if (effectively_constant(y) || effectively_constant(y_replica))
        throw Error("zero-variance readout");
    bool degenerate = false;
    // readouts have arbitrary scale, so no absolute variance floor applies
    const double c = pearson(y.data(), y_replica.data(), y.size(), 1, 0.0, &degenerate);
    if (degenerate || !std::isfinite(c))
        throw Error("zero-variance readout");
    return c;
}

ConsistencyReport consistency_report(const Trajectory& a, const Trajectory& b)
{
    ConsistencyReport r;
    r.node = node_consistency(a.states, b.states);
    r.samples = a.length();
    for (Index i = 0; i < r.node.size(); ++i)
        if (!std::isfinite(r.node[i]))
            ++r.excluded;
    r.global = global_consistency(r.node);
    return r;
}

ConsistencyReport consistency_report(const ReplicaEnsemble& ensemble)
{
    ensemble.validate();
    return consistency_report(ensemble.replicas[0], ensemble.replicas[1]);
}

}  // namespace esn
