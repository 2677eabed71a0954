#include "esn/experiments.hpp"

#include "esn/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#ifndef ESN_VERSION_STRING
#define ESN_VERSION_STRING "0.0.0"
#endif

namespace esn {

namespace fs = std::filesystem;

std::string_view version()
{
    return "esn-consistency " ESN_VERSION_STRING;
}

// ---------------------------------------------------------------------------
// configuration

ExperimentConfig default_config(const std::string& experiment)
{
    ExperimentConfig c;
    c.experiment = experiment;
    c.network.bias = 1.0;
    c.network.input_dim = 1;
    if (experiment == "sections") {
        c.network.size = 200;
        c.network.wiring_probability = 0.025;
        c.rho = {2.2, 3.0};
    } else if (experiment == "memory") {
        c.network.size = 500;
        c.network.wiring_probability = 0.10;
        c.rho = parse_grid("1.0:0.1:4.0");
        c.realizations = 10;
    } else if (experiment == "lyapunov") {
        c.network.size = 200;
        c.network.wiring_probability = 0.10;
        c.rho = parse_grid("0.5:0.1:4.0");
        c.realizations = 10;
    } else if (experiment == "profile") {
        c.network.size = 100;
        c.network.wiring_probability = 0.10;
        c.rho = {1.0, 3.0};
        c.lambda = {0.01, 0.03, 0.1};
    } else if (experiment == "sweep" || experiment == "generate-net") {
        c.network.size = 200;
        c.network.wiring_probability = 0.10;
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    return c;
}

std::vector<double> parse_grid(const std::string& text)
{
    auto to_double = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw ConfigError("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("malformed number '" + s + "' in list '" + text + "'");
        }
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':'))
            parts.push_back(item);
        if (parts.size() != 3)
            throw ConfigError("range '" + text + "' must be start:step:stop");
        const double start = to_double(parts[0]);
        const double step = to_double(parts[1]);
        const double stop = to_double(parts[2]);
        if (!(step > 0.0) || stop < start)
            throw ConfigError("range '" + text + "' needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) {
            // round to the step's decimal resolution so 1.0:0.1:4.0 yields 1.7, not 1.7000000000000002
            const double v = start + step * static_cast<double>(i);
            out.push_back(std::round(v * 1e9) / 1e9);
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.push_back(to_double(item));
    }
    if (out.empty())
        throw ConfigError("empty list '" + text + "'");
    return out;
}

namespace {

std::vector<double> grid_from_json(const json& v)
{
    if (v.is_string())
        return parse_grid(v.get<std::string>());
    if (v.is_number())
        return {v.get<double>()};
    return v.get<std::vector<double>>();
}

template <class T>
std::optional<T> optional_from_json(const json& v)
{
    if (v.is_null())
        return std::nullopt;
    return v.get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& doc, ExperimentConfig c)
{
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    using Setter = std::function<void(const json&)>;
    const std::map<std::string, Setter> setters = {
        {"experiment", [&](const json& v) { c.experiment = v.get<std::string>(); }},
        {"network",
         [&](const json& v) {
             for (const auto& [key, val] : v.items()) {
                 if (key == "size")
                     c.network.size = val.get<int>();
                 else if (key == "wiring_probability")
                     c.network.wiring_probability = val.get<double>();
                 else if (key == "bias")
                     c.network.bias = val.get<double>();
                 else if (key == "input_dim")
                     c.network.input_dim = val.get<int>();
                 else
                     throw ConfigError("config field 'network." + key + "': unknown field");
             }
         }},
        {"length", [&](const json& v) { c.length = v.get<Index>(); }},
        {"washout", [&](const json& v) { c.washout = v.get<std::size_t>(); }},
        {"rho", [&](const json& v) { c.rho = grid_from_json(v); }},
        {"noise", [&](const json& v) { c.noise = grid_from_json(v); }},
        {"lambda", [&](const json& v) { c.lambda = grid_from_json(v); }},
        {"replicas", [&](const json& v) { c.replicas = v.get<int>(); }},
        {"realizations", [&](const json& v) { c.realizations = v.get<int>(); }},
        {"seed", [&](const json& v) { c.seed = v.get<std::uint64_t>(); }},
        {"output_dir", [&](const json& v) { c.output_dir = v.get<std::string>(); }},
        {"threads", [&](const json& v) { c.threads = v.get<int>(); }},
        {"max_lag", [&](const json& v) { c.max_lag = v.get<int>(); }},
        {"ridge", [&](const json& v) { c.ridge = v.get<double>(); }},
        {"noise_base_rho", [&](const json& v) { c.noise_base_rho = v.get<double>(); }},
        {"match_rho", [&](const json& v) { c.match_rho = optional_from_json<double>(v); }},
        {"match_tolerance", [&](const json& v) { c.match_tolerance = v.get<double>(); }},
        {"section_lags", [&](const json& v) { c.section_lags = v.get<std::vector<int>>(); }},
        {"section_grid", [&](const json& v) { c.section_grid = grid_from_json(v); }},
        {"section_nodes", [&](const json& v) { c.section_nodes = v.get<std::vector<int>>(); }},
        {"section_consistent_rho", [&](const json& v) { c.section_consistent_rho = v.get<double>(); }},
        {"section_inconsistent_rho", [&](const json& v) { c.section_inconsistent_rho = v.get<double>(); }},
        {"section_shared_initial_state", [&](const json& v) { c.section_shared_initial_state = v.get<bool>(); }},
        {"lyapunov_steps", [&](const json& v) { c.lyapunov_steps = v.get<std::size_t>(); }},
        {"reortho_interval", [&](const json& v) { c.reortho_interval = v.get<int>(); }},
        {"lyapunov_exponents", [&](const json& v) { c.lyapunov_exponents = v.get<int>(); }},
        {"consistency_threshold", [&](const json& v) { c.consistency_threshold = v.get<double>(); }},
        {"profile_consistent_rho", [&](const json& v) { c.profile_consistent_rho = v.get<double>(); }},
        {"profile_inconsistent_rho", [&](const json& v) { c.profile_inconsistent_rho = v.get<double>(); }},
        {"profile_target_consistency",
         [&](const json& v) { c.profile_target_consistency = optional_from_json<double>(v); }},
        {"profile_rho", [&](const json& v) { c.profile_rho = v.get<double>(); }},
        {"effective_threshold", [&](const json& v) { c.effective_threshold = v.get<double>(); }},
        {"null_threshold", [&](const json& v) { c.null_threshold = v.get<double>(); }},
        {"test_system_length", [&](const json& v) { c.test_system_length = v.get<std::size_t>(); }},
        {"metrics", [&](const json& v) { c.metrics = v.get<std::vector<std::string>>(); }},
        {"version", [](const json&) {}},
    };
    for (const auto& [key, value] : doc.items()) {
        auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("config field '" + key + "': unknown field");
        try {
            it->second(value);
        } catch (const json::exception& e) {
            throw ConfigError("config field '" + key + "': " + e.what());
        }
    }
    return c;
}

json config_to_json(const ExperimentConfig& c)
{
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"experiment", c.experiment},
            {"version", std::string(version())},
            {"network",
             {{"size", c.network.size},
              {"wiring_probability", c.network.wiring_probability},
              {"bias", c.network.bias},
              {"input_dim", c.network.input_dim}}},
            {"length", c.length},
            {"washout", c.washout},
            {"rho", c.rho},
            {"noise", c.noise},
            {"lambda", c.lambda},
            {"replicas", c.replicas},
            {"realizations", c.realizations},
            {"seed", c.seed},
            {"output_dir", c.output_dir},
            {"threads", c.threads},
            {"max_lag", c.max_lag},
            {"ridge", c.ridge},
            {"noise_base_rho", c.noise_base_rho},
            {"match_rho", opt(c.match_rho)},
            {"match_tolerance", c.match_tolerance},
            {"section_lags", c.section_lags},
            {"section_grid", c.section_grid},
            {"section_nodes", c.section_nodes},
            {"section_consistent_rho", c.section_consistent_rho},
            {"section_inconsistent_rho", c.section_inconsistent_rho},
            {"section_shared_initial_state", c.section_shared_initial_state},
            {"lyapunov_steps", c.lyapunov_steps},
            {"reortho_interval", c.reortho_interval},
            {"lyapunov_exponents", c.lyapunov_exponents},
            {"consistency_threshold", c.consistency_threshold},
            {"profile_consistent_rho", c.profile_consistent_rho},
            {"profile_inconsistent_rho", c.profile_inconsistent_rho},
            {"profile_target_consistency", opt(c.profile_target_consistency)},
            {"profile_rho", c.profile_rho},
            {"effective_threshold", c.effective_threshold},
            {"null_threshold", c.null_threshold},
            {"test_system_length", c.test_system_length},
            {"metrics", c.metrics}};
}

void validate_config(const ExperimentConfig& c)
{
    auto fail = [](const std::string& field, const std::string& what) {
        throw ConfigError("config field '" + field + "': " + what);
    };
    try {
        NetworkSpec s = c.network;
        s.spectral_radius = 0.0;
        s.validate();
    } catch (const std::invalid_argument& e) {
        fail("network", e.what());
    }
    if (c.rho.empty())
        fail("rho", "grid must be nonempty");
    if (c.noise.empty())
        fail("noise", "grid must be nonempty");
    if (c.lambda.empty())
        fail("lambda", "grid must be nonempty");
    for (double v : c.rho)
        if (!(v >= 0.0))
            fail("rho", "values must be >= 0");
    for (double v : c.noise)
        if (!(v >= 0.0 && v <= 1.0))
            fail("noise", "values must lie in [0, 1]");
    for (double v : c.lambda)
        if (!(v >= 0.0))
            fail("lambda", "values must be >= 0");
    if (c.realizations < 1)
        fail("realizations", "must be >= 1");
    if (c.replicas < 2)
        fail("replicas", "must be >= 2");
    if (c.length < 2)
        fail("length", "must be >= 2");
    if (static_cast<Index>(c.washout) >= c.length)
        fail("washout", "must be shorter than length");
    if (c.max_lag < 0)
        fail("max_lag", "must be >= 0");
    if (c.section_grid.empty())
        fail("section_grid", "grid must be nonempty");
    for (int lag : c.section_lags)
        if (lag < 0 || lag >= c.length)
            fail("section_lags", "lags must satisfy 0 <= lag < length");
    for (int node : c.section_nodes)
        if (node < 0 || node >= c.network.size)
            fail("section_nodes", "node index out of range");
    if (c.reortho_interval < 1)
        fail("reortho_interval", "must be >= 1");
    if (c.threads < 0)
        fail("threads", "must be >= 0");
    static const std::vector<std::string> known = {"consistency", "memory", "lyapunov", "profile"};
    if (c.metrics.empty())
        fail("metrics", "must name at least one metric");
    for (const auto& m : c.metrics)
        if (std::find(known.begin(), known.end(), m) == known.end())
            fail("metrics", "unknown metric '" + m + "'");
}

// ---------------------------------------------------------------------------
// shared machinery

std::uint64_t network_seed(std::uint64_t master, int realization)
{
    return derive_seed(master, Stream::experiment, 3 * static_cast<std::uint64_t>(realization));
}

std::uint64_t drive_seed(std::uint64_t master, int realization)
{
    return derive_seed(master, Stream::experiment, 3 * static_cast<std::uint64_t>(realization) + 1);
}

std::uint64_t replica_seed(std::uint64_t master, int realization)
{
    return derive_seed(master, Stream::experiment, 3 * static_cast<std::uint64_t>(realization) + 2);
}

std::vector<std::string> parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn)
{
    std::vector<std::string> errors(count);
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                if (errors[i].empty())
                    errors[i] = "unknown error";
            }
        }
    };
    if (workers <= 1) {
        worker();
        return errors;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    return errors;
}

NetworkRealization realization_network(const ExperimentConfig& config, int realization)
{
    NetworkSpec spec = config.network;
    spec.seed = network_seed(config.seed, realization);
    spec.spectral_radius = 1.0;
    return build_network(spec);
}

double replica_consistency(const NetworkRealization& net, std::shared_ptr<const Drive> drive, std::size_t washout,
                           double noise_mix, std::uint64_t seed)
{
    ReplicaOptions ro;
    ro.washout = washout;
    ro.noise_mix = noise_mix;
    return consistency_report(replica_run(net, std::move(drive), 2, seed, ro)).global;
}

std::optional<double> first_where(std::span<const double> grid, std::span<const double> values,
                                  const std::function<bool(double)>& pred)
{
    for (std::size_t i = 0; i < grid.size() && i < values.size(); ++i)
        if (pred(values[i]))
            return grid[i];
    return std::nullopt;
}

NoiseMatch match_noise_consistency(const NetworkRealization& net, std::shared_ptr<const Drive> drive,
                                   std::size_t washout, double target, double tolerance, std::uint64_t seed,
                                   int max_iterations)
{
    double lo = 0.0, hi = 1.0;
    NoiseMatch best;
    best.consistency = replica_consistency(net, drive, washout, 0.0, seed);
    double best_gap = std::abs(best.consistency - target);
    for (int it = 1; it <= max_iterations; ++it) {
        const double r = 0.5 * (lo + hi);
        const double g = replica_consistency(net, drive, washout, r, seed);
        const double gap = std::abs(g - target);
        if (gap < best_gap) {
            best = {r, g, it};
            best_gap = gap;
        }
        if (gap <= 0.5 * tolerance)
            break;
        (g > target ? lo : hi) = r;
    }
    return best;
}

RadiusMatch match_radius_consistency(const NetworkRealization& base, std::shared_ptr<const Drive> drive,
                                     std::size_t washout, double target, double tolerance, std::uint64_t seed,
                                     double lo, double hi, int max_iterations)
{
    RadiusMatch best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iterations; ++it) {
        const double rho = 0.5 * (lo + hi);
        const double g = replica_consistency(base.rescaled(rho), drive, washout, 0.0, seed);
        const double gap = std::abs(g - target);
        if (gap < best_gap) {
            best = {rho, g, it};
            best_gap = gap;
        }
        if (gap <= 0.5 * tolerance)
            break;
        (g > target ? lo : hi) = rho;
    }
    return best;
}

MatrixXd section_portrait(const NetworkRealization& net, const Drive& reference, Index lag,
                          std::span<const double> grid, std::span<const int> nodes, std::uint64_t seed,
                          bool shared_initial_state)
{
    const std::vector<Drive> family = perturbed_family(reference, lag, grid);
    MatrixXd out(static_cast<Index>(grid.size()), static_cast<Index>(nodes.size()));
    RunOptions ro;
    ro.washout = static_cast<std::size_t>(reference.length() - 1);
    for (std::size_t k = 0; k < family.size(); ++k) {
        const VectorXd x0 = random_initial_state(net.size(), seed, shared_initial_state ? 0 : k);
        const Trajectory t = run(net, family[k], x0, ro);
        for (std::size_t j = 0; j < nodes.size(); ++j)
            out(static_cast<Index>(k), static_cast<Index>(j)) = t.states(0, nodes[j]);
    }
    return out;
}

std::vector<int> highest_variance_nodes(const Trajectory& trajectory, int count)
{
    const StateMatrix centered = trajectory.states.rowwise() - trajectory.states.colwise().mean();
    const VectorXd var = centered.colwise().squaredNorm().transpose();
    std::vector<int> idx(static_cast<std::size_t>(var.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return var[a] > var[b]; });
    idx.resize(static_cast<std::size_t>(std::min<Index>(count, var.size())));
    std::sort(idx.begin(), idx.end());
    return idx;
}

// ---------------------------------------------------------------------------
// artifact output

namespace {

std::string tag(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Stats {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

Stats stats_of(const std::vector<double>& v)
{
    Stats s;
    s.n = v.size();
    if (v.empty())
        return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v)
            ss += (x - s.mean) * (x - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        s.stderr_ = sd / std::sqrt(static_cast<double>(v.size()));
    }
    return s;
}

class Artifacts {
public:
    explicit Artifacts(const ExperimentConfig& config) : config_(config), dir_(config.output_dir)
    {
        fs::create_directories(dir_);
    }

    const fs::path& dir() const { return dir_; }

    /// Writes <name>.csv from `body` and <name>.json with config and metadata.
    template <class Body>
    void write(const std::string& name, Body&& body, json metadata = json::object()) const
    {
        {
            std::ofstream csv(dir_ / (name + ".csv"));
            if (!csv)
                throw Error("cannot write " + (dir_ / (name + ".csv")).string());
            use_round_trip_doubles(csv);
            body(csv);
        }
        write_json(name, std::move(metadata));
    }

    void write_json(const std::string& name, json metadata) const
    {
        std::ofstream side(dir_ / (name + ".json"));
        if (!side)
            throw Error("cannot write " + (dir_ / (name + ".json")).string());
        const json doc = {{"artifact", name},
                          {"version", std::string(version())},
                          {"config", config_to_json(config_)},
                          {"metadata", std::move(metadata)}};
        side << doc.dump(2) << '\n';
    }

private:
    const ExperimentConfig& config_;
    fs::path dir_;
};

std::shared_ptr<const Drive> realization_drive(const ExperimentConfig& c, int k, Index length)
{
    return std::make_shared<const Drive>(
        gaussian_drive(length, c.network.input_dim, drive_seed(c.seed, k)));
}

void fail_on_errors(const std::vector<std::string>& errors)
{
    for (const auto& e : errors)
        if (!e.empty())
            throw Error(e);
}

// Memory cell shared by `memory` and `sweep`; writes the profile CSV with
// the same name and content in both.
struct MemoryCell {
    double consistency = 0.0;
    MemoryProfile profile;
};

std::string memory_artifact_name(double rho, double noise, int k)
{
    return "memory_rho" + tag(rho) + "_noise" + tag(noise) + "_real" + std::to_string(k);
}

MemoryCell memory_cell(const ExperimentConfig& c, const NetworkRealization& base, double rho, double noise,
                       double ridge, int k)
{
    const NetworkRealization net = base.rescaled(rho);
    const auto drive = realization_drive(c, k, c.length);
    ReplicaOptions ro;
    ro.washout = c.washout;
    ro.noise_mix = noise;
    const ReplicaEnsemble e = replica_run(net, drive, 2, replica_seed(c.seed, k), ro);
    MemoryCell cell;
    cell.consistency = consistency_report(e).global;
    MemoryOptions mo;
    mo.max_lag = c.max_lag;
    mo.ridge = ridge;
    cell.profile = memory_task(e.replicas[0], *drive, mo, &e.replicas[1]);
    return cell;
}

void write_memory_cell(const Artifacts& out, double rho, double noise, int k, const MemoryCell& cell)
{
    json meta = memory_summary_to_json(cell.profile);
    meta["rho"] = rho;
    meta["noise"] = noise;
    meta["realization"] = k;
    meta["gamma_hat_sq"] = cell.consistency;
    out.write(memory_artifact_name(rho, noise, k),
              [&](std::ostream& os) { write_memory_csv(os, cell.profile); }, meta);
}

}  // namespace

// ---------------------------------------------------------------------------
// sections

int cmd_sections(const ExperimentConfig& c)
{
    validate_config(c);
    const Artifacts out(c);
    for (int k = 0; k < c.realizations; ++k) {
        const NetworkRealization base = realization_network(c, k);
        const NetworkRealization consistent = base.rescaled(c.section_consistent_rho);
        const NetworkRealization inconsistent = base.rescaled(c.section_inconsistent_rho);
        const auto reference = realization_drive(c, k, c.length);
        const std::uint64_t seed = replica_seed(c.seed, k);

        std::vector<int> nodes = c.section_nodes;
        std::string selection = "configured";
        if (nodes.empty()) {
            RunOptions ro;
            ro.washout = c.washout;
            nodes = highest_variance_nodes(run(consistent, *reference, random_initial_state(base.size(), seed), ro), 3);
            selection = "three highest-variance nodes of the consistent reference run";
        }

        const std::size_t lags = c.section_lags.size();
        std::vector<MatrixXd> cons(lags), incons(lags);
        fail_on_errors(parallel_for(2 * lags, c.threads, [&](std::size_t i) {
            const std::size_t li = i / 2;
            const Index lag = c.section_lags[li];
            if (i % 2 == 0)
                cons[li] = section_portrait(consistent, *reference, lag, c.section_grid, nodes, seed,
                                            c.section_shared_initial_state);
            else
                incons[li] = section_portrait(inconsistent, *reference, lag, c.section_grid, nodes, seed,
                                              c.section_shared_initial_state);
        }));

        for (std::size_t li = 0; li < lags; ++li) {
            const int lag = c.section_lags[li];
            const Index row = reference->length() - lag - 1;
            json meta = {{"lag", lag},
                         {"realization", k},
                         {"nodes", nodes},
                         {"node_selection", selection},
                         {"reference_value", reference->samples(row, 0)},
                         {"consistent_rho", c.section_consistent_rho},
                         {"inconsistent_rho", c.section_inconsistent_rho},
                         {"initial_states", c.section_shared_initial_state ? "shared" : "independent per run"}};
            out.write("section_lag" + std::to_string(lag) + "_real" + std::to_string(k),
                      [&](std::ostream& os) {
                          os << "value";
                          for (int n : nodes)
                              os << ",consistent_node" << n;
                          for (int n : nodes)
                              os << ",inconsistent_node" << n;
                          os << '\n';
                          for (std::size_t g = 0; g < c.section_grid.size(); ++g) {
                              os << c.section_grid[g];
                              for (Index j = 0; j < cons[li].cols(); ++j)
                                  os << ',' << cons[li](static_cast<Index>(g), j);
                              for (Index j = 0; j < incons[li].cols(); ++j)
                                  os << ',' << incons[li](static_cast<Index>(g), j);
                              os << '\n';
                          }
                      },
                      meta);
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// memory

int cmd_memory(const ExperimentConfig& c)
{
    validate_config(c);
    const Artifacts out(c);
    std::vector<std::optional<NetworkRealization>> bases(static_cast<std::size_t>(c.realizations));
    fail_on_errors(parallel_for(bases.size(), c.threads,
                                [&](std::size_t k) { bases[k] = realization_network(c, static_cast<int>(k)); }));

    const std::size_t nr = c.rho.size(), nn = c.noise.size(), nk = bases.size();
    std::vector<MemoryCell> cells(nr * nn * nk);
    fail_on_errors(parallel_for(cells.size(), c.threads, [&](std::size_t i) {
        const std::size_t k = i % nk, ni = (i / nk) % nn, ri = i / (nk * nn);
        cells[i] = memory_cell(c, *bases[k], c.rho[ri], c.noise[ni], c.ridge, static_cast<int>(k));
    }));

    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::size_t k = i % nk, ni = (i / nk) % nn, ri = i / (nk * nn);
        write_memory_cell(out, c.rho[ri], c.noise[ni], static_cast<int>(k), cells[i]);
    }

    json argmax = json::object();
    out.write(
        "memory_summary",
        [&](std::ostream& os) {
            os << "rho,noise,realizations,gamma_hat_sq_mean,gamma_hat_sq_stderr,memory_capacity_mean,"
                  "memory_capacity_stderr\n";
            for (std::size_t ni = 0; ni < nn; ++ni) {
                double best_mc = -1.0, best_rho = 0.0;
                for (std::size_t ri = 0; ri < nr; ++ri) {
                    std::vector<double> g, mc;
                    for (std::size_t k = 0; k < nk; ++k) {
                        const auto& cell = cells[(ri * nn + ni) * nk + k];
                        g.push_back(cell.consistency);
                        mc.push_back(cell.profile.capacity);
                    }
                    const Stats sg = stats_of(g), sm = stats_of(mc);
                    if (sm.mean > best_mc) {
                        best_mc = sm.mean;
                        best_rho = c.rho[ri];
                    }
                    os << c.rho[ri] << ',' << c.noise[ni] << ',' << nk << ',' << sg.mean << ',' << sg.stderr_ << ','
                       << sm.mean << ',' << sm.stderr_ << '\n';
                }
                argmax[tag(c.noise[ni])] = {{"rho", best_rho}, {"memory_capacity", best_mc}};
            }
        },
        {{"argmax_memory_capacity_by_noise", argmax}, {"accuracy_evaluation", "held-out"}});

    if (c.match_rho) {
        struct Pair {
            MemoryCell chaos, noise;
            NoiseMatch match;
        };
        std::vector<Pair> pairs(nk);
        fail_on_errors(parallel_for(nk, c.threads, [&](std::size_t k) {
            const int ki = static_cast<int>(k);
            Pair& p = pairs[k];
            p.chaos = memory_cell(c, *bases[k], *c.match_rho, 0.0, c.ridge, ki);
            const auto drive = realization_drive(c, ki, c.length);
            p.match = match_noise_consistency(bases[k]->rescaled(c.noise_base_rho), drive, c.washout,
                                              p.chaos.consistency, c.match_tolerance, replica_seed(c.seed, ki));
            p.noise = memory_cell(c, *bases[k], c.noise_base_rho, p.match.noise_mix, c.ridge, ki);
        }));
        for (std::size_t k = 0; k < nk; ++k) {
            const Pair& p = pairs[k];
            json meta = {{"chaos_rho", *c.match_rho},
                         {"noise_rho", c.noise_base_rho},
                         {"noise_mix", p.match.noise_mix},
                         {"gamma_hat_sq_chaos", p.chaos.consistency},
                         {"gamma_hat_sq_noise", p.noise.consistency},
                         {"memory_capacity_chaos", p.chaos.profile.capacity},
                         {"memory_capacity_noise", p.noise.profile.capacity},
                         {"bisection_iterations", p.match.iterations}};
            out.write("matched_pair_real" + std::to_string(k),
                      [&](std::ostream& os) {
                          os << "lag,M_chaos,M_noise,Gamma_R_chaos,Gamma_R_noise\n";
                          for (std::size_t t = 0; t < p.chaos.profile.lags.size(); ++t) {
                              const auto ti = static_cast<Index>(t);
                              os << p.chaos.profile.lags[t] << ',' << p.chaos.profile.accuracy[ti] << ','
                                 << p.noise.profile.accuracy[ti] << ','
                                 << std::sqrt(std::max(0.0, p.chaos.profile.readout_consistency[ti])) << ','
                                 << std::sqrt(std::max(0.0, p.noise.profile.readout_consistency[ti])) << '\n';
                          }
                      },
                      meta);
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lyapunov

namespace {

struct LyapunovCell {
    LyapunovReport report;
    double consistency = 0.0;
};

LyapunovCell lyapunov_cell(const ExperimentConfig& c, const NetworkRealization& base, double rho, int k)
{
    const NetworkRealization net = base.rescaled(rho);
    const Index length = std::max<Index>(c.length, static_cast<Index>(c.washout + c.lyapunov_steps));
    const auto drive = realization_drive(c, k, length);
    LyapunovOptions lo;
    lo.steps = c.lyapunov_steps;
    lo.washout = c.washout;
    lo.reortho_interval = c.reortho_interval;
    lo.exponents = c.lyapunov_exponents;
    lo.seed = replica_seed(c.seed, k);
    LyapunovCell cell;
    cell.report = cle_spectrum(net, *drive, lo);
    cell.consistency = replica_consistency(net, drive, c.washout, 0.0, replica_seed(c.seed, k));
    return cell;
}

}  // namespace

int cmd_lyapunov(const ExperimentConfig& c)
{
    validate_config(c);
    for (double r : c.noise)
        if (r != 0.0)
            throw ConfigError("config field 'noise': Lyapunov spectra are computed for the noise-free map only");
    const Artifacts out(c);
    std::vector<std::optional<NetworkRealization>> bases(static_cast<std::size_t>(c.realizations));
    fail_on_errors(parallel_for(bases.size(), c.threads,
                                [&](std::size_t k) { bases[k] = realization_network(c, static_cast<int>(k)); }));
    const std::size_t nr = c.rho.size(), nk = bases.size();
    std::vector<LyapunovCell> cells(nr * nk);
    fail_on_errors(parallel_for(cells.size(), c.threads, [&](std::size_t i) {
        cells[i] = lyapunov_cell(c, *bases[i % nk], c.rho[i / nk], static_cast<int>(i % nk));
    }));

    const double n = static_cast<double>(c.network.size);
    json crossings = json::array();
    for (std::size_t k = 0; k < nk; ++k) {
        std::vector<double> l1, g;
        for (std::size_t ri = 0; ri < nr; ++ri) {
            l1.push_back(cells[ri * nk + k].report.exponents[0]);
            g.push_back(cells[ri * nk + k].consistency);
        }
        const auto rl = first_where(c.rho, l1, [](double v) { return v > 0.0; });
        const auto rg = first_where(c.rho, g, [&](double v) { return v < c.consistency_threshold; });
        crossings.push_back({{"realization", k},
                             {"rho_lambda1_positive", rl ? json(*rl) : json(nullptr)},
                             {"rho_consistency_below_threshold", rg ? json(*rg) : json(nullptr)}});
    }

    out.write(
        "lyapunov",
        [&](std::ostream& os) {
            const Index ne = cells.front().report.exponents.size();
            os << "rho,realization,gamma_hat_sq,lambda_1,ky_dimension,ky_over_n,negative_fraction,drift,converged";
            for (Index e = 0; e < ne; ++e)
                os << ",exponent_" << e;
            os << '\n';
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const auto& r = cells[i].report;
                os << c.rho[i / nk] << ',' << (i % nk) << ',' << cells[i].consistency << ',' << r.exponents[0] << ','
                   << r.ky_dimension << ',' << r.ky_dimension / n << ',' << r.negative_fraction << ',' << r.drift
                   << ',' << (r.converged ? 1 : 0);
                for (Index e = 0; e < r.exponents.size(); ++e)
                    os << ',' << r.exponents[e];
                os << '\n';
            }
        },
        {{"crossings", crossings}, {"units", "nats per step"}});

    out.write("lyapunov_summary", [&](std::ostream& os) {
        os << "rho,realizations,gamma_hat_sq_mean,lambda_1_mean,ky_over_n_mean,negative_fraction_mean\n";
        for (std::size_t ri = 0; ri < nr; ++ri) {
            std::vector<double> g, l1, ky, nf;
            for (std::size_t k = 0; k < nk; ++k) {
                const auto& cell = cells[ri * nk + k];
                g.push_back(cell.consistency);
                l1.push_back(cell.report.exponents[0]);
                ky.push_back(cell.report.ky_dimension / n);
                nf.push_back(cell.report.negative_fraction);
            }
            os << c.rho[ri] << ',' << nk << ',' << stats_of(g).mean << ',' << stats_of(l1).mean << ','
               << stats_of(ky).mean << ',' << stats_of(nf).mean << '\n';
        }
    });
    return kExitOk;
}

// ---------------------------------------------------------------------------
// profile

namespace {

ReplicaEnsemble profile_ensemble(const ExperimentConfig& c, const NetworkRealization& net, int k, double noise)
{
    const auto drive = realization_drive(c, k, c.length);
    ReplicaOptions ro;
    ro.washout = c.washout;
    ro.noise_mix = noise;
    return replica_run(net, drive, c.replicas, replica_seed(c.seed, k), ro);
}

void write_pc_profile(const Artifacts& out, const std::string& name, const ConsistencyProfile& p,
                      const VectorXd& gammas, json meta)
{
    out.write(
        name,
        [&](std::ostream& os) {
            os << "index,sigma_squared,gamma_sq\n";
            for (Index i = 0; i < p.full.sizes.size(); ++i) {
                os << i << ',' << p.full.sizes[i] << ',';
                if (std::isfinite(gammas[i]))
                    os << gammas[i];
                os << '\n';
            }
        },
        std::move(meta));
}

int count_above(const VectorXd& v, double threshold)
{
    int n = 0;
    for (Index i = 0; i < v.size(); ++i)
        if (std::isfinite(v[i]) && v[i] > threshold)
            ++n;
    return n;
}

}  // namespace

int cmd_profile(const ExperimentConfig& c)
{
    validate_config(c);
    const Artifacts out(c);
    const double noise = c.noise.front();

    // (b) test system
    {
        const TestSystemSample sample =
            test_system_sample(static_cast<Index>(c.test_system_length), derive_seed(c.seed, Stream::test_system));
        const TestSystemAudit au = test_system_audit(sample);
        const CovarianceDecomposition full = decompose(au.full_empirical);
        const CovarianceDecomposition cons = decompose(au.consistent_empirical);
        const CovarianceDecomposition wfull = decompose(au.whitened_full);
        out.write(
            "test_system_axes",
            [&](std::ostream& os) {
                os << "coordinates,component,axis,x,y,size\n";
                auto axes = [&](const char* coords, const char* comp, const MatrixXd& dirs, const VectorXd& sizes) {
                    for (Index a = 0; a < dirs.cols(); ++a)
                        os << coords << ',' << comp << ',' << a << ',' << dirs(0, a) << ',' << dirs(1, a) << ','
                           << std::sqrt(std::max(0.0, sizes[a])) << '\n';
                };
                axes("original", "full", full.directions, full.sizes);
                axes("original", "consistent", cons.directions, cons.sizes);
                MatrixXd readouts = au.whitening * au.consistent_axes;
                readouts.colwise().normalize();
                axes("original", "consistency_readout", readouts, au.levels);
                axes("whitened", "full", wfull.directions, wfull.sizes);
                axes("whitened", "consistent", au.consistent_axes, au.levels);
                axes("whitened", "inconsistent", au.inconsistent_axes, au.inconsistent_levels);
            },
            {{"full_empirical", matrix_to_json(au.full_empirical)},
             {"full_analytic", matrix_to_json(au.full_analytic)},
             {"consistent_empirical", matrix_to_json(au.consistent_empirical)},
             {"consistent_analytic", matrix_to_json(au.consistent_analytic)},
             {"whitening", matrix_to_json(au.whitening)},
             {"whitened_full", matrix_to_json(au.whitened_full)},
             {"whitened_consistent", matrix_to_json(au.whitened_consistent)},
             {"whitened_inconsistent", matrix_to_json(au.whitened_inconsistent)},
             {"levels", std::vector<double>(au.levels.begin(), au.levels.end())},
             {"inconsistent_levels", std::vector<double>(au.inconsistent_levels.begin(), au.inconsistent_levels.end())},
             {"axis_cosines", std::vector<double>(au.axis_cosines.begin(), au.axis_cosines.end())},
             {"full_relative_error", au.full_error},
             {"consistent_relative_error", au.consistent_error},
             {"whitened_relative_error", au.whitened_error},
             {"samples", c.test_system_length}});
    }

    for (int k = 0; k < c.realizations; ++k) {
        const std::string suffix = "_real" + std::to_string(k);
        const NetworkRealization base = realization_network(c, k);
        ProfileOptions po;
        po.null_threshold = c.null_threshold;
        po.effective_threshold = c.effective_threshold;
        po.noise_seed = derive_seed(replica_seed(c.seed, k), Stream::measurement_noise);

        // (a) PC profiles: consistent, inconsistent, regularized
        const ReplicaEnsemble ens_c = profile_ensemble(c, base.rescaled(c.profile_consistent_rho), k, noise);
        const ReplicaEnsemble ens_i = profile_ensemble(c, base.rescaled(c.profile_inconsistent_rho), k, noise);
        for (const auto& [setting, ens, rho] :
             {std::tuple<std::string, const ReplicaEnsemble*, double>{"consistent", &ens_c, c.profile_consistent_rho},
              {"inconsistent", &ens_i, c.profile_inconsistent_rho}}) {
            const ConsistencyProfile p = consistency_profile(*ens, po);
            const VectorXd g = pc_readout_consistencies(ens->replicas[0].states, ens->replicas[1].states,
                                                        p.full.directions);
            write_pc_profile(out, "pc_profile_" + setting + suffix, p, g,
                             {{"rho", rho},
                              {"gamma_hat_sq", p.global_consistency},
                              {"centered", true},
                              {"pc_gamma_sq_above_global", count_above(g, p.global_consistency)}});
        }
        std::vector<std::array<double, 4>> reg_rows;
        for (double lambda : c.lambda) {
            po.regularization = lambda;
            const ConsistencyProfile p = consistency_profile(ens_c, po);
            const ReplicaEnsemble noisy = add_measurement_noise(ens_c, lambda, po.noise_seed);
            const VectorXd g = pc_readout_consistencies(noisy.replicas[0].states, noisy.replicas[1].states,
                                                        p.full.directions);
            const int retained = count_above(g, c.effective_threshold);
            write_pc_profile(out, "pc_profile_regularized_lambda" + tag(lambda) + suffix, p, g,
                             {{"rho", c.profile_consistent_rho},
                              {"lambda", lambda},
                              {"retained_directions", retained},
                              {"effective_dimension", p.effective_dimension}});
            reg_rows.push_back({lambda, static_cast<double>(retained), static_cast<double>(p.effective_dimension),
                                p.global_consistency});
        }
        po.regularization = 0.0;
        out.write("regularization_summary" + suffix, [&](std::ostream& os) {
            os << "lambda,retained_directions,effective_dimension,gamma_hat_sq\n";
            for (const auto& r : reg_rows)
                os << r[0] << ',' << static_cast<int>(r[1]) << ',' << static_cast<int>(r[2]) << ',' << r[3] << '\n';
        });

        // (c) consistency profile
        double rho = c.profile_rho;
        json tuning = nullptr;
        if (c.profile_target_consistency) {
            const auto drive = realization_drive(c, k, c.length);
            const RadiusMatch m = match_radius_consistency(base, drive, c.washout, *c.profile_target_consistency,
                                                           0.02, replica_seed(c.seed, k), 1.0, 8.0);
            rho = m.rho;
            tuning = {{"target", *c.profile_target_consistency}, {"achieved", m.consistency},
                      {"iterations", m.iterations}};
        }
        const ReplicaEnsemble ens = profile_ensemble(c, base.rescaled(rho), k, noise);
        const ConsistencyProfile p = consistency_profile(ens, po);
        const VectorXd dir_g = pc_readout_consistencies(ens.replicas[0].states, ens.replicas[1].states, p.directions);
        VectorXd sorted_g = dir_g;
        std::sort(sorted_g.begin(), sorted_g.end(), std::greater<>());
        double mad = 0.0;
        for (Index i = 0; i < p.levels.size(); ++i)
            mad += std::abs(p.levels[i] - sorted_g[i]);
        mad /= static_cast<double>(p.levels.size());
        const int above = count_above(p.levels, p.global_consistency);
        out.write(
            "consistency_profile" + suffix,
            [&](std::ostream& os) {
                os << "index,sigma_squared,level,retained,direction_gamma_sq\n";
                for (Index i = 0; i < p.full.sizes.size(); ++i) {
                    const bool kept = i < p.levels.size();
                    os << i << ',' << p.full.sizes[i] << ',';
                    if (kept)
                        os << p.levels[i];
                    os << ',' << (kept ? 1 : 0) << ',';
                    if (kept && std::isfinite(dir_g[i]))
                        os << dir_g[i];
                    os << '\n';
                }
            },
            {{"rho", rho},
             {"tuning", tuning},
             {"gamma_hat_sq", p.global_consistency},
             {"levels_above_global", above},
             {"fraction_above_global", static_cast<double>(above) / static_cast<double>(p.levels.size())},
             {"mean_abs_level_vs_readout", mad},
             {"effective_dimension", p.effective_dimension},
             {"discarded_directions", p.whitening.discarded},
             {"clamped_levels", p.clamped_levels},
             {"centered", true}});
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const ExperimentConfig& c)
{
    validate_config(c);
    const Artifacts out(c);
    const fs::path cell_dir = out.dir() / "cells";
    fs::create_directories(cell_dir);

    const std::size_t nr = c.rho.size(), nn = c.noise.size(), nl = c.lambda.size();
    const auto nk = static_cast<std::size_t>(c.realizations);
    const std::size_t total = nr * nn * nl * nk;
    auto index = [&](std::size_t i) {
        const std::size_t k = i % nk, li = (i / nk) % nl, ni = (i / (nk * nl)) % nn, ri = i / (nk * nl * nn);
        return std::array<std::size_t, 4>{ri, ni, li, k};
    };
    auto cell_name = [&](std::size_t i) {
        const auto [ri, ni, li, k] = index(i);
        return "rho" + tag(c.rho[ri]) + "_noise" + tag(c.noise[ni]) + "_lambda" + tag(c.lambda[li]) + "_real" +
               std::to_string(k);
    };
    auto has = [&](const char* m) { return std::find(c.metrics.begin(), c.metrics.end(), m) != c.metrics.end(); };

    std::vector<json> results(total);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < total; ++i) {
        const fs::path marker = cell_dir / (cell_name(i) + ".json");
        if (fs::exists(marker)) {
            std::ifstream in(marker);
            json doc = json::parse(in, nullptr, false);
            if (!doc.is_discarded() && doc.value("status", "") == "done") {
                results[i] = std::move(doc);
                continue;
            }
        }
        todo.push_back(i);
    }

    std::mutex base_mutex;
    std::map<std::size_t, NetworkRealization> bases;
    auto base_for = [&](std::size_t k) -> NetworkRealization {
        {
            std::lock_guard lock(base_mutex);
            auto it = bases.find(k);
            if (it != bases.end())
                return it->second;
        }
        NetworkRealization b = realization_network(c, static_cast<int>(k));
        std::lock_guard lock(base_mutex);
        return bases.emplace(k, std::move(b)).first->second;
    };

    std::mutex artifact_mutex;
    const auto errors = parallel_for(todo.size(), c.threads, [&](std::size_t t) {
        const std::size_t i = todo[t];
        const auto [ri, ni, li, k] = index(i);
        const double rho = c.rho[ri], noise = c.noise[ni], lambda = c.lambda[li];
        const int ki = static_cast<int>(k);
        json doc = {{"status", "error"}, {"rho", rho}, {"noise", noise}, {"lambda", lambda}, {"realization", k}};
        json metrics = json::object();
        try {
            const NetworkRealization base = base_for(k);
            const NetworkRealization net = base.rescaled(rho);
            if (has("consistency") || has("profile")) {
                const ReplicaEnsemble e = profile_ensemble(c, net, ki, noise);
                if (has("consistency"))
                    metrics["gamma_hat_sq"] = consistency_report(e).global;
                if (has("profile")) {
                    ProfileOptions po;
                    po.regularization = lambda;
                    po.null_threshold = c.null_threshold;
                    po.effective_threshold = c.effective_threshold;
                    po.noise_seed = derive_seed(replica_seed(c.seed, ki), Stream::measurement_noise);
                    const ConsistencyProfile p = consistency_profile(e, po);
                    metrics["profile_effective_dimension"] = p.effective_dimension;
                    metrics["profile_fraction_above_global"] =
                        static_cast<double>(count_above(p.levels, p.global_consistency)) /
                        static_cast<double>(p.levels.size());
                }
            }
            if (has("memory")) {
                const MemoryCell cell = memory_cell(c, base, rho, noise, lambda > 0.0 ? lambda : c.ridge, ki);
                metrics["memory_capacity"] = cell.profile.capacity;
                std::lock_guard lock(artifact_mutex);
                write_memory_cell(out, rho, noise, ki, cell);
            }
            if (has("lyapunov")) {
                if (noise != 0.0)
                    throw Error("Lyapunov spectra are computed for the noise-free map only");
                const LyapunovCell cell = lyapunov_cell(c, base, rho, ki);
                metrics["lambda_1"] = cell.report.exponents[0];
                metrics["ky_over_n"] = cell.report.ky_dimension / static_cast<double>(c.network.size);
                metrics["negative_fraction"] = cell.report.negative_fraction;
            }
            doc["status"] = "done";
        } catch (const std::exception& e) {
            doc["error"] = e.what();
        }
        doc["metrics"] = metrics;
        std::ofstream marker(cell_dir / (cell_name(i) + ".json"));
        marker << doc.dump(2) << '\n';
        results[i] = std::move(doc);
    });
    fail_on_errors(errors);

    std::vector<std::string> columns;
    if (has("consistency"))
        columns.push_back("gamma_hat_sq");
    if (has("memory"))
        columns.push_back("memory_capacity");
    if (has("lyapunov"))
        columns.insert(columns.end(), {"lambda_1", "ky_over_n", "negative_fraction"});
    if (has("profile"))
        columns.insert(columns.end(), {"profile_effective_dimension", "profile_fraction_above_global"});

    bool partial = false;
    out.write("sweep", [&](std::ostream& os) {
        os << "rho,noise,lambda,realization,status";
        for (const auto& col : columns)
            os << ',' << col;
        os << ",error\n";
        for (std::size_t i = 0; i < total; ++i) {
            const json& r = results[i];
            const bool done = r.value("status", "") == "done";
            partial = partial || !done;
            os << r.at("rho").get<double>() << ',' << r.at("noise").get<double>() << ',' << r.at("lambda").get<double>()
               << ',' << r.at("realization").get<std::size_t>() << ',' << (done ? "done" : "error");
            for (const auto& col : columns) {
                os << ',';
                if (done && r.at("metrics").contains(col))
                    os << r.at("metrics").at(col).get<double>();
            }
            os << ',' << (done ? "" : r.value("error", "")) << '\n';
        }
    });

    out.write("sweep_summary", [&](std::ostream& os) {
        os << "rho,noise,lambda,realizations";
        for (const auto& col : columns)
            os << ',' << col << "_mean," << col << "_stderr";
        os << '\n';
        for (std::size_t ri = 0; ri < nr; ++ri)
            for (std::size_t ni = 0; ni < nn; ++ni)
                for (std::size_t li = 0; li < nl; ++li) {
                    os << c.rho[ri] << ',' << c.noise[ni] << ',' << c.lambda[li];
                    std::vector<std::vector<double>> values(columns.size());
                    std::size_t ok = 0;
                    for (std::size_t k = 0; k < nk; ++k) {
                        const json& r = results[((ri * nn + ni) * nl + li) * nk + k];
                        if (r.value("status", "") != "done")
                            continue;
                        ++ok;
                        for (std::size_t j = 0; j < columns.size(); ++j)
                            values[j].push_back(r.at("metrics").at(columns[j]).get<double>());
                    }
                    os << ',' << ok;
                    for (const auto& v : values) {
                        const Stats s = stats_of(v);
                        os << ',' << s.mean << ',' << s.stderr_;
                    }
                    os << '\n';
                }
    });
    return partial ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// generate-net

int cmd_generate_net(const ExperimentConfig& c)
{
    validate_config(c);
    fs::create_directories(c.output_dir);
    for (int k = 0; k < c.realizations; ++k) {
        const NetworkRealization base = realization_network(c, k);
        for (double rho : c.rho) {
            const fs::path path = fs::path(c.output_dir) / ("network_rho" + tag(rho) + "_real" + std::to_string(k) + ".json");
            std::ofstream os(path);
            if (!os)
                throw Error("cannot write " + path.string());
            os << network_to_json(base.rescaled(rho)).dump(2) << '\n';
        }
    }
    return kExitOk;
}

}  // namespace esn
