#include "esn/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <locale>
#include <ostream>

namespace esn {

namespace {

// Writes doubles in the shortest form that reads back to the same value.
class RoundTripNumPut : public std::num_put<char> {
protected:
    iter_type do_put(iter_type out, std::ios_base& str, char_type fill, double v) const override
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        (void)str;
        (void)fill;
        return std::copy(buf, res.ptr, out);
    }
};

MatrixXd dense_from_json(const json& block)
{
    const auto rows = block.at("rows").get<Index>();
    const auto cols = block.at("cols").get<Index>();
    MatrixXd m = MatrixXd::Zero(rows, cols);
    const std::string storage = block.value("storage", "dense");
    if (storage == "dense") {
        const auto& values = block.at("values");
        if (static_cast<Index>(values.size()) != rows * cols)
            throw std::invalid_argument("matrix block: value count does not match shape");
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j)
                m(i, j) = values[static_cast<std::size_t>(i * cols + j)].get<double>();
    } else if (storage == "triplets") {
        for (const auto& e : block.at("entries")) {
            const auto i = e.at(0).get<Index>();
            const auto j = e.at(1).get<Index>();
            if (i < 0 || i >= rows || j < 0 || j >= cols)
                throw std::invalid_argument("matrix block: triplet index out of range");
            m(i, j) = e.at(2).get<double>();
        }
    } else {
        throw std::invalid_argument("matrix block: unknown storage '" + storage + "'");
    }
    return m;
}

json dense_block(const MatrixXd& m)
{
    json values = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            values.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"storage", "dense"}, {"values", std::move(values)}};
}

json nullable(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

void use_round_trip_doubles(std::ostream& out)
{
    out.imbue(std::locale(out.getloc(), new RoundTripNumPut));
}

json matrix_to_json(const MatrixXd& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json spec_to_json(const NetworkSpec& spec)
{
    return {{"size", spec.size},
            {"wiring_probability", spec.wiring_probability},
            {"spectral_radius", spec.spectral_radius},
            {"input_dim", spec.input_dim},
            {"bias", spec.bias},
            {"seed", spec.seed}};
}

NetworkSpec spec_from_json(const json& doc)
{
    NetworkSpec s;
    s.size = doc.value("size", s.size);
    s.wiring_probability = doc.value("wiring_probability", s.wiring_probability);
    s.spectral_radius = doc.value("spectral_radius", s.spectral_radius);
    s.input_dim = doc.value("input_dim", s.input_dim);
    s.bias = doc.value("bias", s.bias);
    s.seed = doc.value("seed", s.seed);
    return s;
}

json network_to_json(const NetworkRealization& net)
{
    const MatrixXd& w = net.weights();
    const auto nonzeros = net.sparse_weights().nonZeros();
    json weights;
    if (static_cast<double>(nonzeros) < 0.1 * static_cast<double>(w.size())) {
        json entries = json::array();
        for (Index i = 0; i < w.rows(); ++i)
            for (Index j = 0; j < w.cols(); ++j)
                if (w(i, j) != 0.0)
                    entries.push_back(json::array({i, j, w(i, j)}));
        weights = {{"rows", w.rows()}, {"cols", w.cols()}, {"storage", "triplets"}, {"entries", std::move(entries)}};
    } else {
        weights = dense_block(w);
    }
    json bias = json::array();
    for (Index i = 0; i < net.bias().size(); ++i)
        bias.push_back(net.bias()[i]);
    return {{"format", "esn-network-v1"},
            {"spec", spec_to_json(net.spec())},
            {"achieved_spectral_radius", net.achieved_radius()},
            {"weights", std::move(weights)},
            {"input_weights", dense_block(net.input_weights())},
            {"bias", std::move(bias)}};
}

NetworkRealization network_from_json(const json& doc)
{
    if (doc.value("format", "") != "esn-network-v1")
        throw std::invalid_argument("network document: expected format esn-network-v1");
    const NetworkSpec spec = spec_from_json(doc.at("spec"));
    MatrixXd w = dense_from_json(doc.at("weights"));
    MatrixXd v = dense_from_json(doc.at("input_weights"));
    const auto& b = doc.at("bias");
    VectorXd bias(static_cast<Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i)
        bias[static_cast<Index>(i)] = b[i].get<double>();
    return NetworkRealization(spec, std::move(w), std::move(v), std::move(bias));
}

json consistency_report_to_json(const ConsistencyReport& report)
{
    json node = json::array();
    for (Index i = 0; i < report.node.size(); ++i)
        node.push_back(nullable(report.node[i]));
    return {{"global", report.global},
            {"excluded", report.excluded},
            {"samples", report.samples},
            {"node", std::move(node)}};
}

void write_consistency_csv(std::ostream& out, const ConsistencyReport& report)
{
    use_round_trip_doubles(out);
    out << "node,gamma_sq\n";
    for (Index i = 0; i < report.node.size(); ++i) {
        out << i << ',';
        if (std::isfinite(report.node[i]))
            out << report.node[i];
        out << '\n';
    }
}

void write_memory_csv(std::ostream& out, const MemoryProfile& profile)
{
    use_round_trip_doubles(out);
    out << "lag,M,M_squared,Gamma_R_squared,Gamma_R\n";
    for (std::size_t i = 0; i < profile.lags.size(); ++i) {
        const double m = profile.accuracy[static_cast<Index>(i)];
        out << profile.lags[i] << ',' << m << ',' << m * m << ',';
        if (profile.has_replica()) {
            const double g = profile.readout_consistency[static_cast<Index>(i)];
            out << g << ',' << std::sqrt(std::max(g, 0.0));
        } else {
            out << ',';
        }
        out << '\n';
    }
}

json memory_summary_to_json(const MemoryProfile& profile)
{
    return {{"memory_capacity", profile.capacity},
            {"max_lag", profile.lags.empty() ? 0 : profile.lags.back()},
            {"ridge", profile.ridge},
            {"train_samples", profile.train_samples},
            {"test_samples", profile.test_samples},
            {"accuracy_evaluation", "held-out"},
            {"has_replica", profile.has_replica()}};
}

json lyapunov_report_to_json(const LyapunovReport& report)
{
    json ex = json::array();
    for (Index i = 0; i < report.exponents.size(); ++i)
        ex.push_back(report.exponents[i]);
    return {{"exponents", std::move(ex)},
            {"steps", report.steps},
            {"reortho_interval", report.reortho_interval},
            {"ky_dimension", report.ky_dimension},
            {"negative_fraction", report.negative_fraction},
            {"drift", report.drift},
            {"converged", report.converged}};
}

void write_profile_csv(std::ostream& out, const ConsistencyProfile& profile)
{
    use_round_trip_doubles(out);
    out << "index,sigma_squared,level,retained\n";
    const Index n = profile.full.sizes.size();
    for (Index i = 0; i < n; ++i) {
        out << i << ',' << profile.full.sizes[i] << ',';
        const bool retained = i < profile.levels.size();
        if (retained)
            out << profile.levels[i];
        out << ',' << (retained ? 1 : 0) << '\n';
    }
}

}  // namespace esn
