#include "esn/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
    std::optional<std::string> rho, noise, lambda;
    std::optional<int> realizations;
    std::optional<esn::Index> length;
    std::optional<std::size_t> washout;
    std::optional<int> size;
    std::optional<double> wiring;
    std::optional<std::string> metrics;
    std::optional<double> match_rho;
};

void add_common(CLI::App* sub, Overrides& o)
{
    sub->add_option("--config", o.config_path, "JSON config file (fields override recipe defaults)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--rho", o.rho, "spectral radius list: a,b,c or start:step:stop");
    sub->add_option("--noise", o.noise, "noise mixing list r");
    sub->add_option("--lambda", o.lambda, "regularization list");
    sub->add_option("--realizations", o.realizations, "independent network realizations");
    sub->add_option("--length", o.length, "drive length T");
    sub->add_option("--washout", o.washout, "discarded initial steps");
    sub->add_option("--size", o.size, "reservoir size N");
    sub->add_option("--wiring", o.wiring, "wiring probability p");
}

esn::ExperimentConfig resolve(const std::string& experiment, const Overrides& o)
{
    esn::ExperimentConfig c = esn::default_config(experiment);
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        esn::json doc;
        try {
            doc = esn::json::parse(in);
        } catch (const esn::json::parse_error& e) {
            throw esn::ConfigError(o.config_path + ": " + e.what());
        }
        c = esn::config_from_json(doc, c);
        c.experiment = experiment;
    }
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.output_dir = *o.out;
    if (o.threads) c.threads = *o.threads;
    if (o.rho) c.rho = esn::parse_grid(*o.rho);
    if (o.noise) c.noise = esn::parse_grid(*o.noise);
    if (o.lambda) c.lambda = esn::parse_grid(*o.lambda);
    if (o.realizations) c.realizations = *o.realizations;
    if (o.length) c.length = *o.length;
    if (o.washout) c.washout = *o.washout;
    if (o.size) c.network.size = *o.size;
    if (o.wiring) c.network.wiring_probability = *o.wiring;
    if (o.match_rho) c.match_rho = *o.match_rho;
    if (o.metrics) {
        c.metrics.clear();
        std::stringstream ss(*o.metrics);
        std::string m;
        while (std::getline(ss, m, ','))
            if (!m.empty())
                c.metrics.push_back(m);
    }
    esn::validate_config(c);
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Consistency analysis of echo state networks"};
    app.set_version_flag("--version", std::string(esn::version()));
    app.require_subcommand(1);

    Overrides o;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"sections", "response sections x_i(T) against one perturbed past input"},
        {"memory", "memory profiles, memory capacity and consistency over rho and r"},
        {"lyapunov", "conditional Lyapunov spectra and Kaplan-Yorke dimension over rho"},
        {"profile", "principal-component and consistency profiles, 2-D test system"},
        {"sweep", "resumable rho x r x lambda x realization grid"},
        {"generate-net", "write network realizations as JSON"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        subs[name] = sub;
    }
    subs["memory"]->add_option("--match-rho", o.match_rho,
                               "also compare this radius with a noise-matched network at noise_base_rho");
    subs["sweep"]->add_option("--metrics", o.metrics, "comma list: consistency,memory,lyapunov,profile");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? esn::kExitOk : esn::kExitUsage;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        const esn::ExperimentConfig c = resolve(name, o);
        if (name == "sections") return esn::cmd_sections(c);
        if (name == "memory") return esn::cmd_memory(c);
        if (name == "lyapunov") return esn::cmd_lyapunov(c);
        if (name == "profile") return esn::cmd_profile(c);
        if (name == "sweep") return esn::cmd_sweep(c);
        return esn::cmd_generate_net(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return esn::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return esn::kExitRuntime;
    }
}
