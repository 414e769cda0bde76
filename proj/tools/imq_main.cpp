// imq <experiment> --config <path> [--out <dir>] [--alpha A] [--k K] [--n N] [--seed S]
//
// Exit codes: 0 all tolerances met, 2 tolerance failure, 1 error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "imq/config.hpp"
#include "imq/error.hpp"
#include "imq/experiments.hpp"

namespace {

std::size_t max_nodes_from_env() {
    const char* raw = std::getenv("IMQ_MAX_NODES");
    if (!raw || !*raw) return imq::kDefaultMaxNodes;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used != std::string(raw).size() || v < 1) throw std::invalid_argument(raw);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw imq::ValidationError("cli", std::string("IMQ_MAX_NODES must be a positive integer, got '") +
                                              raw + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fundamental functions for scattered shifts of the inverse multiquadric"};

    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::optional<double> alpha;
    std::optional<int> k;
    std::optional<int> n;
    std::optional<std::uint64_t> seed;

    app.add_option("experiment", experiment,
                   "cardinality | decay-inverse | decay-fundamental | neumann | lemma2 | "
                   "interpolate | lebesgue | stability")
        ->required();
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--out", out_dir, "output directory (default: config out_dir or .)");
    app.add_option("--alpha", alpha, "kernel shape alpha > 0");
    app.add_option("--k", k, "kernel order k >= 1");
    app.add_option("--n", n, "window half-width N (2N+1 nodes)");
    app.add_option("--seed", seed, "seed for jittered nodes and random data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        imq::ExperimentConfig config =
            config_path.empty() ? imq::parse_config("{}") : imq::load_config(config_path);
        config.experiment = imq::parse_experiment(experiment);
        if (alpha) config.alpha = *alpha;
        if (k) config.k = *k;
        if (n) config.N = *n;
        if (seed) {
            config.nodes.seed = *seed;
            config.rhs_seed = *seed;
        }
        config.max_nodes = max_nodes_from_env();
        if (!out_dir.empty()) config.out_dir = out_dir;
        imq::validate(config);

        const imq::ExperimentReport report = imq::run_experiment(config);
        const auto written = imq::emit_report(report, config.out_dir);
        std::cout << imq::to_string(config.experiment) << ": "
                  << (report.passed ? "PASS" : "FAIL (tolerance)") << "\n";
        for (const auto& path : written) std::cout << "  wrote " << path.string() << "\n";
        return report.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
