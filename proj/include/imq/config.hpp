#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imq/collocation.hpp"
#include "imq/decay.hpp"
#include "imq/interp.hpp"
#include "imq/nodes.hpp"
#include "json.hpp"

namespace imq {

enum class Experiment {
    cardinality,
    decay_inverse,
    decay_fundamental,
    neumann,
    lemma2,
    interpolate,
    lebesgue,
    stability,
};

[[nodiscard]] const char* to_string(Experiment e);
[[nodiscard]] Experiment parse_experiment(std::string_view name);

struct NodeSpec {
    enum class Kind { lattice, jitter, file };
    Kind kind = Kind::lattice;
    double delta = 0.25;
    std::uint64_t seed = 1;
    std::filesystem::path path;
};

/// Data vector used by interpolate.
enum class RhsKind { random, signs, ones, squares, unit };

/// Fully parsed experiment description. Fields that depend on the window
/// (margin, fit/sample windows, grid step) stay empty until resolution.
struct ExperimentConfig {
    Experiment experiment = Experiment::cardinality;
    double alpha = 2.0;
    int k = 2;
    int N = 100;
    NodeSpec nodes;
    std::optional<int> margin;
    std::filesystem::path out_dir = ".";
    std::size_t max_nodes = kDefaultMaxNodes;
    bool dump_matrix = false;

    double tolerance = 1e-8;

    LagKind lag_kind = LagKind::position_distance;
    std::optional<std::pair<double, double>> fit_window;
    double exponent_slack = 0.5;

    std::optional<std::pair<double, double>> sample_window;
    int samples = 10001;
    double plateau_factor = 2.0;

    std::vector<int> n_terms{5, 10, 20};
    int power = 2;

    RhsKind rhs = RhsKind::random;
    std::uint64_t rhs_seed = 1;
    int rhs_index = 0;
    int eval_points = 100;
    double path_tolerance = 1e-10;

    std::optional<double> grid_step;
    std::vector<NormKind> norms{NormKind::one, NormKind::two, NormKind::infinity};
    int trials = 50;
};

/// Parses a JSON config document. Relative node-file paths resolve against
/// base_dir. Unknown keys, range violations, and missing files raise
/// ValidationError/IoError naming the offending field or path.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text,
                                            const std::filesystem::path& base_dir = ".");

[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks every range constraint (used after command-line overrides).
void validate(const ExperimentConfig& config);

[[nodiscard]] NodeWindow build_window(const ExperimentConfig& config);

/// Window-dependent defaults filled in.
struct ResolvedSettings {
    int margin = 0;
    std::pair<double, double> fit_window;
    std::pair<double, double> sample_window;
    double grid_step = 0.0;
};

[[nodiscard]] ResolvedSettings resolve(const ExperimentConfig& config, const NodeWindow& window);

/// Full resolved configuration, embedded in every report.
[[nodiscard]] nlohmann::ordered_json to_json(const ExperimentConfig& config,
                                             const ResolvedSettings& resolved);

}  // namespace imq
