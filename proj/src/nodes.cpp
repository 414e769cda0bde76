#include "imq/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "imq/error.hpp"
#include "imq/textio.hpp"

namespace imq {

NodeWindow::NodeWindow(std::vector<double> positions) : positions_(std::move(positions)) {
    if (positions_.empty())
        throw ValidationError("nodes", "window must contain at least one node");
    for (std::size_t s = 0; s < positions_.size(); ++s) {
        if (!std::isfinite(positions_[s]))
            throw ValidationError("nodes", "non-finite node at position " + std::to_string(s));
    }
    center_ = static_cast<std::ptrdiff_t>((positions_.size() - 1) / 2);

    if (positions_.size() == 1) return;
    sep_min_ = std::numeric_limits<double>::infinity();
    sep_max_ = 0.0;
    for (std::size_t s = 0; s + 1 < positions_.size(); ++s) {
        const double gap = positions_[s + 1] - positions_[s];
        if (!(gap > 0.0))
            throw ValidationError("nodes", "non-increasing at pair (" + format_real(positions_[s]) +
                                               ", " + format_real(positions_[s + 1]) +
                                               ") at positions " + std::to_string(s) + "," +
                                               std::to_string(s + 1));
        sep_min_ = std::min(sep_min_, gap);
        sep_max_ = std::max(sep_max_, gap);
    }
}

std::size_t NodeWindow::storage(int j) const {
    if (!contains(j))
        throw ValidationError("nodes", "index " + std::to_string(j) + " outside window [" +
                                           std::to_string(first_index()) + ", " +
                                           std::to_string(last_index()) + "]");
    return static_cast<std::size_t>(j + center_);
}

std::pair<std::size_t, std::size_t> NodeWindow::core_range(int margin) const {
    if (margin < 0) throw ValidationError("nodes", "margin must be >= 0");
    const auto m = static_cast<std::size_t>(margin);
    if (2 * m >= size())
        throw ValidationError("nodes", "margin " + std::to_string(margin) +
                                           " leaves an empty core in a window of " +
                                           std::to_string(size()) + " nodes");
    return {m, size() - 1 - m};
}

bool NodeWindow::in_core(int j, int margin) const {
    if (!contains(j)) return false;
    const auto [lo, hi] = core_range(margin);
    const auto s = storage(j);
    return s >= lo && s <= hi;
}

NodeWindow lattice_window(int N) {
    if (N < 0) throw ValidationError("nodes", "N must be >= 0");
    std::vector<double> xs(2 * static_cast<std::size_t>(N) + 1);
    for (std::size_t s = 0; s < xs.size(); ++s) xs[s] = static_cast<double>(s) - N;
    return NodeWindow(std::move(xs));
}

NodeWindow jittered_window(int N, double delta, std::uint64_t seed) {
    if (N < 0) throw ValidationError("nodes", "N must be >= 0");
    if (!(delta >= 0.0) || !(delta < 0.5))
        throw ValidationError("nodes", "jitter delta must lie in [0, 1/2), got " +
                                           format_real(delta));
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> jitter(-delta, delta);
    std::vector<double> xs(2 * static_cast<std::size_t>(N) + 1);
    for (std::size_t s = 0; s < xs.size(); ++s) {
        // Draw unconditionally so delta = 0 consumes the same stream.
        const double u = jitter(engine);
        xs[s] = static_cast<double>(s) - N + (delta > 0.0 ? u : 0.0);
    }
    return NodeWindow(std::move(xs));
}

NodeWindow from_list(std::span<const double> xs) {
    if (xs.empty() || xs.size() % 2 == 0)
        throw ValidationError("nodes", "node list must have odd length >= 1, got " +
                                           std::to_string(xs.size()));
    return NodeWindow(std::vector<double>(xs.begin(), xs.end()));
}

NodeWindow read_node_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("nodes", "cannot open node file " + path.string());
    std::vector<double> xs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        double x = 0.0;
        std::string rest;
        if (!(fields >> x) || (fields >> rest))
            throw ValidationError("nodes", path.string() + ":" + std::to_string(lineno) +
                                               ": expected a single real, got '" + line + "'");
        xs.push_back(x);
    }
    return from_list(xs);
}

}  // namespace imq
