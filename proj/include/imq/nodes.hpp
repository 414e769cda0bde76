#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace imq {

/// A finite, strictly increasing window of sampling nodes standing in for a
/// complete interpolating sequence. Nodes are addressed by logical index
/// j in [first_index(), last_index()], with j = 0 at the center node.
///
/// sep_min / sep_max are the smallest and largest adjacent gaps; a single-node
/// window reports (1, 1).
class NodeWindow {
public:
    /// Validates strict monotonicity. Any length >= 1 is accepted here;
    /// from_list() additionally insists on an odd length.
    explicit NodeWindow(std::vector<double> positions);

    std::size_t size() const { return positions_.size(); }
    std::span<const double> positions() const { return positions_; }

    /// Storage offset of logical index 0.
    std::ptrdiff_t center_index() const { return center_; }
    /// N for a window of 2N+1 nodes (floor((size-1)/2) in general).
    int half_width() const { return static_cast<int>((size() - 1) / 2); }

    int first_index() const { return static_cast<int>(-center_); }
    int last_index() const { return static_cast<int>(size()) - 1 - static_cast<int>(center_); }
    bool contains(int j) const { return j >= first_index() && j <= last_index(); }

    std::size_t storage(int j) const;
    int logical(std::size_t s) const { return static_cast<int>(s) - static_cast<int>(center_); }

    /// x_j by logical index.
    double at(int j) const { return positions_[storage(j)]; }

    double sep_min() const { return sep_min_; }
    double sep_max() const { return sep_max_; }

    /// Default interior margin N/4.
    int default_margin() const { return half_width() / 4; }

    /// Storage range [lo, hi] of the interior core after trimming `margin`
    /// nodes from each end. Throws if nothing is left.
    std::pair<std::size_t, std::size_t> core_range(int margin) const;
    bool in_core(int j, int margin) const;

private:
    std::vector<double> positions_;
    std::ptrdiff_t center_ = 0;
    double sep_min_ = 1.0;
    double sep_max_ = 1.0;
};

/// Cardinal window x_j = j, j in [-N, N].
[[nodiscard]] NodeWindow lattice_window(int N);

/// x_j = j + u_j with u_j ~ U[-delta, delta] i.i.d., generated by a
/// mt19937_64 seeded with `seed`. Requires 0 <= delta < 1/2.
[[nodiscard]] NodeWindow jittered_window(int N, double delta, std::uint64_t seed);

/// Validated window from an explicit odd-length list.
[[nodiscard]] NodeWindow from_list(std::span<const double> xs);

/// Node list file: one decimal real per line, strictly increasing. Blank
/// lines and lines starting with '#' are skipped.
[[nodiscard]] NodeWindow read_node_file(const std::filesystem::path& path);

}  // namespace imq
