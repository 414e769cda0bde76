#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "imq/collocation.hpp"
#include "imq/kernel.hpp"
#include "imq/nodes.hpp"
#include "json.hpp"

namespace imq {

enum class LagKind { index_distance, position_distance };

[[nodiscard]] const char* to_string(LagKind kind);

/// (lag, magnitude) pairs with strictly increasing lags.
struct DecayEnvelope {
    std::vector<double> lags;
    std::vector<double> magnitudes;
    LagKind kind = LagKind::position_distance;
};

/// Envelope of row `center_row` (logical index, must lie in the core) over
/// every other column. Equal lags keep the larger magnitude.
[[nodiscard]] DecayEnvelope envelope_of(const Matrix& entries, const NodeWindow& window,
                                        int center_row, LagKind kind, int margin = -1);

/// log(magnitude) ~ log_prefactor + exponent * log(lag).
struct DecayFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    double residual_rms = 0.0;
    double lag_lo = 0.0;
    double lag_hi = 0.0;
    int points_used = 0;
    /// Points inside the window skipped for zero or denormal magnitude.
    int points_excluded = 0;
};

inline constexpr double kMagnitudeFloor = 1e-300;
inline constexpr int kMinFitPoints = 5;

/// Least-squares line through (log lag, log magnitude) on [lag_lo, lag_hi].
/// Throws FitError with fewer than five usable points.
[[nodiscard]] DecayFit fit_exponent(const DecayEnvelope& envelope, double lag_lo, double lag_hi);

/// [20, min(80, N/2 - margin)].
[[nodiscard]] std::pair<double, double> default_fit_window(int half_width, int margin);

/// Empirical constant of a decay bound: max over core pairs of
/// |M(s,t)| * (alpha^2 + (x_s - x_t)^2)^k.
struct BoundReport {
    double max_ratio = 0.0;
    int arg_s = 0;  // logical indices
    int arg_t = 0;
    std::size_t truncation_size = 0;
};

inline constexpr int kDefaultMaxPower = 8;

/// Forms R^n by repeated multiplication and measures it against the kernel
/// envelope in node positions.
[[nodiscard]] BoundReport lemma2_power_check(const Matrix& r, int n, const KernelParams& params,
                                             const NodeWindow& window, int margin = -1,
                                             int max_power = kDefaultMaxPower);

[[nodiscard]] BoundReport theorem1_bound_ratio(const InverseMatrix& inverse,
                                               const KernelParams& params,
                                               const NodeWindow& window, int margin = -1);

/// Single-row variant restricted to |t - row| <= max_lag, for comparing rows.
[[nodiscard]] BoundReport row_bound_ratio(const Matrix& entries, const KernelParams& params,
                                          const NodeWindow& window, int row, int max_lag);

void write_envelope_csv(const std::filesystem::path& path, const DecayEnvelope& envelope);

[[nodiscard]] nlohmann::ordered_json to_json(const DecayFit& fit);
[[nodiscard]] nlohmann::ordered_json to_json(const BoundReport& report);

}  // namespace imq
