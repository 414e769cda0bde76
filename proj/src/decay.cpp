#include "imq/decay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imq/error.hpp"
#include "imq/textio.hpp"

namespace imq {

const char* to_string(LagKind kind) {
    return kind == LagKind::index_distance ? "index-distance" : "position-distance";
}

namespace {

int resolve_margin(const NodeWindow& window, int margin) {
    return margin < 0 ? window.default_margin() : margin;
}

void check_square(const Matrix& m, const NodeWindow& window) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != window.size())
        throw ValidationError("decay", "matrix is " + std::to_string(m.rows()) + "x" +
                                           std::to_string(m.cols()) + ", window has " +
                                           std::to_string(window.size()) + " nodes");
}

}  // namespace

DecayEnvelope envelope_of(const Matrix& entries, const NodeWindow& window, int center_row,
                          LagKind kind, int margin) {
    check_square(entries, window);
    const int m = resolve_margin(window, margin);
    if (!window.in_core(center_row, m))
        throw ValidationError("decay", "center row " + std::to_string(center_row) +
                                           " is outside the interior core (margin " +
                                           std::to_string(m) + ")");
    const std::size_t row = window.storage(center_row);
    const auto xs = window.positions();

    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(window.size());
    for (std::size_t col = 0; col < window.size(); ++col) {
        if (col == row) continue;
        const double lag = kind == LagKind::index_distance
                               ? std::abs(static_cast<double>(col) - static_cast<double>(row))
                               : std::abs(xs[col] - xs[row]);
        pairs.emplace_back(lag, std::abs(entries(static_cast<Eigen::Index>(row),
                                                 static_cast<Eigen::Index>(col))));
    }
    std::sort(pairs.begin(), pairs.end());

    DecayEnvelope env;
    env.kind = kind;
    for (const auto& [lag, mag] : pairs) {
        if (!env.lags.empty() && env.lags.back() == lag) {
            env.magnitudes.back() = std::max(env.magnitudes.back(), mag);
            continue;
        }
        env.lags.push_back(lag);
        env.magnitudes.push_back(mag);
    }
    return env;
}

DecayFit fit_exponent(const DecayEnvelope& envelope, double lag_lo, double lag_hi) {
    if (!(lag_lo > 0.0) || !(lag_hi > lag_lo))
        throw FitError("decay", "fit window must satisfy 0 < lag_lo < lag_hi");
    std::vector<double> lx, ly;
    int excluded = 0;
    for (std::size_t i = 0; i < envelope.lags.size(); ++i) {
        const double lag = envelope.lags[i];
        if (lag < lag_lo || lag > lag_hi) continue;
        const double mag = envelope.magnitudes[i];
        if (!(mag > kMagnitudeFloor) || !std::isfinite(mag)) {
            ++excluded;
            continue;
        }
        lx.push_back(std::log(lag));
        ly.push_back(std::log(mag));
    }
    if (static_cast<int>(lx.size()) < kMinFitPoints)
        throw FitError("decay", "only " + std::to_string(lx.size()) + " usable points in [" +
                                    format_real(lag_lo) + ", " + format_real(lag_hi) + "] (" +
                                    std::to_string(excluded) + " excluded), need " +
                                    std::to_string(kMinFitPoints));

    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("decay", "all lags coincide in the fit window");

    DecayFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.lag_lo = lag_lo;
    fit.lag_hi = lag_hi;
    fit.points_used = static_cast<int>(lx.size());
    fit.points_excluded = excluded;
    return fit;
}

std::pair<double, double> default_fit_window(int half_width, int margin) {
    const double hi = std::min(80.0, half_width / 2.0 - margin);
    return {20.0, hi};
}

namespace {

BoundReport max_weighted_ratio(const Matrix& m, const KernelParams& params,
                               const NodeWindow& window, int margin) {
    const auto [lo, hi] = window.core_range(margin);
    const auto xs = window.positions();
    BoundReport report;
    report.truncation_size = window.size();
    report.max_ratio = -1.0;
    for (std::size_t t = lo; t <= hi; ++t) {
        for (std::size_t s = lo; s <= hi; ++s) {
            const double ratio = std::abs(m(static_cast<Eigen::Index>(s),
                                            static_cast<Eigen::Index>(t))) *
                                 imq_weight(params, xs[s] - xs[t]);
            if (ratio > report.max_ratio) {
                report.max_ratio = ratio;
                report.arg_s = window.logical(s);
                report.arg_t = window.logical(t);
            }
        }
    }
    return report;
}

}  // namespace

BoundReport lemma2_power_check(const Matrix& r, int n, const KernelParams& params,
                               const NodeWindow& window, int margin, int max_power) {
    check_square(r, window);
    if (n < 1) throw ValidationError("decay", "power n must be >= 1");
    if (n > max_power)
        throw ValidationError("decay", "power n = " + std::to_string(n) + " exceeds the cap " +
                                           std::to_string(max_power));
    Matrix power = r;
    for (int i = 1; i < n; ++i) {
        Matrix next = power * r;
        power.swap(next);
    }
    if (!power.allFinite()) throw NumericalError("decay", "matrix power overflowed");
    return max_weighted_ratio(power, params, window, resolve_margin(window, margin));
}

BoundReport theorem1_bound_ratio(const InverseMatrix& inverse, const KernelParams& params,
                                 const NodeWindow& window, int margin) {
    check_square(inverse.entries, window);
    return max_weighted_ratio(inverse.entries, params, window, resolve_margin(window, margin));
}

BoundReport row_bound_ratio(const Matrix& entries, const KernelParams& params,
                            const NodeWindow& window, int row, int max_lag) {
    check_square(entries, window);
    if (max_lag < 0) throw ValidationError("decay", "max_lag must be >= 0");
    if (!window.contains(row - max_lag) || !window.contains(row + max_lag))
        throw ValidationError("decay", "row band leaves the window");
    const auto s = window.storage(row);
    BoundReport report;
    report.truncation_size = window.size();
    report.max_ratio = -1.0;
    report.arg_s = row;
    for (int t = row - max_lag; t <= row + max_lag; ++t) {
        const auto ts = window.storage(t);
        const double ratio = std::abs(entries(static_cast<Eigen::Index>(s),
                                              static_cast<Eigen::Index>(ts))) *
                             imq_weight(params, window.at(row) - window.at(t));
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.arg_t = t;
        }
    }
    return report;
}

void write_envelope_csv(const std::filesystem::path& path, const DecayEnvelope& envelope) {
    write_pair_csv(path, "lag", "magnitude", envelope.lags, envelope.magnitudes);
}

nlohmann::ordered_json to_json(const DecayFit& fit) {
    nlohmann::ordered_json j;
    j["exponent"] = fit.exponent;
    j["log_prefactor"] = fit.log_prefactor;
    j["residual_rms"] = fit.residual_rms;
    j["lag_lo"] = fit.lag_lo;
    j["lag_hi"] = fit.lag_hi;
    j["points_used"] = fit.points_used;
    j["points_excluded"] = fit.points_excluded;
    return j;
}

nlohmann::ordered_json to_json(const BoundReport& report) {
    nlohmann::ordered_json j;
    j["max_ratio"] = report.max_ratio;
    j["argmax_pair"] = {report.arg_s, report.arg_t};
    j["truncation_size"] = report.truncation_size;
    return j;
}

}  // namespace imq
