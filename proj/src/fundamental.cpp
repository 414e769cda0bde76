#include "imq/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imq/error.hpp"
#include "imq/textio.hpp"

namespace imq {

FundamentalFunction::FundamentalFunction(int center, CoefficientVector coeffs,
                                         KernelParams params,
                                         std::shared_ptr<const NodeWindow> window)
    : center_(center), coeffs_(std::move(coeffs)), params_(params), window_(std::move(window)) {
    if (!window_) throw ValidationError("fundamental", "null node window");
    if (static_cast<std::size_t>(coeffs_.size()) != window_->size())
        throw ValidationError("fundamental", "coefficient length does not match the window");
    if (!window_->contains(center_))
        throw ValidationError("fundamental", "center " + std::to_string(center_) +
                                                 " outside the window");
}

double FundamentalFunction::operator()(double x) const {
    const auto xs = window_->positions();
    double sum = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j)
        sum += coeffs_(static_cast<Eigen::Index>(j)) * imq_eval(params_, x - xs[j]);
    return sum;
}

FundamentalFunction make_fundamental(const CollocationMatrix& matrix, int m) {
    const auto& window = matrix.window();
    const auto s = window.storage(m);
    CoefficientVector unit = CoefficientVector::Zero(static_cast<Eigen::Index>(window.size()));
    unit(static_cast<Eigen::Index>(s)) = 1.0;
    return FundamentalFunction(m, spd_solve(matrix, unit), matrix.params(),
                               matrix.shared_window());
}

FundamentalSet make_all_fundamentals(const CollocationMatrix& matrix,
                                     const InverseMatrix& inverse) {
    const auto& window = matrix.window();
    if (static_cast<std::size_t>(inverse.entries.cols()) != window.size())
        throw ValidationError("fundamental", "inverse does not match the window");
    FundamentalSet set;
    set.reserve(window.size());
    for (std::size_t s = 0; s < window.size(); ++s)
        set.emplace_back(window.logical(s), inverse.entries.col(static_cast<Eigen::Index>(s)),
                         matrix.params(), matrix.shared_window());
    return set;
}

double eval_fundamental(const FundamentalFunction& L, double x) { return L(x); }

CardinalityResidual cardinality_residual(const FundamentalFunction& L, double tol, int margin) {
    const auto& window = L.window();
    const int m = margin < 0 ? window.default_margin() : margin;
    const auto [lo, hi] = window.core_range(m);
    const auto center = window.storage(L.center());
    CardinalityResidual res;
    res.argmax_node = window.logical(lo);
    for (std::size_t s = lo; s <= hi; ++s) {
        const double target = s == center ? 1.0 : 0.0;
        const double dev = std::abs(L(window.positions()[s]) - target);
        if (dev > res.max_abs_deviation) {
            res.max_abs_deviation = dev;
            res.argmax_node = window.logical(s);
        }
    }
    res.passed = res.max_abs_deviation <= tol;
    return res;
}

DecayEnvelope fundamental_envelope(const FundamentalFunction& L, double d_lo, double d_hi,
                                   int samples, int margin) {
    if (samples < 50) throw ValidationError("fundamental", "need at least 50 samples");
    if (!(d_lo >= 0.0) || !(d_hi > d_lo))
        throw ValidationError("fundamental", "sample window must satisfy 0 <= d_lo < d_hi");
    const auto& window = L.window();
    const int m = margin < 0 ? window.default_margin() : margin;
    const auto [lo, hi] = window.core_range(m);
    const double xm = window.at(L.center());
    // A single node has no hull; its fundamental function is the bare kernel.
    if (window.size() > 1 &&
        (xm + d_hi > window.positions()[hi] || xm + d_lo < window.positions()[lo]))
        throw ValidationError("fundamental", "sample window [" + format_real(xm + d_lo) + ", " +
                                                 format_real(xm + d_hi) +
                                                 "] leaves the core hull");

    DecayEnvelope env;
    env.kind = LagKind::position_distance;
    const double step = (d_hi - d_lo) / (samples - 1);
    long current_bin = -1;
    for (int i = 0; i < samples; ++i) {
        const double d = d_lo + step * i;
        const double mag = std::abs(L(xm + d));
        const long bin = static_cast<long>(std::floor(d));
        if (bin != current_bin) {
            env.lags.push_back(d);
            env.magnitudes.push_back(mag);
            current_bin = bin;
        } else if (mag > env.magnitudes.back()) {
            env.lags.back() = d;
            env.magnitudes.back() = mag;
        }
    }
    return env;
}

DecayFit envelope_fit_fundamental(const FundamentalFunction& L, double d_lo, double d_hi,
                                  int samples, int margin) {
    const DecayEnvelope env = fundamental_envelope(L, d_lo, d_hi, samples, margin);
    const auto first_positive = std::find_if(env.lags.begin(), env.lags.end(),
                                             [](double lag) { return lag > 0.0; });
    if (first_positive == env.lags.end())
        throw FitError("fundamental", "no positive distances in the sample window");
    return fit_exponent(env, *first_positive, d_hi);
}

double weighted_peak(const FundamentalFunction& L, double d_lo, double d_hi, double step) {
    if (!(step > 0.0) || !(d_hi >= d_lo))
        throw ValidationError("fundamental", "weighted_peak needs step > 0 and d_lo <= d_hi");
    const double xm = L.window().at(L.center());
    const auto count = static_cast<long>(std::floor((d_hi - d_lo) / step + 1e-9));
    double peak = 0.0;
    for (long i = 0; i <= count; ++i) {
        const double d = d_lo + step * static_cast<double>(i);
        peak = std::max(peak, std::abs(L(xm + d)) * imq_weight(L.params(), d));
    }
    return peak;
}

SeriesValue weighted_series_eval(std::span<const FundamentalFunction> fundamentals,
                                 const CoefficientVector& b, double x) {
    if (fundamentals.empty())
        throw ValidationError("fundamental", "empty fundamental set");
    if (static_cast<std::size_t>(b.size()) != fundamentals.size())
        throw ValidationError("fundamental", "weights length " + std::to_string(b.size()) +
                                                 " does not match " +
                                                 std::to_string(fundamentals.size()) +
                                                 " fundamentals");
    if (!b.allFinite()) throw ValidationError("fundamental", "weights must be finite");
    SeriesValue out;
    const std::size_t last = fundamentals.size() - 1;
    for (std::size_t m = 0; m < fundamentals.size(); ++m) {
        const double term = b(static_cast<Eigen::Index>(m)) * fundamentals[m](x);
        out.value += term;
        if (m == 0 || m == last) out.tail_magnitude = std::max(out.tail_magnitude, std::abs(term));
    }
    return out;
}

void write_samples_csv(const std::filesystem::path& path, std::span<const double> xs,
                       std::span<const double> values) {
    write_pair_csv(path, "x", "value", xs, values);
}

}  // namespace imq
