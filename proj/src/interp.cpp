#include "imq/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "imq/error.hpp"
#include "imq/textio.hpp"

namespace imq {

namespace {

// Neumaier compensated summation; fixed order keeps results run-to-run stable.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            carry_ += (sum_ - t) + v;
        else
            carry_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Integral of the kernel shifted to `center` over [a, inf).
double shifted_tail_right(const KernelParams& params, double center, double a) {
    const double offset = a - center;
    if (offset >= 0.0) return imq_tail_integral(params, offset);
    return 2.0 * imq_tail_integral(params, 0.0) - imq_tail_integral(params, -offset);
}

}  // namespace

Interpolant::Interpolant(CoefficientVector coeffs, CoefficientVector data, KernelParams params,
                         std::shared_ptr<const NodeWindow> window)
    : coeffs_(std::move(coeffs)), data_(std::move(data)), params_(params),
      window_(std::move(window)) {
    if (!window_) throw ValidationError("interp", "null node window");
    if (static_cast<std::size_t>(coeffs_.size()) != window_->size() ||
        static_cast<std::size_t>(data_.size()) != window_->size())
        throw ValidationError("interp", "coefficient/data length does not match the window");
}

void Interpolant::attach_fundamentals(std::shared_ptr<const FundamentalSet> fundamentals) {
    if (!fundamentals || fundamentals->size() != window_->size())
        throw ValidationError("interp", "fundamental set must hold one function per node");
    fundamentals_ = std::move(fundamentals);
}

const FundamentalSet& Interpolant::fundamentals() const {
    if (!fundamentals_)
        throw ValidationError("interp", "no fundamentals attached; via_fundamentals needs the "
                                        "full inverse");
    return *fundamentals_;
}

Interpolant make_interpolant(const CollocationMatrix& matrix, const CoefficientVector& y) {
    if (static_cast<std::size_t>(y.size()) != matrix.size())
        throw ValidationError("interp", "data length " + std::to_string(y.size()) +
                                            " does not match " + std::to_string(matrix.size()) +
                                            " nodes");
    if (!y.allFinite()) throw ValidationError("interp", "data must be finite");
    return Interpolant(spd_solve(matrix, y), y, matrix.params(), matrix.shared_window());
}

double eval_interpolant(const Interpolant& interpolant, double x, EvalPath path) {
    if (path == EvalPath::via_fundamentals) {
        const auto& set = interpolant.fundamentals();
        double sum = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i)
            sum += interpolant.data()(static_cast<Eigen::Index>(i)) * set[i](x);
        return sum;
    }
    const auto xs = interpolant.window().positions();
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        sum += interpolant.coeffs()(static_cast<Eigen::Index>(i)) *
               imq_eval(interpolant.params(), x - xs[i]);
    return sum;
}

double lebesgue_function(std::span<const FundamentalFunction> fundamentals, double x) {
    double sum = 0.0;
    for (const auto& L : fundamentals) sum += std::abs(L(x));
    return sum;
}

double lebesgue_sup(std::span<const FundamentalFunction> fundamentals, double lo, double hi,
                    int samples) {
    if (samples < 2 || !(hi > lo))
        throw ValidationError("interp", "lebesgue_sup needs lo < hi and >= 2 samples");
    double sup = 0.0;
    const double step = (hi - lo) / (samples - 1);
    for (int i = 0; i < samples; ++i)
        sup = std::max(sup, lebesgue_function(fundamentals, lo + step * i));
    return sup;
}

const char* to_string(NormKind p) {
    switch (p) {
        case NormKind::one: return "1";
        case NormKind::two: return "2";
        case NormKind::infinity: return "inf";
    }
    return "?";
}

NormKind parse_norm_kind(const std::string& text) {
    if (text == "1") return NormKind::one;
    if (text == "2") return NormKind::two;
    if (text == "inf" || text == "infinity") return NormKind::infinity;
    throw ValidationError("interp", "p must be one of 1, 2, inf; got '" + text + "'");
}

StabilityReport lp_stability(const Interpolant& interpolant, NormKind p, double grid_step,
                             int margin) {
    const auto& window = interpolant.window();
    if (window.size() < 2) throw ValidationError("interp", "degenerate hull: single node");
    if (!(grid_step > 0.0) || grid_step > window.sep_min() / 10.0)
        throw ValidationError("interp", "grid_step " + format_real(grid_step) +
                                            " must lie in (0, sep_min/10 = " +
                                            format_real(window.sep_min() / 10.0) + "]");
    const int m = margin < 0 ? window.default_margin() : margin;
    const auto [lo, hi] = window.core_range(m);
    const auto xs = window.positions();
    const double a = xs[lo];
    const double b = xs[hi];
    if (!(b > a)) throw ValidationError("interp", "degenerate hull: core holds a single node");

    const auto intervals = static_cast<long>(std::ceil((b - a) / grid_step));
    const double h = (b - a) / static_cast<double>(intervals);

    CompensatedSum integral;
    double grid_max = 0.0;
    for (long i = 0; i <= intervals; ++i) {
        const double x = i == intervals ? b : a + h * static_cast<double>(i);
        const double v = std::abs(eval_interpolant(interpolant, x));
        grid_max = std::max(grid_max, v);
        const double weight = (i == 0 || i == intervals) ? 0.5 : 1.0;
        if (p == NormKind::one) integral.add(weight * v);
        if (p == NormKind::two) integral.add(weight * v * v);
    }

    CompensatedSum data_sum;
    double data_max = 0.0;
    for (std::size_t s = lo; s <= hi; ++s) {
        const double y = std::abs(interpolant.data()(static_cast<Eigen::Index>(s)));
        data_max = std::max(data_max, y);
        if (p == NormKind::one) data_sum.add(y);
        if (p == NormKind::two) data_sum.add(y * y);
    }

    StabilityReport report;
    report.p = p;
    report.grid_step = h;
    switch (p) {
        case NormKind::one:
            report.norm_Ip = h * integral.value();
            report.norm_yp = data_sum.value();
            break;
        case NormKind::two:
            report.norm_Ip = std::sqrt(h * integral.value());
            report.norm_yp = std::sqrt(data_sum.value());
            break;
        case NormKind::infinity:
            report.norm_Ip = grid_max;
            report.norm_yp = data_max;
            break;
    }
    report.ratio = report.norm_yp > 0.0 ? report.norm_Ip / report.norm_yp : 0.0;

    CompensatedSum tail;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double c = std::abs(interpolant.coeffs()(static_cast<Eigen::Index>(j)));
        // Mass right of b plus mass left of a (mirror image).
        tail.add(c * (shifted_tail_right(interpolant.params(), xs[j], b) +
                      shifted_tail_right(interpolant.params(), -xs[j], -a)));
    }
    report.tail_l1_bound = tail.value();
    return report;
}

nlohmann::ordered_json to_json(const StabilityReport& report) {
    nlohmann::ordered_json j;
    j["p"] = to_string(report.p);
    j["norm_Ip"] = report.norm_Ip;
    j["norm_yp"] = report.norm_yp;
    j["ratio"] = report.ratio;
    j["grid_step"] = report.grid_step;
    j["tail_l1_bound"] = report.tail_l1_bound;
    return j;
}

}  // namespace imq
