#pragma once

#include <memory>
#include <span>

#include "imq/collocation.hpp"
#include "imq/fundamental.hpp"
#include "json.hpp"

namespace imq {

/// I[y](x) = sum_i (A^-1 y)_i (alpha^2 + (x - x_i)^2)^(-k).
class Interpolant {
public:
    Interpolant(CoefficientVector coeffs, CoefficientVector data, KernelParams params,
                std::shared_ptr<const NodeWindow> window);

    const CoefficientVector& coeffs() const { return coeffs_; }
    const CoefficientVector& data() const { return data_; }
    const KernelParams& params() const { return params_; }
    const NodeWindow& window() const { return *window_; }

    /// Enables EvalPath::via_fundamentals. The set must cover every node.
    void attach_fundamentals(std::shared_ptr<const FundamentalSet> fundamentals);
    bool has_fundamentals() const { return static_cast<bool>(fundamentals_); }
    const FundamentalSet& fundamentals() const;

private:
    CoefficientVector coeffs_;
    CoefficientVector data_;
    KernelParams params_;
    std::shared_ptr<const NodeWindow> window_;
    std::shared_ptr<const FundamentalSet> fundamentals_;
};

[[nodiscard]] Interpolant make_interpolant(const CollocationMatrix& matrix,
                                           const CoefficientVector& y);

enum class EvalPath { direct, via_fundamentals };

/// direct sums coeffs against kernel shifts; via_fundamentals sums y_i L_i(x).
[[nodiscard]] double eval_interpolant(const Interpolant& interpolant, double x,
                                      EvalPath path = EvalPath::direct);

/// Lambda(x) = sum_j |L_j(x)|.
[[nodiscard]] double lebesgue_function(std::span<const FundamentalFunction> fundamentals,
                                       double x);

/// Grid maximum of the Lebesgue function over [lo, hi].
[[nodiscard]] double lebesgue_sup(std::span<const FundamentalFunction> fundamentals, double lo,
                                  double hi, int samples);

enum class NormKind { one, two, infinity };

[[nodiscard]] const char* to_string(NormKind p);
[[nodiscard]] NormKind parse_norm_kind(const std::string& text);

struct StabilityReport {
    NormKind p = NormKind::infinity;
    double norm_Ip = 0.0;
    double norm_yp = 0.0;
    double ratio = 0.0;
    double grid_step = 0.0;
    /// Upper bound on the L1 mass of I[y] outside the core hull, from the
    /// closed-form kernel tail; reported, never integrated into norm_Ip.
    double tail_l1_bound = 0.0;
};

/// ||I[y]||_p over the core hull (composite trapezoid for p = 1, 2; grid max
/// for p = inf) against the discrete ||y||_p over core nodes. Requires
/// grid_step <= sep_min / 10.
[[nodiscard]] StabilityReport lp_stability(const Interpolant& interpolant, NormKind p,
                                           double grid_step, int margin = -1);

[[nodiscard]] nlohmann::ordered_json to_json(const StabilityReport& report);

}  // namespace imq
