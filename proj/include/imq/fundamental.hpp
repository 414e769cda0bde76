#pragma once

#include <memory>
#include <span>
#include <vector>

#include "imq/collocation.hpp"
#include "imq/decay.hpp"

namespace imq {

/// L_m(x) = sum_j A^-1(j, m) (alpha^2 + (x - x_j)^2)^(-k), truncated to the
/// window. coeffs is column m of A^-1 in storage order.
class FundamentalFunction {
public:
    FundamentalFunction(int center, CoefficientVector coeffs, KernelParams params,
                        std::shared_ptr<const NodeWindow> window);

    int center() const { return center_; }
    const CoefficientVector& coeffs() const { return coeffs_; }
    const KernelParams& params() const { return params_; }
    const NodeWindow& window() const { return *window_; }

    double operator()(double x) const;

private:
    int center_;
    CoefficientVector coeffs_;
    KernelParams params_;
    std::shared_ptr<const NodeWindow> window_;
};

/// One L_j per node, in storage order.
using FundamentalSet = std::vector<FundamentalFunction>;

/// Coefficients from a Cholesky solve against e_m (m is a logical index).
[[nodiscard]] FundamentalFunction make_fundamental(const CollocationMatrix& matrix, int m);

/// Every fundamental function, read off the columns of a precomputed inverse.
[[nodiscard]] FundamentalSet make_all_fundamentals(const CollocationMatrix& matrix,
                                                   const InverseMatrix& inverse);

[[nodiscard]] double eval_fundamental(const FundamentalFunction& L, double x);

struct CardinalityResidual {
    double max_abs_deviation = 0.0;
    int argmax_node = 0;  // logical index
    bool passed = false;
};

/// max over core nodes x_j of |L_m(x_j) - delta_{jm}|.
[[nodiscard]] CardinalityResidual cardinality_residual(const FundamentalFunction& L, double tol,
                                                       int margin = -1);

/// Per-unit-interval maxima of |L_m(x_m + d)| for d on a uniform grid of
/// `samples` points over [d_lo, d_hi]. Each bin reports the distance where
/// its maximum sits.
[[nodiscard]] DecayEnvelope fundamental_envelope(const FundamentalFunction& L, double d_lo,
                                                 double d_hi, int samples, int margin = -1);

/// Power-law fit of the per-unit-interval envelope; [d_lo, d_hi] are
/// distances to the right of x_m and must stay inside the core hull.
[[nodiscard]] DecayFit envelope_fit_fundamental(const FundamentalFunction& L, double d_lo,
                                                double d_hi, int samples, int margin = -1);

/// max over d in [d_lo, d_hi] (grid of `step`) of |L_m(x_m + d)| (alpha^2 + d^2)^k.
[[nodiscard]] double weighted_peak(const FundamentalFunction& L, double d_lo, double d_hi,
                                   double step);

struct SeriesValue {
    double value = 0.0;
    /// max(|b_first L_first(x)|, |b_last L_last(x)|), a truncation indicator.
    double tail_magnitude = 0.0;
};

/// sum_m b_m L_m(x) over the truncation; b is in storage order.
[[nodiscard]] SeriesValue weighted_series_eval(std::span<const FundamentalFunction> fundamentals,
                                               const CoefficientVector& b, double x);

void write_samples_csv(const std::filesystem::path& path, std::span<const double> xs,
                       std::span<const double> values);

}  // namespace imq
