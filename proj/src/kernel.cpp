#include "imq/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "imq/error.hpp"

namespace imq {

namespace {

double int_pow(double base, int n) {
    double result = 1.0;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

}  // namespace

KernelParams::KernelParams(double alpha, int k) : alpha_(alpha), k_(k) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("kernel", "alpha must be a finite positive real, got " +
                                            std::to_string(alpha));
    if (k < 1)
        throw ValidationError("kernel", "k must be >= 1, got " + std::to_string(k));
}

double imq_weight(const KernelParams& params, double t) {
    const double a = params.alpha();
    return int_pow(a * a + t * t, params.k());
}

double imq_eval(const KernelParams& params, double t) {
    return 1.0 / imq_weight(params, t);
}

double imq_tail_integral(const KernelParams& params, double a) {
    if (a < 0.0)
        throw ValidationError("kernel", "tail integral needs a >= 0");
    const double alpha = params.alpha();
    const double a2 = alpha * alpha;
    // J_1(a) = (pi/2 - atan(a/alpha)) / alpha
    // J_{n+1}(a) = -a / (2n a2 (a2+a^2)^n) + (2n-1)/(2n a2) J_n(a)
    double tail = std::atan2(alpha, a) / alpha;
    double base_pow = 1.0;
    for (int n = 1; n < params.k(); ++n) {
        base_pow *= (a2 + a * a);
        tail = -a / (2.0 * n * a2 * base_pow) + (2.0 * n - 1.0) / (2.0 * n * a2) * tail;
    }
    return tail;
}

PartialFractionSides partial_fraction_split(double alpha, int M, int j) {
    if (M < 1)
        throw ValidationError("kernel", "partial_fraction_split needs M >= 1, got " +
                                            std::to_string(M));
    if (j < 0 || j > M)
        throw ValidationError("kernel", "partial_fraction_split needs 0 <= j <= M, got j=" +
                                            std::to_string(j) + ", M=" + std::to_string(M));
    if (!(alpha > 0.0))
        throw ValidationError("kernel", "alpha must be positive");

    const double a2 = alpha * alpha;
    const double jd = j;
    const double Md = M;
    const double near = a2 + jd * jd;
    const double far = a2 + (Md - jd) * (Md - jd);

    PartialFractionSides sides{};
    sides.lhs = 1.0 / (near * far);
    const double slope = 2.0 / Md;
    sides.rhs = ((slope * jd + 1.0) / near + (3.0 - slope * jd) / far) / (4.0 * a2 + Md * Md);
    return sides;
}

}  // namespace imq
