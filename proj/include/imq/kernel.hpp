#pragma once

namespace imq {

/// Shape and order of the inverse multiquadric (alpha^2 + t^2)^(-k).
class KernelParams {
public:
    /// Throws ValidationError unless alpha > 0 (finite) and k >= 1.
    KernelParams(double alpha, int k);

    double alpha() const { return alpha_; }
    int k() const { return k_; }

private:
    double alpha_;
    int k_;
};

/// (alpha^2 + t^2)^(-k). The integer power is taken by repeated squaring of
/// the base, followed by a single reciprocal.
[[nodiscard]] double imq_eval(const KernelParams& params, double t);

/// (alpha^2 + t^2)^k, the reciprocal weight used by the decay ratios.
[[nodiscard]] double imq_weight(const KernelParams& params, double t);

/// Integral of the kernel over [a, inf) for a >= 0, in closed form via the
/// reduction formula in k.
[[nodiscard]] double imq_tail_integral(const KernelParams& params, double a);

struct PartialFractionSides {
    double lhs;
    double rhs;
};

// Both sides of
//   1/[(a^2+j^2)(a^2+(M-j)^2)]
//     = (4a^2+M^2)^-1 [ ((2/M)j+1)/(a^2+j^2) + (3-(2/M)j)/(a^2+(M-j)^2) ],
// evaluated independently. Requires M >= 1 and 0 <= j <= M.
[[nodiscard]] PartialFractionSides partial_fraction_split(double alpha, int M, int j);

}  // namespace imq
