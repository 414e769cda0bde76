#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>

#include "imq/kernel.hpp"
#include "imq/nodes.hpp"

namespace imq {

using Matrix = Eigen::MatrixXd;
/// Coefficients or data indexed like the window (storage order).
using CoefficientVector = Eigen::VectorXd;

inline constexpr std::size_t kDefaultMaxNodes = 5001;

/// Truncated collocation matrix A(i,j) = (alpha^2 + (x_i - x_j)^2)^(-k).
/// Immutable once built; shares ownership of its node window.
class CollocationMatrix {
public:
    CollocationMatrix(Matrix entries, KernelParams params,
                      std::shared_ptr<const NodeWindow> window)
        : entries_(std::move(entries)), params_(params), window_(std::move(window)) {}

    const Matrix& entries() const { return entries_; }
    const KernelParams& params() const { return params_; }
    const NodeWindow& window() const { return *window_; }
    const std::shared_ptr<const NodeWindow>& shared_window() const { return window_; }
    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

private:
    Matrix entries_;
    KernelParams params_;
    std::shared_ptr<const NodeWindow> window_;
};

/// Throws ValidationError when the window exceeds max_nodes.
[[nodiscard]] CollocationMatrix build_matrix(const KernelParams& params,
                                             std::shared_ptr<const NodeWindow> window,
                                             std::size_t max_nodes = kDefaultMaxNodes);
[[nodiscard]] CollocationMatrix build_matrix(const KernelParams& params, NodeWindow window,
                                             std::size_t max_nodes = kDefaultMaxNodes);

/// Lower Cholesky factor A = L L^T. A non-positive pivot raises
/// NumericalError naming the pivot's storage index.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const Matrix& spd);

    [[nodiscard]] CoefficientVector solve(const CoefficientVector& rhs) const;
    [[nodiscard]] Matrix solve(const Matrix& rhs) const;
    const Matrix& lower() const { return lower_; }

private:
    Matrix lower_;
};

/// Solves A a = rhs for a single right-hand side.
[[nodiscard]] CoefficientVector spd_solve(const CollocationMatrix& matrix,
                                          const CoefficientVector& rhs);

enum class InverseSource { direct, neumann };

struct InverseMatrix {
    Matrix entries;
    InverseSource source = InverseSource::direct;
    /// max |A A^-1 - I| over core rows and columns.
    double residual_norm = 0.0;
};

[[nodiscard]] const char* to_string(InverseSource source);

/// Max-norm of (A * inverse - I) restricted to the interior core.
[[nodiscard]] double core_residual(const CollocationMatrix& matrix, const Matrix& inverse,
                                   int margin);

/// Full inverse from one factorization and solves against every unit vector.
/// margin < 0 selects the window's default margin for the residual.
[[nodiscard]] InverseMatrix dense_invert(const CollocationMatrix& matrix, int margin = -1);

struct SpectralDiagnostics {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
};

/// Extremal eigenvalues of the symmetric matrix and their ratio.
[[nodiscard]] SpectralDiagnostics spectral_diagnostics(const CollocationMatrix& matrix);

struct NeumannState {
    /// Spectral norm of R = I - A/||A||.
    double r_norm = 0.0;
    int terms_used = 0;
    /// r_norm^terms_used * ||A^-1||; bounds every entry of the truncation error.
    double remainder_bound = 0.0;
    double a_norm = 0.0;
    double a_inv_norm = 0.0;
    bool convergent = false;
};

inline constexpr double kNeumannDivergenceGap = 1e-12;

/// Partial sum ||A||^-1 sum_{j < n_terms} R^j of the Neumann series.
[[nodiscard]] std::pair<InverseMatrix, NeumannState> neumann_inverse(
    const CollocationMatrix& matrix, int n_terms, int margin = -1);

/// Comma-separated rows at 17 significant digits, no header.
[[nodiscard]] std::string format_matrix_csv(const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

}  // namespace imq
