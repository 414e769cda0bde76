#include "imq/collocation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "imq/error.hpp"
#include "imq/textio.hpp"

namespace imq {

CollocationMatrix build_matrix(const KernelParams& params,
                               std::shared_ptr<const NodeWindow> window,
                               std::size_t max_nodes) {
    if (!window) throw ValidationError("collocation", "null node window");
    const std::size_t n = window->size();
    if (n > max_nodes)
        throw ValidationError("collocation", "window of " + std::to_string(n) +
                                                 " nodes exceeds the limit of " +
                                                 std::to_string(max_nodes));
    const auto xs = window->positions();
    Matrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        a(j, j) = imq_eval(params, 0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
            const double v = imq_eval(params, xs[i] - xs[j]);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return CollocationMatrix(std::move(a), params, std::move(window));
}

CollocationMatrix build_matrix(const KernelParams& params, NodeWindow window,
                               std::size_t max_nodes) {
    return build_matrix(params, std::make_shared<const NodeWindow>(std::move(window)), max_nodes);
}

CholeskyFactor::CholeskyFactor(const Matrix& spd) : lower_(spd.rows(), spd.cols()) {
    if (spd.rows() != spd.cols())
        throw ValidationError("collocation", "Cholesky needs a square matrix");
    const Eigen::Index n = spd.rows();
    lower_.setZero();
    // Left-looking column algorithm on the lower triangle.
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = spd(j, j);
        if (j > 0) pivot -= lower_.row(j).head(j).squaredNorm();
        if (!(pivot > 0.0) || !std::isfinite(pivot))
            throw NumericalError("collocation", "matrix not numerically positive definite (pivot " +
                                                    std::to_string(j) + " = " +
                                                    format_real(pivot) + ")");
        const double diag = std::sqrt(pivot);
        lower_(j, j) = diag;
        const Eigen::Index below = n - j - 1;
        if (below == 0) continue;
        auto column = lower_.col(j).tail(below);
        column = spd.col(j).tail(below);
        if (j > 0)
            column.noalias() -= lower_.bottomLeftCorner(below, j) * lower_.row(j).head(j).transpose();
        column /= diag;
    }
}

CoefficientVector CholeskyFactor::solve(const CoefficientVector& rhs) const {
    if (rhs.size() != lower_.rows())
        throw ValidationError("collocation", "right-hand side has length " +
                                                 std::to_string(rhs.size()) + ", expected " +
                                                 std::to_string(lower_.rows()));
    CoefficientVector x = rhs;
    lower_.triangularView<Eigen::Lower>().solveInPlace(x);
    lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

Matrix CholeskyFactor::solve(const Matrix& rhs) const {
    if (rhs.rows() != lower_.rows())
        throw ValidationError("collocation", "right-hand side row count mismatch");
    Matrix x = rhs;
    lower_.triangularView<Eigen::Lower>().solveInPlace(x);
    lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

CoefficientVector spd_solve(const CollocationMatrix& matrix, const CoefficientVector& rhs) {
    if (!rhs.allFinite()) throw ValidationError("collocation", "right-hand side is not finite");
    return CholeskyFactor(matrix.entries()).solve(rhs);
}

const char* to_string(InverseSource source) {
    return source == InverseSource::direct ? "direct" : "neumann";
}

double core_residual(const CollocationMatrix& matrix, const Matrix& inverse, int margin) {
    const auto [lo, hi] = matrix.window().core_range(margin);
    const auto len = static_cast<Eigen::Index>(hi - lo + 1);
    const auto start = static_cast<Eigen::Index>(lo);
    Matrix product = matrix.entries().middleRows(start, len) * inverse.middleCols(start, len);
    // product is (core rows) x (core cols) of A * inverse
    product.diagonal().array() -= 1.0;
    return product.cwiseAbs().maxCoeff();
}

namespace {

int resolve_margin(const CollocationMatrix& matrix, int margin) {
    return margin < 0 ? matrix.window().default_margin() : margin;
}

}  // namespace

InverseMatrix dense_invert(const CollocationMatrix& matrix, int margin) {
    const CholeskyFactor factor(matrix.entries());
    const auto n = static_cast<Eigen::Index>(matrix.size());
    InverseMatrix inv;
    inv.entries = factor.solve(Matrix(Matrix::Identity(n, n)));
    inv.source = InverseSource::direct;
    inv.residual_norm = core_residual(matrix, inv.entries, resolve_margin(matrix, margin));
    return inv;
}

SpectralDiagnostics spectral_diagnostics(const CollocationMatrix& matrix) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix.entries(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("collocation", "symmetric eigenvalue iteration did not converge");
    const auto& ev = solver.eigenvalues();  // ascending
    SpectralDiagnostics d;
    d.lambda_min = ev(0);
    d.lambda_max = ev(ev.size() - 1);
    d.cond = d.lambda_min > 0.0 ? d.lambda_max / d.lambda_min
                                : std::numeric_limits<double>::infinity();
    return d;
}

std::pair<InverseMatrix, NeumannState> neumann_inverse(const CollocationMatrix& matrix,
                                                       int n_terms, int margin) {
    if (n_terms < 1) throw ValidationError("collocation", "n_terms must be >= 1");
    const SpectralDiagnostics spec = spectral_diagnostics(matrix);
    if (!(spec.lambda_max > 0.0))
        throw NumericalError("collocation", "largest eigenvalue is not positive");

    NeumannState state;
    state.a_norm = spec.lambda_max;
    // R = I - A/||A|| has spectrum 1 - lambda_i/lambda_max, in [0, 1 - lambda_min/lambda_max].
    state.r_norm = std::abs(1.0 - spec.lambda_min / spec.lambda_max);
    state.a_inv_norm = spec.lambda_min > 0.0 ? 1.0 / spec.lambda_min
                                             : std::numeric_limits<double>::infinity();
    state.terms_used = n_terms;
    state.convergent = state.r_norm < 1.0 - kNeumannDivergenceGap;
    state.remainder_bound = std::pow(state.r_norm, n_terms) * state.a_inv_norm;

    const auto n = static_cast<Eigen::Index>(matrix.size());
    const Matrix identity = Matrix::Identity(n, n);
    const Matrix r = identity - matrix.entries() / state.a_norm;
    // Horner: S <- I + R S, starting from S = I, gives sum_{j < n_terms} R^j.
    Matrix partial = identity;
    for (int t = 1; t < n_terms; ++t) {
        Matrix next = r * partial;
        next += identity;
        partial.swap(next);
    }

    InverseMatrix inv;
    inv.entries = partial / state.a_norm;
    inv.source = InverseSource::neumann;
    inv.residual_norm = core_residual(matrix, inv.entries, resolve_margin(matrix, margin));
    return {std::move(inv), state};
}

std::string format_matrix_csv(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ",";
            out += format_real(m(i, j));
        }
        out += "\n";
    }
    return out;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    write_text_file(path, format_matrix_csv(m));
}

}  // namespace imq
