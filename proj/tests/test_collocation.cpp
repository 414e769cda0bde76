#include <cmath>
#include <random>

#include "doctest.h"
#include "imq/collocation.hpp"
#include "imq/error.hpp"
#include "oracles.hpp"

using imq::KernelParams;
using oracle::Q;

namespace {

imq::CollocationMatrix two_node() {
    return imq::build_matrix(KernelParams(1.0, 1), imq::NodeWindow({0.0, 1.0}));
}

imq::CoefficientVector unit(std::size_t n, std::size_t at) {
    imq::CoefficientVector e = imq::CoefficientVector::Zero(static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(at)) = 1.0;
    return e;
}

double relative_asymmetry(const imq::Matrix& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("build_matrix on the three-node lattice") {
    const auto A = imq::build_matrix(KernelParams(1.0, 1), imq::lattice_window(1));
    imq::Matrix expected(3, 3);
    expected << 1, 0.5, 0.2, 0.5, 1, 0.5, 0.2, 0.5, 1;
    CHECK((A.entries() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("collocation matrix is symmetric with constant diagonal") {
    const KernelParams p(1.3, 2);
    const auto A = imq::build_matrix(p, imq::jittered_window(20, 0.3, 9));
    const auto& a = A.entries();
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < a.rows(); ++i) CHECK(a(i, i) == imq::imq_eval(p, 0.0));
    const auto xs = A.window().positions();
    CHECK(a(3, 17) == imq::imq_eval(p, xs[3] - xs[17]));
}

TEST_CASE("lattice collocation matrix is Toeplitz") {
    const auto A = imq::build_matrix(KernelParams(2.0, 1), imq::lattice_window(10));
    const auto& a = A.entries();
    for (Eigen::Index i = 1; i < a.rows(); ++i)
        for (Eigen::Index j = 1; j < a.cols(); ++j) CHECK(a(i, j) == a(i - 1, j - 1));
}

TEST_CASE("size guard") {
    CHECK_THROWS_AS((void)imq::build_matrix(KernelParams(1.0, 1), imq::lattice_window(3), 6),
                    imq::ValidationError);
    CHECK_NOTHROW((void)imq::build_matrix(KernelParams(1.0, 1), imq::lattice_window(3), 7));
}

TEST_CASE("spd_solve reproduces the hand-derived systems") {
    const auto a2 = imq::spd_solve(two_node(), unit(2, 0));
    CHECK(std::abs(a2(0) - 4.0 / 3.0) <= 1e-12);
    CHECK(std::abs(a2(1) + 2.0 / 3.0) <= 1e-12);

    // oracle: exact elimination on the 3-node lattice, alpha = k = 1
    const auto inv = oracle::inverse(oracle::collocation({Q(-1), Q(0), Q(1)}, Q(1), 1));
    REQUIRE(inv[0][1] == Q(-5, 7));
    REQUIRE(inv[1][1] == Q(12, 7));
    REQUIRE(inv[2][1] == Q(-5, 7));

    const auto A3 = imq::build_matrix(KernelParams(1.0, 1), imq::lattice_window(1));
    const auto a3 = imq::spd_solve(A3, unit(3, 1));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a3(i) - oracle::to_double(inv[i][1])) <= 1e-12);

    const auto zero = imq::spd_solve(A3, imq::CoefficientVector::Zero(3));
    CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spd_solve residual on random data") {
    std::mt19937_64 rng(4);
    for (const auto& [alpha, k] : {std::pair{1.0, 1}, std::pair{2.0, 2}, std::pair{0.7, 3}}) {
        const auto A = imq::build_matrix(KernelParams(alpha, k), imq::jittered_window(60, 0.25, rng()));
        imq::CoefficientVector rhs(A.size());
        std::uniform_real_distribution<double> u(-1, 1);
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs(i) = u(rng);
        const auto a = imq::spd_solve(A, rhs);
        CHECK((A.entries() * a - rhs).cwiseAbs().maxCoeff() <= 1e-8 * rhs.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("factorization failure names the pivot") {
    imq::Matrix indefinite(3, 3);
    indefinite << 1, 0, 0, 0, 1, 2, 0, 2, 1;
    try {
        imq::CholeskyFactor f(indefinite);
        FAIL("expected failure");
    } catch (const imq::NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("not numerically positive definite") != std::string::npos);
        CHECK(msg.find("pivot 2") != std::string::npos);
    }
    CHECK_THROWS_AS((void)imq::spd_solve(two_node(), imq::CoefficientVector::Zero(3)),
                    imq::ValidationError);
}

TEST_CASE("dense_invert small cases") {
    const KernelParams p(1.5, 2);
    const auto one = imq::dense_invert(imq::build_matrix(p, imq::lattice_window(0)));
    CHECK(one.entries(0, 0) == doctest::Approx(std::pow(1.5, 4)).epsilon(1e-15));
    CHECK(one.source == imq::InverseSource::direct);

    const auto two = imq::dense_invert(two_node());
    imq::Matrix expected(2, 2);
    expected << 4.0 / 3, -2.0 / 3, -2.0 / 3, 4.0 / 3;
    CHECK((two.entries - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(two.residual_norm <= 1e-14);
}

TEST_CASE("dense inverse is symmetric, accurate, and agrees with solves") {
    std::mt19937_64 rng(8);
    for (const auto& [alpha, k] : {std::pair{1.0, 1}, std::pair{2.0, 1}, std::pair{2.0, 2}}) {
        const auto A = imq::build_matrix(KernelParams(alpha, k), imq::jittered_window(50, 0.25, rng()));
        const auto inv = imq::dense_invert(A);
        CHECK(inv.residual_norm <= 1e-8);
        CHECK(relative_asymmetry(inv.entries) <= 1e-10);

        imq::CoefficientVector rhs(A.size());
        std::uniform_real_distribution<double> u(-1, 1);
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs(i) = u(rng);
        CHECK((inv.entries * rhs - imq::spd_solve(A, rhs)).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("lattice inverse is Toeplitz on the core") {
    const auto A = imq::build_matrix(KernelParams(2.0, 2), imq::lattice_window(100));
    const auto inv = imq::dense_invert(A);
    const auto [lo, hi] = A.window().core_range(A.window().default_margin());
    const double scale = inv.entries.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (auto i = static_cast<Eigen::Index>(lo) + 1; i <= static_cast<Eigen::Index>(hi); ++i)
        for (auto j = static_cast<Eigen::Index>(lo) + 1; j <= static_cast<Eigen::Index>(hi); ++j)
            worst = std::max(worst, std::abs(inv.entries(i, j) - inv.entries(i - 1, j - 1)));
    CHECK(worst / scale <= 1e-6);
}

TEST_CASE("spectral diagnostics") {
    const auto one = imq::spectral_diagnostics(imq::build_matrix(KernelParams(1.0, 1), imq::lattice_window(0)));
    CHECK(one.lambda_min == doctest::Approx(1.0));
    CHECK(one.lambda_max == doctest::Approx(1.0));
    CHECK(one.cond == doctest::Approx(1.0));

    // eigenvalues of [[1, 1/2], [1/2, 1]] are 1 -+ 1/2
    const auto two = imq::spectral_diagnostics(two_node());
    CHECK(two.lambda_min == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.lambda_max == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(two.cond == doctest::Approx(3.0).epsilon(1e-12));

    for (double alpha : {0.5, 1.0, 2.0, 3.0})
        for (int k : {1, 2, 3}) {
            const auto d = imq::spectral_diagnostics(
                imq::build_matrix(KernelParams(alpha, k), imq::jittered_window(40, 0.25, 17)));
            CHECK(d.lambda_min > 0.0);
            CHECK(d.lambda_max >= d.lambda_min);
        }
}

TEST_CASE("Neumann series on tiny systems") {
    const auto A1 = imq::build_matrix(KernelParams(2.0, 1), imq::lattice_window(0));
    const auto [inv1, st1] = imq::neumann_inverse(A1, 1);
    CHECK(st1.r_norm == doctest::Approx(0.0));
    CHECK(inv1.entries(0, 0) == doctest::Approx(4.0));
    CHECK(inv1.source == imq::InverseSource::neumann);

    const auto [inv2, st2] = imq::neumann_inverse(two_node(), 60);
    imq::Matrix expected(2, 2);
    expected << 4.0 / 3, -2.0 / 3, -2.0 / 3, 4.0 / 3;
    CHECK((inv2.entries - expected).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(st2.r_norm == doctest::Approx(2.0 / 3.0));
    CHECK(st2.convergent);
    CHECK_THROWS_AS((void)imq::neumann_inverse(two_node(), 0), imq::ValidationError);
}

TEST_CASE("Neumann error is within the geometric remainder and non-increasing") {
    const auto A = imq::build_matrix(KernelParams(1.0, 1), imq::lattice_window(20));
    const auto direct = imq::dense_invert(A);
    double previous = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 40; ++n) {
        const auto [partial, state] = imq::neumann_inverse(A, n);
        const double err = (partial.entries - direct.entries).cwiseAbs().maxCoeff();
        CHECK(err <= state.remainder_bound);
        CHECK(err <= previous + 1e-12);
        previous = err;
    }
}

TEST_CASE("flat kernels flag a non-convergent Neumann series") {
    const auto A = imq::build_matrix(KernelParams(12.0, 1), imq::lattice_window(100));
    const auto [partial, state] = imq::neumann_inverse(A, 5);
    CHECK_FALSE(state.convergent);
    CHECK(state.r_norm >= 1.0 - imq::kNeumannDivergenceGap);
}

TEST_CASE("matrix CSV uses 17 significant digits") {
    const std::string csv = imq::format_matrix_csv(two_node().entries());
    CHECK(csv == "1,0.5\n0.5,1\n");
    imq::Matrix third(1, 1);
    third << 1.0 / 3.0;
    CHECK(imq::format_matrix_csv(third) == "0.33333333333333331\n");
}
