#include <cmath>
#include <random>

#include "doctest.h"
#include "imq/error.hpp"
#include "imq/kernel.hpp"
#include "oracles.hpp"

using imq::KernelParams;
using oracle::Q;

TEST_CASE("imq_eval reference values") {
    CHECK(imq::imq_eval(KernelParams(1.0, 1), 0.0) == 1.0);
    CHECK(imq::imq_eval(KernelParams(1.0, 1), 1.0) == 0.5);
    CHECK(imq::imq_eval(KernelParams(1.0, 2), 2.0) == doctest::Approx(1.0 / 25.0).epsilon(1e-15));
    // phi(0) = alpha^-2k
    CHECK(imq::imq_eval(KernelParams(2.0, 3), 0.0) == doctest::Approx(std::pow(2.0, -6)));
}

TEST_CASE("imq_eval matches pow for several orders") {
    for (int k = 1; k <= 7; ++k) {
        const KernelParams p(1.7, k);
        for (double t : {0.0, 0.3, 1.0, 4.5, 100.0})
            CHECK(imq::imq_eval(p, t) ==
                  doctest::Approx(std::pow(1.7 * 1.7 + t * t, -k)).epsilon(1e-13));
    }
}

TEST_CASE("kernel params reject invalid shape and order") {
    CHECK_THROWS_AS(KernelParams(0.0, 1), imq::ValidationError);
    CHECK_THROWS_AS(KernelParams(-1.0, 1), imq::ValidationError);
    CHECK_THROWS_AS(KernelParams(std::nan(""), 1), imq::ValidationError);
    CHECK_THROWS_AS(KernelParams(1.0, 0), imq::ValidationError);
}

TEST_CASE("imq_eval is even and strictly decreasing in |t|") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> alpha(0.1, 5.0), t(0.0, 50.0);
    std::uniform_int_distribution<int> order(1, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        const KernelParams p(alpha(rng), order(rng));
        double t1 = t(rng), t2 = t(rng);
        if (t1 == t2) continue;
        if (t1 > t2) std::swap(t1, t2);
        CHECK(imq::imq_eval(p, t1) == imq::imq_eval(p, -t1));
        CHECK(imq::imq_eval(p, t1) > imq::imq_eval(p, t2));
        CHECK(imq::imq_eval(p, t2) > 0.0);
    }
}

TEST_CASE("partial fraction hand cases reproduce the exact rationals") {
    struct Case {
        int M, j;
        Q expected;
    };
    for (const Case c : {Case{2, 1, Q(1, 4)}, Case{2, 0, Q(1, 5)}, Case{4, 1, Q(1, 20)}}) {
        // oracle: both sides in exact arithmetic with alpha = 1
        const Q a2 = 1;
        const Q lhs = Q(1) / ((a2 + c.j * c.j) * (a2 + (c.M - c.j) * (c.M - c.j)));
        const Q rhs = (Q(2 * c.j, c.M) + 1) / (a2 + c.j * c.j) / (4 * a2 + c.M * c.M) +
                      (Q(3) - Q(2 * c.j, c.M)) / (a2 + (c.M - c.j) * (c.M - c.j)) / (4 * a2 + c.M * c.M);
        REQUIRE(lhs == c.expected);
        REQUIRE(rhs == c.expected);

        const auto sides = imq::partial_fraction_split(1.0, c.M, c.j);
        CHECK(sides.lhs == oracle::to_double(c.expected));
        CHECK(sides.rhs == oracle::to_double(c.expected));
    }
}

TEST_CASE("partial fraction identity holds over random admissible inputs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> alpha(0.5, 5.0);
    std::uniform_int_distribution<int> Mdist(1, 100);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int M = Mdist(rng);
        const int j = std::uniform_int_distribution<int>(0, M)(rng);
        const auto s = imq::partial_fraction_split(alpha(rng), M, j);
        worst = std::max(worst, std::abs(s.lhs - s.rhs) / s.lhs);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("partial fraction numerators recombine to 4a^2 + M^2 exactly") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(1, 50), den(1, 12), Mdist(1, 100);
    for (int trial = 0; trial < 500; ++trial) {
        const Q a2 = Q(num(rng), den(rng));
        const int M = Mdist(rng);
        const int j = std::uniform_int_distribution<int>(0, M)(rng);
        const Q combined = (Q(2 * j, M) + 1) * (a2 + (M - j) * (M - j)) +
                           (Q(3) - Q(2 * j, M)) * (a2 + j * j);
        CHECK(combined == 4 * a2 + M * M);
    }
}

TEST_CASE("partial fraction rejects M = 0 and j outside [0, M]") {
    CHECK_THROWS_AS((void)imq::partial_fraction_split(1.0, 0, 0), imq::ValidationError);
    CHECK_THROWS_AS((void)imq::partial_fraction_split(1.0, 3, 4), imq::ValidationError);
    CHECK_THROWS_AS((void)imq::partial_fraction_split(1.0, 3, -1), imq::ValidationError);
    CHECK_NOTHROW((void)imq::partial_fraction_split(1.0, 3, 3));
}

TEST_CASE("tail integral agrees with quadrature") {
    for (int k = 1; k <= 4; ++k) {
        for (double alpha : {0.5, 1.0, 2.5}) {
            const KernelParams p(alpha, k);
            for (double a : {0.0, 0.7, 3.0}) {
                // [a, inf) mapped to u in (0, 1] via t = a + (1-u)/u
                const auto integrand = [&](double u) {
                    if (u <= 0.0) return k == 1 ? 1.0 : 0.0;  // limit of phi(t) t^2
                    const double t = a + (1.0 - u) / u;
                    return imq::imq_eval(p, t) / (u * u);
                };
                const double reference = oracle::simpson(integrand, 0.0, 1.0, 20000);
                CHECK(imq::imq_tail_integral(p, a) == doctest::Approx(reference).epsilon(1e-8));
            }
        }
    }
    CHECK(imq::imq_tail_integral(KernelParams(1.0, 1), 0.0) == doctest::Approx(M_PI / 2));
}
