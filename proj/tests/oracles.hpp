#pragma once

// Test-only reference computations, independent of the library's numerics:
// exact rational arithmetic for small hand-checkable systems and naive
// triple-loop products.

#include <boost/rational.hpp>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Q = boost::rational<long long>;
using QMatrix = std::vector<std::vector<Q>>;

inline double to_double(const Q& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// (alpha2 + t^2)^-k with alpha2 = alpha^2 given exactly.
inline Q imq(const Q& alpha2, int k, const Q& t) {
    Q base = alpha2 + t * t;
    Q p = 1;
    for (int i = 0; i < k; ++i) p *= base;
    return Q(1) / p;
}

inline QMatrix collocation(const std::vector<Q>& xs, const Q& alpha2, int k) {
    QMatrix a(xs.size(), std::vector<Q>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) a[i][j] = imq(alpha2, k, xs[i] - xs[j]);
    return a;
}

// Gauss-Jordan elimination with exact arithmetic.
inline QMatrix inverse(QMatrix a) {
    const std::size_t n = a.size();
    QMatrix inv(n, std::vector<Q>(n, Q(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == Q(0)) ++p;
        if (p == n) throw std::runtime_error("singular");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        const Q pivot = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= pivot;
            inv[c][j] /= pivot;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == Q(0)) continue;
            const Q f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

inline std::vector<Q> multiply(const QMatrix& a, const std::vector<Q>& v) {
    std::vector<Q> out(a.size(), Q(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

// Naive product of dense row-major double matrices.
inline std::vector<std::vector<double>> matmul(const std::vector<std::vector<double>>& a,
                                               const std::vector<std::vector<double>>& b) {
    const std::size_t n = a.size(), m = b.front().size(), inner = b.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t u = 0; u < inner; ++u) c[i][j] += a[i][u] * b[u][j];
    return c;
}

// Composite Simpson on [a, b] with an even number of panels.
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
    return s * h / 3.0;
}

}  // namespace oracle
