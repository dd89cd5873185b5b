// Special functions: integer-order Bessel functions J_alpha, Laguerre
// polynomials, and the displacement-operator matrix element tables
// <<m| e^{x(L+ - L-)} |n>> that carry all level couplings of the model.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "qrabi/algebra.hpp"
#include "qrabi/core.hpp"

namespace qrabi {

inline constexpr double kBesselArgMax = 700.0;

namespace detail {

// Power series J_a(x) = sum_k (-1)^k (x/2)^{a+2k} / (k! (a+k)!) for a >= 0,
// 0 < x < 12. Worst-case cancellation at x ~ 12 keeps the absolute error
// comfortably below 1e-12.
inline double bessel_j_series(int a, double x) {
    const double h = 0.5 * x;
    double t = (a == 0) ? 1.0 : std::exp(a * std::log(h) - std::lgamma(a + 1.0));
    double sum = t;
    double peak = std::abs(t);
    const double q = h * h;
    for (int k = 0; k < 400; ++k) {
        t *= -q / (double(k + 1) * double(k + 1 + a));
        sum += t;
        peak = std::max(peak, std::abs(t));
        if (std::abs(t) < 1e-17 * peak + 1e-300) break;
    }
    return sum;
}

// Miller downward recurrence for J_a(x), a >= 0, x >= 12. The sequence is
// normalized with J_0^2 + 2 sum_{k>=1} J_k^2 = 1; the overall sign is fixed
// by the companion identity J_0 + 2 J_2 + 2 J_4 + ... = 1.
inline double bessel_j_miller(int a, double x) {
    const int top = std::max(a, int(x)) +
                    int(std::sqrt(40.0 * std::max(double(a), x))) + 20;
    double above = 0.0;  // J_{k+1}, unnormalized
    double cur = 1e-30;  // J_k, starting at k = top
    double res = (a == top) ? cur : 0.0;
    double sum_sq = 2.0 * cur * cur;
    double alt = (top % 2 == 0) ? 2.0 * cur : 0.0;
    for (int k = top; k >= 1; --k) {
        const double next = 2.0 * k / x * cur - above; // J_{k-1}
        above = cur;
        cur = next;
        const int m = k - 1;
        if (m == a) res = cur;
        sum_sq += (m == 0 ? 1.0 : 2.0) * cur * cur;
        if (m == 0)
            alt += cur;
        else if (m % 2 == 0)
            alt += 2.0 * cur;
        if (std::abs(cur) > 1e140) {
            cur *= 1e-140;
            above *= 1e-140;
            res *= 1e-140;
            alt *= 1e-140;
            sum_sq *= 1e-280;
        }
    }
    const double norm = std::sqrt(sum_sq) * (alt < 0.0 ? -1.0 : 1.0);
    return res / norm;
}

} // namespace detail

// J_alpha(x) for integer alpha, |x| <= 700, absolute error <= 1e-10.
// Reflections J_{-a}(x) = (-1)^a J_a(x) = J_a(-x) hold exactly in structure.
inline double bessel_j(int alpha, double x) {
    if (!(std::abs(x) <= kBesselArgMax))
        throw NumericsError("bessel_j: |x| > 700 outside supported window");
    double sign = 1.0;
    if (alpha < 0) {
        alpha = -alpha;
        if (alpha & 1) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (alpha & 1) sign = -sign;
    }
    if (x == 0.0) return alpha == 0 ? 1.0 : 0.0;
    const double v = (x < 12.0) ? detail::bessel_j_series(alpha, x)
                                : detail::bessel_j_miller(alpha, x);
    return sign * v;
}

// Laguerre polynomial L_n(y) by the three-term recurrence
// (k+1) L_{k+1} = (2k+1-y) L_k - k L_{k-1}.
inline double laguerre(int n, double y) {
    if (n < 0 || n > 200)
        throw std::invalid_argument("laguerre: order must be in [0, 200]");
    if (!std::isfinite(y))
        throw std::invalid_argument("laguerre: argument must be finite");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 - y;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

// Table of <<m| e^{x(L+ - L-)} |n>>. The generator is real antisymmetric, so
// the exponential is real orthogonal; entries are stored as reals. Truncation
// corrupts entries near the edge for the infinite-dimensional algebras, so a
// dim-doubling check records the largest leading block ("usable") whose
// entries are converged to 1e-8.
struct MatrixElementTable {
    Algebra algebra;
    double x = 0.0;
    int dim = 0;
    RealMatrix values;
    int usable = 0; // entries with max(m,n) < usable passed the convergence check

    double element(int m, int n) const {
        if (m < 0 || n < 0 || m >= dim || n >= dim)
            throw std::invalid_argument("MatrixElementTable: index out of range");
        if (m >= usable || n >= usable)
            throw NumericsError("MatrixElementTable: entry (" + std::to_string(m) + "," +
                                std::to_string(n) + ") not converged at dim " +
                                std::to_string(dim) + "; increase dim");
        return values(m, n);
    }
};

namespace detail {

inline RealMatrix displacement_matrix(const Algebra& algebra, double x, int dim) {
    const LadderSet l = ladder_ops(algebra, dim);
    const RealMatrix gen = x * (l.l_plus - l.l_minus).real();
    return matrix_exp(gen);
}

} // namespace detail

inline MatrixElementTable displacement_elements(const Algebra& algebra, double x, int dim,
                                                bool check_convergence = true) {
    MatrixElementTable table;
    table.algebra = algebra;
    table.x = x;
    table.dim = dim;
    table.values = detail::displacement_matrix(algebra, x, dim);

    if (algebra.kind == AlgebraKind::SU2 || !check_convergence) {
        // su(2) is finite-dimensional and exact; otherwise the caller opted out.
        table.usable = dim;
        return table;
    }

    const RealMatrix doubled = detail::displacement_matrix(algebra, x, 2 * dim);
    const RealMatrix diff = (table.values - doubled.topLeftCorner(dim, dim)).cwiseAbs();
    int usable = dim;
    while (usable > 0 && diff.topLeftCorner(usable, usable).maxCoeff() > 1e-8)
        --usable;
    if (usable == 0)
        throw NumericsError("displacement_elements: no entry converged at dim " +
                            std::to_string(dim));
    table.usable = usable;
    return table;
}

} // namespace qrabi
