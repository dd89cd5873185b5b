// Truncated matrix realizations of the three ladder algebras used by the
// model: the oscillator algebra {a, a†, N}, the su(1,1) positive discrete
// series labelled by a Bargmann index k, and the spin-j representation of
// su(2). All matrices are written in the number basis, ordered by the L3
// eigenvalue offset n = 0, 1, ...
//
//   oscillator:  a|n> = √n |n-1>,            a†|n> = √(n+1) |n+1>,  L3 = a†a
//   su(1,1):     K-|k,n> = √(n(2k+n-1)) |k,n-1>,
//                K+|k,n> = √((n+1)(2k+n)) |k,n+1>,   K3|k,n> = (k+n)|k,n>
//   su(2):       J-|j,n> = √(n(2j-n+1)) |j,n-1>,     J3|j,n> = (-j+n)|j,n>
//
// For su(2) the representation is finite (dim = 2j+1) and exact. For the
// other two the truncation necessarily breaks the commutation relations in
// the last row/column, so operator identities are certified on the interior
// block only.

#pragma once

#include <cmath>
#include <stdexcept>

#include "qrabi/core.hpp"

namespace qrabi {

enum class AlgebraKind { Oscillator, SU11, SU2 };

struct Algebra {
    AlgebraKind kind = AlgebraKind::Oscillator;
    double bargmann_k = 0.0; // su(1,1) only, > 0
    double spin_j = 0.0;     // su(2) only, half-integer >= 1/2

    static Algebra oscillator() { return {AlgebraKind::Oscillator, 0.0, 0.0}; }

    static Algebra su11(double k) {
        if (k <= 0.0)
            throw std::invalid_argument("Algebra::su11: Bargmann index must be positive");
        return {AlgebraKind::SU11, k, 0.0};
    }

    static Algebra su2(double j) {
        const double twoj = 2.0 * j;
        if (j < 0.5 || std::abs(twoj - std::round(twoj)) > 1e-12)
            throw std::invalid_argument("Algebra::su2: spin must be a half-integer >= 1/2");
        return {AlgebraKind::SU2, 0.0, j};
    }

    // su(2) representation dimension 2j+1; meaningless for the other kinds.
    int su2_dim() const { return static_cast<int>(std::lround(2.0 * spin_j)) + 1; }
};

struct LadderSet {
    Matrix l_plus;  // raising operator
    Matrix l_minus; // lowering operator, adjoint of l_plus
    Matrix l3;      // diagonal generator
    Algebra algebra;
    int dim = 0;
};

inline LadderSet ladder_ops(const Algebra& algebra, int dim) {
    if (dim < 2)
        throw std::invalid_argument("ladder_ops: dim must be >= 2");

    LadderSet out;
    out.algebra = algebra;
    out.dim = dim;
    out.l_plus = Matrix::Zero(dim, dim);
    out.l3 = Matrix::Zero(dim, dim);

    switch (algebra.kind) {
    case AlgebraKind::Oscillator:
        for (int n = 0; n + 1 < dim; ++n)
            out.l_plus(n + 1, n) = std::sqrt(double(n + 1));
        for (int n = 0; n < dim; ++n)
            out.l3(n, n) = double(n);
        break;
    case AlgebraKind::SU11: {
        const double k = algebra.bargmann_k;
        if (k <= 0.0)
            throw std::invalid_argument("ladder_ops: su(1,1) requires Bargmann k > 0");
        for (int n = 0; n + 1 < dim; ++n)
            out.l_plus(n + 1, n) = std::sqrt(double(n + 1) * (2.0 * k + n));
        for (int n = 0; n < dim; ++n)
            out.l3(n, n) = k + n;
        break;
    }
    case AlgebraKind::SU2: {
        if (dim != algebra.su2_dim())
            throw std::invalid_argument("ladder_ops: su(2) requires dim == 2j+1");
        const double j = algebra.spin_j;
        for (int n = 0; n + 1 < dim; ++n)
            out.l_plus(n + 1, n) = std::sqrt(double(n + 1) * (2.0 * j - n));
        for (int n = 0; n < dim; ++n)
            out.l3(n, n) = -j + n;
        break;
    }
    }

    out.l_minus = out.l_plus.adjoint();
    return out;
}

} // namespace qrabi
