// Dense complex linear algebra helpers shared by the whole library:
// type aliases, checkable matrix predicates, Kronecker products and the
// matrix exponential.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace qrabi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Thrown when a numerical guard trips: parameter admissibility, truncation
// convergence, step-size limits, argument windows of the special functions.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a - a.adjoint().eval()) <= tol;
}

inline bool is_anti_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a + a.adjoint().eval()) <= tol;
}

inline bool is_unitary(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    Matrix g = a.adjoint() * a;
    g.diagonal().array() -= 1.0;
    return max_abs(g) <= tol;
}

// Kronecker product, atom factor first: (a ⊗ b)[i*p+k, j*q+l] = a(i,j) b(k,l).
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = decltype(typename DerivedA::Scalar{} * typename DerivedB::Scalar{});
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                              a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace detail {

template <typename MatrixType>
void check_exp_input(const MatrixType& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("matrix_exp: input must be square");
    if (!a.allFinite())
        throw std::invalid_argument("matrix_exp: input has non-finite entries");
}

} // namespace detail

// Scaling-and-squaring Pade exponential (Eigen implementation). Deterministic;
// anti-Hermitian input yields a unitary result to ~1e-13 for dims <= 256.
inline Matrix matrix_exp(const Matrix& a) {
    detail::check_exp_input(a);
    return a.exp();
}

inline RealMatrix matrix_exp(const RealMatrix& a) {
    detail::check_exp_input(a);
    return a.exp();
}

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd s;
    s << 0, 1, 1, 0;
    return s;
}

inline Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd s;
    s << 0, Complex(0, -1), Complex(0, 1), 0;
    return s;
}

inline Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd s;
    s << 1, 0, 0, -1;
    return s;
}

inline Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd s;
    s << 0, 1, 0, 0;
    return s;
}

inline Eigen::Matrix2cd sigma_minus() {
    Eigen::Matrix2cd s;
    s << 0, 0, 1, 0;
    return s;
}

// W = (1/sqrt2)[[1,1],[1,-1]], W = W^{-1}; diagonalizes sigma_x.
inline Eigen::Matrix2cd walsh_hadamard() {
    Eigen::Matrix2cd w;
    const double r = 1.0 / std::sqrt(2.0);
    w << r, r, r, -r;
    return w;
}

} // namespace qrabi
