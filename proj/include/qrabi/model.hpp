// The driven atom-mode model and its dressed-frame solution.
//
// The Hamiltonian acts on C^2 (x) C^D:
//
//   H(t) = omega 1 (x) L3 + g1 sigma_x (x) (L+ + L-) + (delta/2) sigma_z (x) 1
//          + g2 cos(omega_e t + phi) sigma_x (x) 1
//
// With the delta term removed it is diagonalized exactly by dressed states
// |{lambda, n}> = |lambda> (x) e^{-(lambda x/2)(L+ - L-)} |n>, where |lambda>
// are the sigma_x eigenvectors and (Omega, x) depend on the ladder algebra.
// The closed-form propagator U0(t) of that part, the dressed-frame generator
// (delta/2) U0^dag (sigma_z (x) 1) U0 and its Bessel-series split, and the
// unitary equivalence with the sideband Hamiltonian used in trapped-ion
// experiments all live here.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "qrabi/algebra.hpp"
#include "qrabi/core.hpp"
#include "qrabi/specfun.hpp"

namespace qrabi {

struct ModelParams {
    Algebra algebra;
    double omega = 1.0;   // field mode frequency
    double g1 = 0.0;      // atom-mode coupling
    double g2 = 0.0;      // external drive coupling
    double omega_e = 1.0; // drive frequency
    double phi = 0.0;     // drive phase
    double delta = 0.0;   // bare level splitting
    int dim = 2;          // ladder truncation

    double gamma() const { return 2.0 * g2 / omega_e; }

    // Strong-coupling diagnostic: the dressed-frame treatment assumes
    // delta << g1. Reported, never enforced.
    double delta_to_g1() const {
        return g1 > 0.0 ? std::abs(delta) / g1
                        : std::numeric_limits<double>::infinity();
    }

    void validate() const {
        if (omega <= 0.0) throw std::invalid_argument("ModelParams: omega must be > 0");
        if (omega_e <= 0.0) throw std::invalid_argument("ModelParams: omega_e must be > 0");
        if (g1 < 0.0 || g2 < 0.0)
            throw std::invalid_argument("ModelParams: couplings must be >= 0");
        if (dim < 2) throw std::invalid_argument("ModelParams: dim must be >= 2");
        if (algebra.kind == AlgebraKind::SU2 && dim != algebra.su2_dim())
            throw std::invalid_argument("ModelParams: su(2) requires dim == 2j+1");
        if (algebra.kind == AlgebraKind::SU11 && !(2.0 * g1 / omega < 1.0))
            throw NumericsError(
                "ModelParams: su(1,1) admissibility requires 2*g1/omega < 1 "
                "(got " + std::to_string(2.0 * g1 / omega) +
                "); Omega would be imaginary");
    }
};

struct FrameScale {
    double omega_big = 0.0; // Omega, dressed level spacing
    double x = 0.0;         // displacement parameter
};

inline FrameScale omega_x(const Algebra& algebra, double omega, double g1) {
    const double r = 2.0 * g1 / omega;
    switch (algebra.kind) {
    case AlgebraKind::Oscillator:
        return {omega, r};
    case AlgebraKind::SU11:
        if (!(r < 1.0))
            throw NumericsError("omega_x: su(1,1) requires 2*g1/omega < 1 (got " +
                                std::to_string(r) + "); Omega would be imaginary");
        return {omega * std::sqrt(1.0 - r * r), std::atanh(r)};
    case AlgebraKind::SU2:
        return {omega * std::sqrt(1.0 + r * r), std::atan(r)};
    }
    throw std::logic_error("omega_x: unreachable");
}

// Static part: omega 1 (x) L3 + g1 sigma_x (x) (L+ + L-) + (delta/2) sigma_z (x) 1.
inline Matrix hamiltonian_static(const ModelParams& p) {
    p.validate();
    const LadderSet l = ladder_ops(p.algebra, p.dim);
    const Matrix id = Matrix::Identity(p.dim, p.dim);
    Matrix h = kron(Eigen::Matrix2cd::Identity(), (p.omega * l.l3).eval());
    h += kron(pauli_x(), (p.g1 * (l.l_plus + l.l_minus)).eval());
    h += kron(pauli_z(), (0.5 * p.delta * id).eval());
    return h;
}

// Full Hamiltonian at time t; Hermitian by construction.
inline Matrix hamiltonian(const ModelParams& p, double t) {
    Matrix h = hamiltonian_static(p);
    const double c = p.g2 * std::cos(p.omega_e * t + p.phi);
    h += kron(pauli_x(), (c * Matrix::Identity(p.dim, p.dim)).eval());
    return h;
}

// Dressed eigenbasis of the model without the delta term. Column k of
// `states` is |{lambda, n}> with k = n for lambda = +1 and k = D + n for
// lambda = -1. Only n < interior is trustworthy; higher levels are the
// truncation buffer.
struct DressedFrame {
    Algebra algebra;
    int dim = 0;
    double omega_big = 0.0;
    double x = 0.0;
    double delta = 0.0;
    double gamma = 0.0;       // 2 g2 / omega_e at construction
    Matrix states;            // 2D x 2D unitary of dressed columns
    RealVector energies;      // E_n, static part of E_n(t)
    MatrixElementTable table; // <<m|e^{x(L+-L-)}|n>>
    Matrix sigma3_dressed;    // states^dag (sigma_z (x) 1) states, cached
    int interior = 0;

    int state_index(int lambda, int n) const {
        if (n < 0 || n >= dim || (lambda != 1 && lambda != -1))
            throw std::invalid_argument("DressedFrame: bad state label");
        return (lambda == 1 ? 0 : dim) + n;
    }

    // E_{Delta,n,lambda} = (delta/2) lambda <<n|e^{x(L+-L-)}|n>> J_0(Gamma),
    // optionally at a drive index other than the stored one.
    double e_delta(int n, int lambda, double gamma_override) const {
        if (n >= interior)
            throw NumericsError("DressedFrame: level " + std::to_string(n) +
                                " is outside the converged interior (" +
                                std::to_string(interior) + ")");
        return 0.5 * delta * lambda * table.element(n, n) * bessel_j(0, gamma_override);
    }

    double e_delta(int n, int lambda) const { return e_delta(n, lambda, gamma); }
};

inline DressedFrame dressed_frame(const ModelParams& p) {
    p.validate();
    DressedFrame f;
    f.algebra = p.algebra;
    f.dim = p.dim;
    f.delta = p.delta;
    f.gamma = p.gamma();
    const FrameScale s = omega_x(p.algebra, p.omega, p.g1);
    f.omega_big = s.omega_big;
    f.x = s.x;

    const LadderSet l = ladder_ops(p.algebra, p.dim);
    const RealMatrix gen = (l.l_plus - l.l_minus).real();
    const RealMatrix disp_plus = matrix_exp((-0.5 * s.x * gen).eval()); // e^{-(x/2)(L+-L-)}
    const RealMatrix disp_minus = disp_plus.transpose();                // e^{+(x/2)(L+-L-)}

    const double r = 1.0 / std::sqrt(2.0);
    f.states.resize(2 * p.dim, 2 * p.dim);
    f.states.topLeftCorner(p.dim, p.dim) = r * disp_plus;
    f.states.bottomLeftCorner(p.dim, p.dim) = r * disp_plus;
    f.states.topRightCorner(p.dim, p.dim) = r * disp_minus;
    f.states.bottomRightCorner(p.dim, p.dim) = -r * disp_minus;

    f.energies.resize(p.dim);
    for (int n = 0; n < p.dim; ++n) {
        switch (p.algebra.kind) {
        case AlgebraKind::Oscillator:
            f.energies(n) = s.omega_big * (n - p.g1 * p.g1 / (p.omega * p.omega));
            break;
        case AlgebraKind::SU11:
            f.energies(n) = s.omega_big * (p.algebra.bargmann_k + n);
            break;
        case AlgebraKind::SU2:
            f.energies(n) = s.omega_big * (-p.algebra.spin_j + n);
            break;
        }
    }

    f.table = displacement_elements(p.algebra, s.x, p.dim);
    const int buffer_interior =
        (p.algebra.kind == AlgebraKind::SU2) ? p.dim : p.dim / 2;
    f.interior = std::min(buffer_interior, f.table.usable);
    if (f.interior < 1)
        throw NumericsError("dressed_frame: no converged dressed level at dim " +
                            std::to_string(p.dim));

    f.sigma3_dressed =
        f.states.adjoint() * kron(pauli_z(), Matrix::Identity(p.dim, p.dim)) * f.states;
    return f;
}

// Free-function form of E_{Delta,n,lambda} using the drive index from params.
inline double e_delta(const DressedFrame& frame, const ModelParams& p, int n, int lambda) {
    return frame.e_delta(n, lambda, p.gamma());
}

// Phase angles theta_{lambda,n}(t) = t E_n + lambda (g2/omega_e) sin(omega_e t + phi),
// ordered like the dressed columns.
inline RealVector u0_angles(const ModelParams& p, const DressedFrame& f, double t) {
    const double wob = std::sin(p.omega_e * t + p.phi) * p.g2 / p.omega_e;
    RealVector th(2 * f.dim);
    for (int n = 0; n < f.dim; ++n) {
        th(n) = t * f.energies(n) + wob;
        th(f.dim + n) = t * f.energies(n) - wob;
    }
    return th;
}

// U0(t) = sum_{lambda,n} e^{-i theta_{lambda,n}(t)} |{lambda,n}><{lambda,n}|,
// exactly as printed: U0(0) != 1 when phi != 0, and the propagator taking
// psi(0) to psi(t) is U0(t) U0(0)^dag.
inline Matrix u0(const ModelParams& p, const DressedFrame& f, double t) {
    const RealVector th = u0_angles(p, f, t);
    const Vector phases =
        (Complex(0, -1) * th.cast<Complex>().array()).exp().matrix();
    return f.states * phases.asDiagonal() * f.states.adjoint();
}

// Dressed-frame generator (delta/2) U0^dag (sigma_z (x) 1) U0, expressed in the
// dressed basis: entry [(lambda,m),(mu,n)] = <{lambda,m}| ... |{mu,n}>.
inline Matrix dressed_generator(const ModelParams& p, const DressedFrame& f, double t) {
    const RealVector th = u0_angles(p, f, t);
    const Vector conj_phases =
        (Complex(0, 1) * th.cast<Complex>().array()).exp().matrix();
    return 0.5 * p.delta *
           (conj_phases.asDiagonal() * f.sigma3_dressed *
            conj_phases.conjugate().asDiagonal());
}

// Analytic form of the generator, split into the three pieces used by the
// perturbative treatment, with e^{2 i lambda Theta(t)} expanded in Bessel
// functions truncated at |alpha| <= alpha_max:
//   diag_static : n = m, alpha = 0 (the E_{Delta,n,lambda} part)
//   diag_osc    : n = m, alpha != 0
//   offdiag     : n != m, all alpha
struct GeneratorSplit {
    Matrix diag_static;
    Matrix diag_osc;
    Matrix offdiag;

    Matrix total() const { return diag_static + diag_osc + offdiag; }
};

inline GeneratorSplit dressed_generator_split(const ModelParams& p, const DressedFrame& f,
                                              double t, int alpha_max = 40) {
    const double gamma = p.gamma();
    // Tail bound through the sum rule J_0^2 + 2 sum J_alpha^2 = 1.
    double covered = bessel_j(0, gamma) * bessel_j(0, gamma);
    for (int a = 1; a <= alpha_max; ++a) {
        const double ja = bessel_j(a, gamma);
        covered += 2.0 * ja * ja;
    }
    if (1.0 - covered > 1e-12)
        throw NumericsError("dressed_generator_split: Bessel sum truncated at |alpha| <= " +
                            std::to_string(alpha_max) + " misses " +
                            std::to_string(1.0 - covered) + " of the weight");

    const int d = f.dim;
    GeneratorSplit out;
    out.diag_static = Matrix::Zero(2 * d, 2 * d);
    out.diag_osc = Matrix::Zero(2 * d, 2 * d);
    out.offdiag = Matrix::Zero(2 * d, 2 * d);

    // e^{2 i lambda Theta(t)} = sum_alpha J_alpha(lambda Gamma) e^{i alpha (omega_e t + phi)}
    Complex osc_plus[2] = {0.0, 0.0};  // lambda = +1: full sum, alpha != 0 sum
    Complex osc_minus[2] = {0.0, 0.0}; // lambda = -1
    for (int a = -alpha_max; a <= alpha_max; ++a) {
        const Complex e = std::exp(Complex(0, a * (p.omega_e * t + p.phi)));
        const Complex tp = bessel_j(a, gamma) * e;
        const Complex tm = bessel_j(a, -gamma) * e;
        osc_plus[0] += tp;
        osc_minus[0] += tm;
        if (a != 0) {
            osc_plus[1] += tp;
            osc_minus[1] += tm;
        }
    }
    const double j0 = bessel_j(0, gamma);
    const double half_delta = 0.5 * p.delta;

    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            // lambda = +1 rows couple to mu = -1 columns and vice versa
            const double el_plus = f.table.values(m, n);  // <<m|e^{+x(...)}|n>>
            const double el_minus = f.table.values(n, m); // <<m|e^{-x(...)}|n>>
            const int row_p = m, col_m = d + n;
            const int row_m = d + m, col_p = n;
            if (m == n) {
                out.diag_static(row_p, col_m) = half_delta * el_plus * j0;
                out.diag_static(row_m, col_p) = half_delta * el_minus * j0;
                out.diag_osc(row_p, col_m) = half_delta * el_plus * osc_plus[1];
                out.diag_osc(row_m, col_p) = half_delta * el_minus * osc_minus[1];
            } else {
                const Complex lvl = std::exp(Complex(0, t * f.omega_big * (m - n)));
                out.offdiag(row_p, col_m) = half_delta * lvl * el_plus * osc_plus[0];
                out.offdiag(row_m, col_p) = half_delta * lvl * el_minus * osc_minus[0];
            }
        }
    }
    return out;
}

// Cat combinations |{sigma, psi_n}> = (|{1,n}> + sigma |{-1,n}>)/sqrt2,
// columns ordered like the dressed ones (sigma = +1 block first).
struct CatBasis {
    Matrix vectors;
    int dim = 0;
};

inline CatBasis cat_basis(const DressedFrame& f) {
    const int d = f.dim;
    const double r = 1.0 / std::sqrt(2.0);
    Matrix mix(2 * d, 2 * d);
    mix.topLeftCorner(d, d) = r * Matrix::Identity(d, d);
    mix.bottomLeftCorner(d, d) = r * Matrix::Identity(d, d);
    mix.topRightCorner(d, d) = r * Matrix::Identity(d, d);
    mix.bottomRightCorner(d, d) = -r * Matrix::Identity(d, d);
    return {f.states * mix, d};
}

// Unitary equivalence between the exponential-coupling Hamiltonian
//   H = omega0 1 (x) a†a + g(sigma_+ (x) e^{i eta(a†+a)} + h.c.) + (delta/2) sigma_z (x) 1
// and the linear-coupling model, via
//   T(eta) = (sigma_+ (x) e^A + sigma_- (x) e^{-A}) (W (x) e^{-i(pi/2)N}),
//   A = i eta (a†+a)/2.
// Returns the max-norm of T†HT minus
//   omega0 eta^2/4 + omega0 1 (x) a†a + (omega0 eta/2) sigma_x (x) (a†+a)
//   + g sigma_z (x) 1 - (delta/2) sigma_x (x) 1
// over the interior block (field levels below dim minus an eta-dependent
// truncation buffer, on both rows and columns).
struct NistReport {
    double residual = 0.0;
    double constant_offset = 0.0; // omega0 eta^2 / 4
    int dim = 0;
    int interior = 0;
    double eta = 0.0;
};

inline NistReport nist_report(double omega0, double g, double delta, double eta, int dim) {
    if (eta < 0.0 || eta > 0.5)
        throw std::invalid_argument("nist_report: eta must be in [0, 0.5]");
    if (dim < 64) throw std::invalid_argument("nist_report: dim must be >= 64");

    const LadderSet l = ladder_ops(Algebra::oscillator(), dim);
    const Matrix id = Matrix::Identity(dim, dim);
    const Matrix quad = l.l_plus + l.l_minus; // a† + a
    const Matrix a_op = Complex(0, 0.5 * eta) * quad;
    const Matrix exp_a = matrix_exp(a_op);
    const Matrix exp_2a = matrix_exp((2.0 * a_op).eval());

    Matrix h = omega0 * kron(Eigen::Matrix2cd::Identity(), l.l3);
    h += g * (kron(sigma_plus(), exp_2a) + kron(sigma_minus(), exp_2a.adjoint().eval()));
    h += 0.5 * delta * kron(pauli_z(), id);

    Vector rot(dim);
    for (int n = 0; n < dim; ++n)
        rot(n) = std::exp(Complex(0, -0.5 * M_PI * n));
    const Matrix t_op = (kron(sigma_plus(), exp_a) + kron(sigma_minus(), exp_a.adjoint().eval())) *
                        kron(walsh_hadamard(), Matrix(rot.asDiagonal()));

    Matrix target = omega0 * kron(Eigen::Matrix2cd::Identity(), l.l3);
    target += 0.5 * omega0 * eta * kron(pauli_x(), quad);
    target += g * kron(pauli_z(), id);
    target -= 0.5 * delta * kron(pauli_x(), id);
    const double offset = 0.25 * omega0 * eta * eta;
    target += offset * Matrix::Identity(2 * dim, 2 * dim);

    const Matrix res = t_op.adjoint() * h * t_op - target;

    NistReport report;
    report.constant_offset = offset;
    report.dim = dim;
    report.eta = eta;
    const int buffer = std::max(2, int(std::ceil(3.0 * eta * std::sqrt(double(dim)))) + 1);
    report.interior = dim - buffer;
    double worst = 0.0;
    for (int br = 0; br < 2; ++br)
        for (int bc = 0; bc < 2; ++bc)
            worst = std::max(worst, max_abs(Matrix(res.block(br * dim, bc * dim,
                                                             report.interior, report.interior))));
    report.residual = worst;
    return report;
}

inline double nist_equivalence(double omega0, double g, double delta, double eta, int dim) {
    return nist_report(omega0, g, delta, eta, dim).residual;
}

} // namespace qrabi
