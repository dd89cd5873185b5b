// Resonance conditions, Rabi frequencies and the closed-form rotating-wave
// propagators for the one-qubit doublet and the four two-qubit coupling
// types. A resonance matches an integer multiple of the drive frequency
// against a dressed-level splitting; the splittings carry J_0(2 g2/omega_e),
// which makes every condition transcendental in omega_e.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qrabi/core.hpp"
#include "qrabi/model.hpp"
#include "qrabi/specfun.hpp"

namespace qrabi {

// The sign pair (lambda_m, lambda_n) of the dressed pair each family couples:
//   OneQubit     (n,+1) <-> (n,-1)     TwoPlusPlus   (m,+1) <-> (n,+1)
//   TwoMinusMinus (m,-1) <-> (n,-1)    TwoPlusMinus  (m,+1) <-> (n,-1)
//   TwoMinusPlus  (m,-1) <-> (n,+1)
enum class ResonanceFamily { OneQubit, TwoPlusPlus, TwoMinusMinus, TwoPlusMinus, TwoMinusPlus };

inline bool is_two_qubit(ResonanceFamily f) { return f != ResonanceFamily::OneQubit; }

inline std::pair<int, int> family_signs(ResonanceFamily f) {
    switch (f) {
    case ResonanceFamily::OneQubit: return {1, -1};
    case ResonanceFamily::TwoPlusPlus: return {1, 1};
    case ResonanceFamily::TwoMinusMinus: return {-1, -1};
    case ResonanceFamily::TwoPlusMinus: return {1, -1};
    case ResonanceFamily::TwoMinusPlus: return {-1, 1};
    }
    throw std::logic_error("family_signs: unreachable");
}

inline std::string family_name(ResonanceFamily f) {
    switch (f) {
    case ResonanceFamily::OneQubit: return "one-qubit";
    case ResonanceFamily::TwoPlusPlus: return "two-1";
    case ResonanceFamily::TwoMinusMinus: return "two-2";
    case ResonanceFamily::TwoPlusMinus: return "two-3";
    case ResonanceFamily::TwoMinusPlus: return "two-4";
    }
    throw std::logic_error("family_name: unreachable");
}

struct ResonanceSpec {
    ResonanceFamily family = ResonanceFamily::OneQubit;
    int alpha = 0;
    int m = 0; // unused for OneQubit
    int n = 0;
    double omega_e = 0.0;
    double residual = 0.0;
};

namespace detail {

inline void check_levels(ResonanceFamily family, const DressedFrame& frame, int alpha,
                         int m, int n) {
    if (n < 0 || n >= frame.interior)
        throw std::invalid_argument("resonance: level n outside converged interior");
    if (is_two_qubit(family)) {
        if (m < 0 || m >= n)
            throw std::invalid_argument("resonance: two-qubit families require 0 <= m < n");
    } else if (alpha == 0) {
        throw std::invalid_argument("resonance: one-qubit condition requires alpha != 0");
    }
}

} // namespace detail

// Left-hand side of the resonance condition at a trial drive frequency:
//   OneQubit: alpha w - 2 E_{Delta,n,-1}
//   two-qubit: alpha w + Omega (m-n) + E_{Delta,m,lm} - E_{Delta,n,ln}
// E_{Delta,.,.} depends on w through Gamma = 2 g2 / w.
inline double resonance_condition_value(ResonanceFamily family, const ModelParams& p,
                                        const DressedFrame& frame, int alpha, int m, int n,
                                        double omega_e) {
    if (omega_e <= 0.0)
        throw std::invalid_argument("resonance_condition_value: omega_e must be > 0");
    detail::check_levels(family, frame, alpha, m, n);
    const double gamma = 2.0 * p.g2 / omega_e;
    if (family == ResonanceFamily::OneQubit)
        return alpha * omega_e - 2.0 * frame.e_delta(n, -1, gamma);
    const auto [lm, ln] = family_signs(family);
    return alpha * omega_e + frame.omega_big * (m - n) + frame.e_delta(m, lm, gamma) -
           frame.e_delta(n, ln, gamma);
}

struct SolveWindow {
    double omega_min = 0.0; // 0 means "use the default 1e-3 * omega"
    double omega_max = 0.0; // 0 means "use the default 10 * omega"
    int grid = 10000;
};

// All roots of the resonance condition inside the window, ascending in
// omega_e, each bisected to 1e-12 relative. The scan runs on a grid uniform
// in 1/omega_e (hence uniform in Gamma), which resolves the J_0 ripple whose
// period is constant in Gamma. The window floor is clamped so that Gamma
// stays inside the Bessel argument window. An empty result is a valid
// outcome: no resonance in the window.
inline std::vector<ResonanceSpec> solve_resonance(ResonanceFamily family, const ModelParams& p,
                                                  const DressedFrame& frame, int alpha, int m,
                                                  int n, SolveWindow window = {}) {
    detail::check_levels(family, frame, alpha, m, n);
    double lo = window.omega_min > 0.0 ? window.omega_min : 1e-3 * p.omega;
    double hi = window.omega_max > 0.0 ? window.omega_max : 10.0 * p.omega;
    if (p.g2 > 0.0)
        lo = std::max(lo, 2.0 * p.g2 / kBesselArgMax * (1.0 + 1e-12));
    if (!(lo < hi) || window.grid < 2) return {};

    const auto value = [&](double w) {
        return resonance_condition_value(family, p, frame, alpha, m, n, w);
    };

    // grid in u = 1/omega_e, ascending
    const double u_lo = 1.0 / hi;
    const double u_hi = 1.0 / lo;
    const int grid = window.grid;
    const double du = (u_hi - u_lo) / (grid - 1);

    std::vector<ResonanceSpec> roots;
    double u_prev = u_lo;
    double f_prev = value(1.0 / u_prev);
    for (int i = 1; i < grid; ++i) {
        const double u_cur = (i == grid - 1) ? u_hi : u_lo + i * du;
        const double f_cur = value(1.0 / u_cur);
        if (f_prev == 0.0 || (f_prev < 0.0) != (f_cur < 0.0)) {
            double a = u_prev, b = u_cur, fa = f_prev;
            if (fa == 0.0) {
                b = a;
            } else {
                while (b - a > 1e-12 * b) {
                    const double mid = 0.5 * (a + b);
                    const double fm = value(1.0 / mid);
                    if (fm == 0.0) { a = b = mid; break; }
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
            }
            const double w = 1.0 / (0.5 * (a + b));
            const double res = std::abs(value(w));
            if (res <= 1e-9)
                roots.push_back({family, alpha, is_two_qubit(family) ? m : 0, n, w, res});
        }
        u_prev = u_cur;
        f_prev = f_cur;
    }
    std::sort(roots.begin(), roots.end(),
              [](const ResonanceSpec& a, const ResonanceSpec& b) { return a.omega_e < b.omega_e; });
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](const ResonanceSpec& a, const ResonanceSpec& b) {
                                return std::abs(a.omega_e - b.omega_e) <=
                                       1e-10 * std::max(a.omega_e, b.omega_e);
                            }),
                roots.end());
    return roots;
}

namespace detail {

// sum over sigma = +/-1 of w(sigma) J_alpha(sigma Gamma)/2 <<m|e^{sigma x}|n>>,
// with w = 1 (plus families) or w = sigma (cross families)
inline double sigma_sum(const DressedFrame& frame, int alpha, double gamma, int m, int n,
                        bool weighted) {
    const double plus = bessel_j(alpha, gamma) * frame.table.element(m, n);
    const double minus = bessel_j(alpha, -gamma) * frame.table.element(n, m);
    return 0.5 * (plus + (weighted ? -minus : minus));
}

} // namespace detail

// Rabi frequency of the coupled pair from the resonance data alone;
// real-valued in practice, returned complex so the two-qubit phase
// conventions R/|R| stay meaningful verbatim.
inline Complex rabi_frequency_at(ResonanceFamily family, const ModelParams& p,
                                 const DressedFrame& frame, int alpha, int m, int n,
                                 double omega_e) {
    detail::check_levels(family, frame, alpha, m, n);
    const double gamma = 2.0 * p.g2 / omega_e;
    switch (family) {
    case ResonanceFamily::OneQubit: {
        // Delta <<n|e^x|n>> J_alpha(Gamma) (1 - (-1)^alpha)/2
        const double parity = (alpha % 2 == 0) ? 0.0 : 1.0;
        return p.delta * frame.table.element(n, n) * bessel_j(alpha, gamma) * parity;
    }
    case ResonanceFamily::TwoPlusPlus:
    case ResonanceFamily::TwoMinusMinus:
        return p.delta * detail::sigma_sum(frame, alpha, gamma, m, n, false);
    case ResonanceFamily::TwoPlusMinus:
    case ResonanceFamily::TwoMinusPlus:
        return p.delta * detail::sigma_sum(frame, alpha, gamma, m, n, true);
    }
    throw std::logic_error("rabi_frequency_at: unreachable");
}

inline Complex rabi_frequency(ResonanceFamily family, const ModelParams& p,
                              const DressedFrame& frame, const ResonanceSpec& spec) {
    if (spec.residual > 1e-9)
        throw std::invalid_argument("rabi_frequency: spec is not solved (residual > 1e-9)");
    return rabi_frequency_at(family, p, frame, spec.alpha, spec.m, spec.n, spec.omega_e);
}

// Conjugate Rabi frequency computed independently through the adjoint-side
// identity (J_{-alpha} and the (n,m)-ordered matrix elements); must agree
// with conj(rabi_frequency) to machine precision.
inline Complex rabi_frequency_adjoint_at(ResonanceFamily family, const ModelParams& p,
                                         const DressedFrame& frame, int alpha, int m, int n,
                                         double omega_e) {
    detail::check_levels(family, frame, alpha, m, n);
    const double gamma = 2.0 * p.g2 / omega_e;
    const double plus = bessel_j(-alpha, gamma) * frame.table.element(n, m);
    const double minus = bessel_j(-alpha, -gamma) * frame.table.element(m, n);
    switch (family) {
    case ResonanceFamily::OneQubit: {
        // Rbar = -Delta <<n|e^x|n>> sum_sigma sigma J_{-alpha}(sigma Gamma)/2
        const double self = frame.table.element(n, n);
        return -p.delta * self * 0.5 * (bessel_j(-alpha, gamma) - bessel_j(-alpha, -gamma));
    }
    case ResonanceFamily::TwoPlusPlus:
    case ResonanceFamily::TwoMinusMinus:
        return p.delta * 0.5 * (plus + minus);
    case ResonanceFamily::TwoPlusMinus:
    case ResonanceFamily::TwoMinusPlus:
        // sum_sigma sigma J_{-alpha}(sigma Gamma) <<n|e^{sigma x}|m>> = -Rbar
        return -p.delta * 0.5 * (plus - minus);
    }
    throw std::logic_error("rabi_frequency_adjoint_at: unreachable");
}

// Closed-form pulse propagator. OneQubit acts on (c_{n,1}, c_{n,-1});
// the two-qubit families act on (c_{m,1}, c_{m,-1}, c_{n,1}, c_{n,-1}) and
// touch only their coupled pair. Identity at t = 0 and unitary for every t
// by construction; |R| = 0 falls back to the identity.
inline Matrix rwa_propagator(ResonanceFamily family, Complex r, double t) {
    if (!std::isfinite(std::abs(r)))
        throw std::invalid_argument("rwa_propagator: non-finite Rabi frequency");
    if (family == ResonanceFamily::OneQubit) {
        Matrix u = Matrix::Identity(2, 2);
        if (std::abs(r) == 0.0) return u;
        const double rr = r.real(); // real for real matrix elements
        u(0, 0) = u(1, 1) = std::cos(0.5 * rr * t);
        u(0, 1) = u(1, 0) = Complex(0, 1) * std::sin(0.5 * rr * t);
        return u;
    }
    Matrix u = Matrix::Identity(4, 4);
    const double mag = std::abs(r);
    if (mag == 0.0) return u;
    int i = 0, j = 0;
    Complex sign(0, 0);
    switch (family) {
    case ResonanceFamily::TwoPlusPlus: i = 0; j = 2; sign = Complex(0, -1); break;
    case ResonanceFamily::TwoMinusMinus: i = 1; j = 3; sign = Complex(0, 1); break;
    case ResonanceFamily::TwoPlusMinus: i = 0; j = 3; sign = Complex(0, 1); break;
    case ResonanceFamily::TwoMinusPlus: i = 1; j = 2; sign = Complex(0, -1); break;
    default: throw std::logic_error("rwa_propagator: unreachable");
    }
    const double c = std::cos(0.5 * mag * t);
    const double s = std::sin(0.5 * mag * t);
    u(i, i) = u(j, j) = c;
    u(i, j) = sign * (r / mag) * s;
    u(j, i) = sign * (std::conj(r) / mag) * s;
    return u;
}

enum class PulseTarget { PiPulse, HalfPulse };

struct RabiSolution {
    ResonanceFamily family = ResonanceFamily::OneQubit;
    ResonanceSpec spec;
    Complex r = 0.0;
    double duration = 0.0;    // pulse time for the requested target
    std::string subspace;     // which dressed pair the pulse addresses

    double pi_pulse_time() const { return M_PI / std::abs(r); }
    Matrix propagator(double t) const { return rwa_propagator(family, r, t); }
};

inline RabiSolution synthesize_gate(ResonanceFamily family, const ModelParams& p,
                                    const DressedFrame& frame, const ResonanceSpec& spec,
                                    PulseTarget target) {
    RabiSolution sol;
    sol.family = family;
    sol.spec = spec;
    sol.r = rabi_frequency(family, p, frame, spec);
    if (std::abs(sol.r) == 0.0)
        throw NumericsError("synthesize_gate: zero Rabi frequency (even-alpha null gate)");
    sol.duration = (target == PulseTarget::PiPulse) ? M_PI / std::abs(sol.r)
                                                    : 0.5 * M_PI / std::abs(sol.r);
    const auto [lm, ln] = family_signs(family);
    if (family == ResonanceFamily::OneQubit) {
        sol.subspace = "(" + std::to_string(spec.n) + ",+1) <-> (" +
                       std::to_string(spec.n) + ",-1)";
    } else {
        const auto lbl = [](int lambda) { return lambda > 0 ? std::string("+1") : std::string("-1"); };
        sol.subspace = "(" + std::to_string(spec.m) + "," + lbl(lm) + ") <-> (" +
                       std::to_string(spec.n) + "," + lbl(ln) + ")";
    }
    return sol;
}

} // namespace qrabi
