#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qrabi/specfun.hpp"

using namespace qrabi;
using Catch::Approx;

namespace {

// Oracle: direct power series, terms dropped below 1e-14 of the running peak.
double bessel_series_oracle(int alpha, double x) {
    double sign = 1.0;
    if (alpha < 0) {
        alpha = -alpha;
        if (alpha & 1) sign = -sign;
    }
    if (x < 0) {
        x = -x;
        if (alpha & 1) sign = -sign;
    }
    const double h = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= alpha; ++i) term *= h / i;
    double sum = term;
    double peak = std::abs(term);
    for (int k = 1; k < 300; ++k) {
        term *= -(h * h) / (double(k) * double(k + alpha));
        sum += term;
        peak = std::max(peak, std::abs(term));
        if (std::abs(term) < 1e-14 * peak) break;
    }
    return sign * sum;
}

// Oracle for large arguments: J_a(x) = (1/pi) Integral_0^pi cos(a t - x sin t) dt,
// composite Simpson rule.
double bessel_quadrature_oracle(int alpha, double x, int panels = 2000000) {
    const double h = M_PI / panels;
    double sum = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double t = i * h;
        const double f = std::cos(alpha * t - x * std::sin(t));
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / (3.0 * M_PI);
}

} // namespace

TEST_CASE("bessel special values") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(bessel_j(5, 0.0) == 0.0);
    CHECK(bessel_j(1, 1.0) == Approx(0.4400505857).margin(1e-9));
}

TEST_CASE("bessel reflection identities hold exactly in structure") {
    for (double x : {0.5, 2.0}) {
        CHECK(bessel_j(-3, x) == -bessel_j(3, x));
        CHECK(bessel_j(-3, x) == bessel_j(3, -x));
        CHECK(bessel_j(-4, x) == bessel_j(4, x));
        CHECK(bessel_j(2, -x) == bessel_j(2, x));
    }
}

TEST_CASE("bessel against the series oracle, small arguments") {
    for (int alpha = -10; alpha <= 10; ++alpha)
        for (double x : {0.05, 0.3, 1.0, 2.5, 5.0})
            CHECK(bessel_j(alpha, x) == Approx(bessel_series_oracle(alpha, x)).margin(1e-10));
}

TEST_CASE("bessel against the quadrature oracle, large arguments") {
    struct Probe {
        int alpha;
        double x;
    };
    for (const Probe& p : {Probe{0, 15.0}, Probe{3, 40.0}, Probe{1, 123.4},
                           Probe{7, 350.0}, Probe{0, 700.0}, Probe{25, 60.0}}) {
        CHECK(bessel_j(p.alpha, p.x) ==
              Approx(bessel_quadrature_oracle(p.alpha, p.x)).margin(1e-10));
    }
}

TEST_CASE("bessel series/recurrence branch overlap") {
    for (double x : {11.9, 12.0, 12.1})
        for (int alpha : {0, 1, 4})
            CHECK(bessel_j(alpha, x) == Approx(bessel_series_oracle(alpha, x)).margin(1e-10));
}

TEST_CASE("bessel sum rule") {
    for (double x : {0.5, 2.0, 5.0}) {
        double sum = 0.0;
        for (int a = -40; a <= 40; ++a) {
            const double j = bessel_j(a, x);
            sum += j * j;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("bessel argument window") {
    CHECK_NOTHROW(bessel_j(0, 700.0));
    CHECK_NOTHROW(bessel_j(2, -700.0));
    CHECK_THROWS_AS(bessel_j(0, 700.5), NumericsError);
    CHECK_THROWS_AS(bessel_j(0, -701.0), NumericsError);
}

TEST_CASE("laguerre values") {
    for (double y : {-2.0, 0.0, 0.7, 31.0})
        CHECK(laguerre(0, y) == 1.0);
    CHECK(laguerre(1, 0.25) == Approx(0.75).margin(1e-15));
    CHECK(laguerre(2, 1.0) == Approx(-0.5).margin(1e-14));
    // cubic closed form as an independent check
    const double y = 0.7;
    const double l3 = 1.0 - 3.0 * y + 1.5 * y * y - y * y * y / 6.0;
    CHECK(laguerre(3, y) == Approx(l3).margin(1e-13));
    CHECK_THROWS_AS(laguerre(201, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre(2, std::nan("")), std::invalid_argument);
}

TEST_CASE("laguerre recurrence residual up to n=50") {
    for (double y : {0.01, 0.25, 1.0, 4.0}) {
        for (int k = 1; k < 50; ++k) {
            const double res = (k + 1.0) * laguerre(k + 1, y) -
                               (2.0 * k + 1.0 - y) * laguerre(k, y) +
                               k * laguerre(k - 1, y);
            CHECK(std::abs(res) <= 1e-12 * std::max(1.0, std::abs(laguerre(k, y))));
        }
    }
}

TEST_CASE("displacement table at x=0 is the identity") {
    for (const Algebra& alg :
         {Algebra::oscillator(), Algebra::su11(1.0), Algebra::su2(1.5)}) {
        const int dim = (alg.kind == AlgebraKind::SU2) ? alg.su2_dim() : 12;
        const MatrixElementTable t = displacement_elements(alg, 0.0, dim);
        CHECK(max_abs(RealMatrix(t.values - RealMatrix::Identity(dim, dim))) <= 1e-14);
        CHECK(t.usable == dim);
    }
}

TEST_CASE("oscillator diagonal matches the Laguerre closed form") {
    for (double x : {0.1, 0.5, 1.0}) {
        const MatrixElementTable t = displacement_elements(Algebra::oscillator(), x, 128);
        for (int n = 0; n <= 10; ++n) {
            const double closed = std::exp(-0.5 * x * x) * laguerre(n, x * x);
            CHECK(t.element(n, n) == Approx(closed).margin(1e-8));
        }
    }
    // first diagonal entry example: x = 0.5 -> e^{-1/8}
    const MatrixElementTable t = displacement_elements(Algebra::oscillator(), 0.5, 64);
    CHECK(t.element(0, 0) == Approx(0.8824969).margin(1e-7));
}

TEST_CASE("su(2) table matches a spectral-decomposition oracle") {
    const Algebra alg = Algebra::su2(1.0);
    const double x = M_PI / 4.0;
    const MatrixElementTable t = displacement_elements(alg, x, 3);

    const LadderSet l = ladder_ops(alg, 3);
    const Matrix herm = Complex(0, 1) * x * (l.l_plus - l.l_minus);
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    Matrix oracle = Matrix::Zero(3, 3);
    for (int k = 0; k < 3; ++k)
        oracle += std::exp(Complex(0, -es.eigenvalues()(k))) * es.eigenvectors().col(k) *
                  es.eigenvectors().col(k).adjoint();
    CHECK(max_abs(Matrix(t.values.cast<Complex>() - oracle)) <= 1e-12);
}

TEST_CASE("table entries are real through the complex exponential") {
    const LadderSet l = ladder_ops(Algebra::oscillator(), 48);
    const Matrix gen = 0.8 * (l.l_plus - l.l_minus);
    const Matrix u = matrix_exp(gen);
    CHECK(u.imag().cwiseAbs().maxCoeff() <= 1e-10);
    const MatrixElementTable t = displacement_elements(Algebra::oscillator(), 0.8, 48);
    CHECK(max_abs(RealMatrix(u.real() - t.values)) <= 1e-12);
}

TEST_CASE("table columns are orthonormal") {
    const MatrixElementTable t = displacement_elements(Algebra::oscillator(), 0.7, 64);
    RealMatrix gram = t.values.transpose() * t.values;
    gram.diagonal().array() -= 1.0;
    CHECK(max_abs(gram) <= 1e-8);

    const MatrixElementTable tj = displacement_elements(Algebra::su2(2.0), 1.1, 5);
    RealMatrix gram_j = tj.values.transpose() * tj.values;
    gram_j.diagonal().array() -= 1.0;
    CHECK(max_abs(gram_j) <= 1e-12);
}

TEST_CASE("transpose/sign relation entry(m,n)(x) = entry(n,m)(-x)") {
    for (const Algebra& alg : {Algebra::oscillator(), Algebra::su11(0.75)}) {
        const MatrixElementTable tp = displacement_elements(alg, 0.6, 48);
        const MatrixElementTable tm = displacement_elements(alg, -0.6, 48);
        CHECK(max_abs(RealMatrix(tp.values - tm.values.transpose())) <= 1e-10);
    }
}

TEST_CASE("convergence bookkeeping") {
    // aggressive displacement at small dim: nothing converges
    CHECK_THROWS_AS(displacement_elements(Algebra::oscillator(), 3.0, 8), NumericsError);

    // moderate case: interior converged, edge flagged
    const MatrixElementTable t = displacement_elements(Algebra::oscillator(), 1.0, 32);
    CHECK(t.usable >= 8);
    CHECK(t.usable < 32);
    CHECK_NOTHROW(t.element(0, 0));
    CHECK_THROWS_AS(t.element(31, 31), NumericsError);
    CHECK_THROWS_AS(t.element(-1, 0), std::invalid_argument);
    CHECK_THROWS_AS(t.element(0, 99), std::invalid_argument);
}
