#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgfa/approx.hpp"
#include "qgfa/numeric.hpp"
#include "qgfa/softabs.hpp"

using namespace qgfa;
using namespace qgfa::approx;

namespace {
TargetFunction g1_target(double t, double eps) { return {TargetKind::G1, t, eps, 0.0, 0.0}; }
TargetFunction g2_target(double t, double eps) { return {TargetKind::G2Tilde, t, eps, 0.0, 0.0}; }
TargetFunction ginv_target(double kappa, double eps) {
    return {TargetKind::Ginv, 0.0, 0.0, kappa, eps};
}
}  // namespace

TEST_CASE("eval_target values and symmetry") {
    const double t = 370.18, eps = 0.03;
    CHECK(eval_target(g2_target(t, eps), 0.0) ==
          doctest::Approx(one_minus_exp_over(softabs::soft_abs(0.0, eps) * t)));
    CHECK(eval_target(g1_target(t, eps), 0.0) ==
          doctest::Approx(std::exp(-eps * std::log(2.0) * t)));
    for (double x : {0.1, 0.33, 0.9}) {
        CHECK(eval_target(g1_target(t, eps), x) == eval_target(g1_target(t, eps), -x));
        CHECK(eval_target(g2_target(t, eps), x) == eval_target(g2_target(t, eps), -x));
        CHECK(eval_target(ginv_target(20.0, 0.1), x) ==
              doctest::Approx(-eval_target(ginv_target(20.0, 0.1), -x)));
    }
    CHECK_THROWS_AS(eval_target(g1_target(t, eps), 1.5), std::invalid_argument);
}

TEST_CASE("algebraic identity 1 - e^{-st} = s t g2tilde(s)") {
    const double t = 50.0, eps = 0.02;
    for (double x = 0.0; x <= 1.0; x += 0.01) {
        const double s = softabs::soft_abs(x, eps);
        const double lhs = -std::expm1(-s * t);
        const double rhs = s * t * eval_target(g2_target(t, eps), x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("ginv rolls off at zero and tracks 1/x above 1/kappa") {
    const double kappa = 37.018, eps = 1e-3;
    const TargetFunction f = ginv_target(kappa, eps);
    CHECK(eval_target(f, 0.0) == 0.0);
    for (double x : {1.5 / kappa, 0.2, 0.5, 1.0}) {
        CHECK(eval_target(f, x) == doctest::Approx(1.0 / x).epsilon(2e-3));
    }
}

TEST_CASE("qmia_degree formula and monotonicity") {
    const double kappa = 37.018;
    const double eps = 0.1;
    const double b = kappa * kappa * std::log(kappa / eps);
    const int want = static_cast<int>(std::ceil(std::sqrt(b * std::log(4.0 * b / eps))));
    CHECK(qmia_degree(kappa, eps) == want);
    CHECK(qmia_degree(2 * kappa, eps) > qmia_degree(kappa, eps));
    CHECK(qmia_degree(kappa, eps / 10.0) > qmia_degree(kappa, eps));
    CHECK_THROWS_AS(qmia_degree(0.5, eps), std::invalid_argument);
}

TEST_CASE("constant target keeps only a rescaled T_0 coefficient") {
    const ChebyshevFit fit = chebyshev_fit_fn([](double) { return 1.0; }, Parity::Even, 8);
    CHECK(fit.coeffs[0] == doctest::Approx(1.0 - 1e-4).epsilon(1e-12));
    for (std::size_t k = 1; k < fit.coeffs.size(); ++k) {
        CHECK(std::abs(fit.coeffs[k]) < 1e-13);
    }
    CHECK(fit.safety == doctest::Approx(1.0 - 1e-4));
}

TEST_CASE("fit evenness, boundedness, Clenshaw consistency") {
    const double t = 370.0, eps = 0.03;
    const ChebyshevFit fit = chebyshev_fit(g2_target(t, eps), 120);

    // evenness is structural: full vector has zero odd entries
    const auto full = fit.full_coeffs();
    for (std::size_t j = 1; j < full.size(); j += 2) CHECK(full[j] == 0.0);
    for (double x : {0.3, 0.77}) {
        CHECK(fit.eval(x) == doctest::Approx(fit.eval(-x)).epsilon(1e-14));
    }

    // boundedness on a 4*degree Chebyshev grid
    double sup = 0.0;
    const int nb = 4 * fit.degree;
    for (int k = 0; k <= nb; ++k) {
        sup = std::max(sup, std::abs(fit.eval(std::cos(M_PI * k / nb))));
    }
    CHECK(sup <= 1.0 - 1e-4 + 1e-12);

    // Clenshaw vs direct T_k summation
    for (double x : {-0.9, -0.2, 0.5, 0.99}) {
        double direct = 0.0;
        double tkm1 = 1.0, tk = x;
        direct += full[0];
        for (std::size_t k = 1; k < full.size(); ++k) {
            direct += full[k] * tk;
            const double next = 2.0 * x * tk - tkm1;
            tkm1 = tk;
            tk = next;
        }
        CHECK(fit.eval(x) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("sup_error is non-increasing when the degree doubles") {
    const double t = 37.018, eps = 0.03;
    for (TargetKind kind : {TargetKind::G1, TargetKind::G2Tilde}) {
        TargetFunction f{kind, t, eps, 0.0, 0.0};
        double prev = chebyshev_fit(f, 50).sup_error;
        for (int degree : {100, 200, 400}) {
            const double cur = chebyshev_fit(f, degree).sup_error;
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("degree-1600 fits at the reference cantilever setting are tight") {
    // the full-scale response setting: kappa = 37.018, t = 10 kappa, eta = 1e-6
    const double kappa = 37.018, t = 10 * kappa;
    const double eps = std::min(softabs::solve_epsilon(kappa, t, 1e-6, softabs::GKind::G1),
                                softabs::solve_epsilon(kappa, t, 1e-6, softabs::GKind::G2));
    const ChebyshevFit f1 = chebyshev_fit(g1_target(t, eps), 1600);
    const ChebyshevFit f2 = chebyshev_fit(g2_target(t, eps), 1600);
    CHECK(f1.sup_error < 1e-2);   // paper-scale quality or better
    CHECK(f2.sup_error < 1e-3);
}

TEST_CASE("undersized inverse fit raises a fit-quality error") {
    CHECK_THROWS_AS(chebyshev_fit(ginv_target(37.018, 1e-6), 101), FitQualityError);
    try {
        chebyshev_fit(ginv_target(37.018, 1e-6), 101);
    } catch (const FitQualityError& e) {
        CHECK(e.sup_error > 0.0);
    }
}

TEST_CASE("parity/degree contract") {
    CHECK_THROWS_AS(chebyshev_fit(g1_target(10.0, 0.05), 7), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_fit(ginv_target(10.0, 0.1), 8), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_fit(g1_target(-1.0, 0.05), 8), std::invalid_argument);
}
