#include "qgfa/softabs.hpp"

#include <cmath>
#include <sstream>

#include "qgfa/numeric.hpp"

namespace qgfa::softabs {

void SmoothingParams::validate() const {
    require(epsilon_smooth > 0.0, "SmoothingParams: epsilon_smooth must be > 0");
    require(eta > 0.0 && eta < 1.0, "SmoothingParams: eta must be in (0, 1)");
    require(kappa >= 1.0, "SmoothingParams: kappa must be >= 1");
}

double soft_abs(double x, double epsilon_smooth) {
    require(epsilon_smooth > 0.0, "soft_abs: epsilon_smooth must be > 0");
    const double ax = std::abs(x);
    return ax + epsilon_smooth * std::log1p(std::exp(-2.0 * ax / epsilon_smooth));
}

double soft_abs_error(double x, double epsilon_smooth) {
    require(epsilon_smooth > 0.0, "soft_abs_error: epsilon_smooth must be > 0");
    const double ax = std::abs(x);
    return epsilon_smooth * std::log1p(std::exp(-2.0 * ax / epsilon_smooth));
}

double soft_abs_grad(double x, double epsilon_smooth) {
    require(epsilon_smooth > 0.0, "soft_abs_grad: epsilon_smooth must be > 0");
    return std::tanh(x / epsilon_smooth);
}

double relative_target_error(double x, const SmoothingParams& params, double t, GKind which) {
    require(x > 0.0, "relative_target_error: x must be > 0");
    require(t > 0.0, "relative_target_error: t must be > 0");
    require(params.epsilon_smooth > 0.0, "relative_target_error: epsilon_smooth must be > 0");
    const double eps = params.epsilon_smooth;
    switch (which) {
        case GKind::G1:
            return -std::expm1(-soft_abs_error(x, eps) * t);
        case GKind::G2: {
            const double s = soft_abs(x, eps);
            return 1.0 - one_minus_exp_over(s * t) / one_minus_exp_over(std::abs(x) * t);
        }
    }
    throw std::invalid_argument("relative_target_error: unknown target kind");
}

double solve_epsilon(double kappa, double t, double eta, GKind which) {
    require(kappa >= 1.0, "solve_epsilon: kappa must be >= 1");
    require(t > 0.0, "solve_epsilon: t must be > 0");
    require(eta > 0.0 && eta < 1.0, "solve_epsilon: eta must be in (0, 1)");

    const double x = 1.0 / kappa;
    auto resid = [&](double eps) {
        SmoothingParams p{eps, eta, kappa};
        return relative_target_error(x, p, t, which) - eta;
    };

    // r_i is strictly increasing in eps, so bracket a sign change.
    double lo = 1e-12;
    double hi = 1.0 / kappa;
    if (resid(lo) > 0.0) {
        std::ostringstream os;
        os << "solve_epsilon: no sign change, r(" << lo << ") already exceeds eta=" << eta;
        throw BracketError(os.str());
    }
    int widen = 0;
    while (resid(hi) < 0.0) {
        hi *= 2.0;
        if (++widen > 60) {
            std::ostringstream os;
            os << "solve_epsilon: no sign change in bracket [" << lo << ", " << hi << "]";
            throw BracketError(os.str());
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (resid(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qgfa::softabs
