#pragma once

// Soft absolute function s(x, eps) = |x| + eps*ln(1 + e^{-2|x|/eps}), its error
// theory, and the smoothing-parameter solver that calibrates eps against a
// relative-error budget eta at the spectral edge x = 1/kappa.

#include <stdexcept>

namespace qgfa::softabs {

enum class GKind { G1, G2 };

struct SmoothingParams {
    double epsilon_smooth = 0.0;  // eps > 0
    double eta = 0.0;             // 0 < eta < 1
    double kappa = 1.0;           // >= 1

    void validate() const;
};

// s(x, eps), evaluated in the factored form so e^{x/eps} never overflows.
double soft_abs(double x, double epsilon_smooth);

// Delta(x, eps) = s(x, eps) - |x|, in [0, eps*ln 2], strictly decreasing in |x|.
double soft_abs_error(double x, double epsilon_smooth);

// d/dx s(x, eps) = tanh(x / eps).
double soft_abs_grad(double x, double epsilon_smooth);

// r1(x,eps) = 1 - e^{-Delta(x,eps) t} ; r2(x,eps) = 1 - g2t(s)/g2t(|x|).
double relative_target_error(double x, const SmoothingParams& params, double t, GKind which);

// Solve r_i(1/kappa, eps) = eta for eps by bracketed bisection on
// [1e-12, 1/kappa], doubling the upper end until the bracket holds.
double solve_epsilon(double kappa, double t, double eta, GKind which);

class BracketError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qgfa::softabs
