#pragma once

// Scalar QSP target functions (g1, g2-tilde, g-inv) and bounded parity-pure
// Chebyshev fits of them: the classical half of the signal-processing stage.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgfa::approx {

enum class TargetKind { G1, G2Tilde, Ginv };
enum class Parity { Even, Odd };

struct TargetFunction {
    TargetKind kind = TargetKind::G1;
    double t = 0.0;               // G1 / G2Tilde
    double epsilon_smooth = 0.0;  // G1 / G2Tilde
    double kappa = 0.0;           // Ginv
    double epsilon_apx = 0.0;     // Ginv approximation threshold

    void validate() const;
    Parity parity() const { return kind == TargetKind::Ginv ? Parity::Odd : Parity::Even; }
    std::string describe() const;
};

// Evaluate the target at x in [-1, 1].
double eval_target(const TargetFunction& f, double x);

// Appendix-C degree formula: ceil(sqrt(k^2 log(k/e) * log(4 k^2 log(k/e) / e))).
int qmia_degree(double kappa, double epsilon_apx);

class FitQualityError : public std::runtime_error {
  public:
    FitQualityError(const std::string& msg, double sup_error)
        : std::runtime_error(msg), sup_error(sup_error) {}
    double sup_error;
};

struct ChebyshevFit {
    std::optional<TargetFunction> target;
    Parity parity = Parity::Even;
    // coeffs[k] multiplies T_{2k} (even parity) or T_{2k+1} (odd parity).
    std::vector<double> coeffs;
    int degree = 0;          // highest Chebyshev index
    double sup_error = 0.0;  // max |p(x)/safety - target(x)| on the validation grid
    double safety = 1.0;     // scale factor <= 1 keeping sup|p| <= 1 - 1e-4

    // Scaled polynomial value (safety already folded into coeffs).
    double eval(double x) const;

    // Full coefficient vector c[0..degree] with off-parity entries zero.
    std::vector<double> full_coeffs() const;
};

// Clenshaw evaluation of sum c[k] T_k(x).
double clenshaw(const std::vector<double>& c, double x);

// Interpolate the target at degree+1 Chebyshev nodes, keep the parity-pure
// coefficients, rescale so sup|p| <= 1 - 1e-4, and measure sup_error on a
// grid_size-point validation grid (pass 0 for the default 10*degree).
ChebyshevFit chebyshev_fit(const TargetFunction& f, int degree, int grid_size = 0);

// Same fit machinery for an arbitrary parity-pure scalar function.
ChebyshevFit chebyshev_fit_fn(const std::function<double(double)>& fn, Parity parity, int degree,
                              int grid_size = 0);

}  // namespace qgfa::approx
