#include "qgfa/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qgfa/numeric.hpp"
#include "qgfa/softabs.hpp"

namespace qgfa::approx {

void TargetFunction::validate() const {
    switch (kind) {
        case TargetKind::G1:
        case TargetKind::G2Tilde:
            require(t > 0.0, "TargetFunction: t must be > 0");
            require(epsilon_smooth > 0.0, "TargetFunction: epsilon_smooth must be > 0");
            break;
        case TargetKind::Ginv:
            require(kappa >= 1.0, "TargetFunction: kappa must be >= 1");
            require(epsilon_apx > 0.0 && epsilon_apx < kappa,
                    "TargetFunction: epsilon_apx must be in (0, kappa)");
            break;
    }
}

std::string TargetFunction::describe() const {
    std::ostringstream os;
    switch (kind) {
        case TargetKind::G1:
            os << "g1(t=" << t << ",eps=" << epsilon_smooth << ")";
            break;
        case TargetKind::G2Tilde:
            os << "g2tilde(t=" << t << ",eps=" << epsilon_smooth << ")";
            break;
        case TargetKind::Ginv:
            os << "ginv(kappa=" << kappa << ",eps_apx=" << epsilon_apx << ")";
            break;
    }
    return os.str();
}

double eval_target(const TargetFunction& f, double x) {
    require(x >= -1.0 && x <= 1.0, "eval_target: x must lie in [-1, 1]");
    f.validate();
    switch (f.kind) {
        case TargetKind::G1:
            return std::exp(-softabs::soft_abs(x, f.epsilon_smooth) * f.t);
        case TargetKind::G2Tilde:
            return one_minus_exp_over(softabs::soft_abs(x, f.epsilon_smooth) * f.t);
        case TargetKind::Ginv: {
            const double b = f.kappa * f.kappa * std::log(f.kappa / f.epsilon_apx);
            if (std::abs(x) < 1e-300) return 0.0;
            // (1 - (1-x^2)^b) / x without forming (1-x^2)^b directly.
            return -std::expm1(b * std::log1p(-x * x)) / x;
        }
    }
    throw std::invalid_argument("eval_target: unknown target kind");
}

int qmia_degree(double kappa, double epsilon_apx) {
    require(kappa >= 1.0, "qmia_degree: kappa must be >= 1");
    require(epsilon_apx > 0.0 && epsilon_apx < 1.0, "qmia_degree: epsilon_apx must be in (0, 1)");
    const double b = kappa * kappa * std::log(kappa / epsilon_apx);
    return static_cast<int>(std::ceil(std::sqrt(b * std::log(4.0 * b / epsilon_apx))));
}

double clenshaw(const std::vector<double>& c, double x) {
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) {
        const double next = 2.0 * x * b1 - b2 + c[i];
        b2 = b1;
        b1 = next;
    }
    return x * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

double ChebyshevFit::eval(double x) const {
    return clenshaw(full_coeffs(), x);
}

std::vector<double> ChebyshevFit::full_coeffs() const {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    const int off = parity == Parity::Odd ? 1 : 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        c[2 * k + off] = coeffs[k];
    }
    return c;
}

ChebyshevFit chebyshev_fit_fn(const std::function<double(double)>& fn, Parity parity, int degree,
                              int grid_size) {
    require(degree >= 0, "chebyshev_fit: degree must be >= 0");
    if (parity == Parity::Even) {
        require(degree % 2 == 0, "chebyshev_fit: even target needs even degree");
    } else {
        require(degree % 2 == 1, "chebyshev_fit: odd target needs odd degree");
    }
    if (grid_size <= 0) grid_size = std::max(10 * degree, 64);

    // Interpolation at first-kind Chebyshev nodes via the discrete cosine relation.
    const int N = degree + 1;
    std::vector<double> fk(N);
    for (int k = 0; k < N; ++k) {
        fk[k] = fn(std::cos(M_PI * (k + 0.5) / N));
    }
    std::vector<double> c(N, 0.0);
    for (int j = 0; j < N; ++j) {
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
            acc += fk[k] * std::cos(j * M_PI * (k + 0.5) / N);
        }
        c[j] = 2.0 * acc / N;
    }
    c[0] *= 0.5;

    // Off-parity coefficients must vanish up to rounding before being zeroed.
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const int off = parity == Parity::Odd ? 0 : 1;
    for (int j = off; j < N; j += 2) {
        if (std::abs(c[j]) > 1e-12 * std::max(1.0, scale)) {
            std::ostringstream os;
            os << "chebyshev_fit: off-parity coefficient c[" << j << "]=" << c[j]
               << " exceeds tolerance";
            throw std::runtime_error(os.str());
        }
        c[j] = 0.0;
    }

    ChebyshevFit fit;
    fit.parity = parity;
    fit.degree = degree;
    fit.coeffs.resize(static_cast<std::size_t>(degree / 2) + 1);
    const int keep = parity == Parity::Odd ? 1 : 0;
    for (std::size_t k = 0; k < fit.coeffs.size(); ++k) {
        fit.coeffs[k] = c[2 * k + keep];
    }

    // Boundedness: rescale so the polynomial stays strictly below 1 in sup norm.
    double sup_raw = 0.0;
    const int nb = std::max(4 * degree, 64);
    for (int k = 0; k <= nb; ++k) {
        sup_raw = std::max(sup_raw, std::abs(fit.eval(std::cos(M_PI * k / nb))));
    }
    const double cap = 1.0 - 1e-4;
    fit.safety = sup_raw > cap ? cap / sup_raw : 1.0;
    for (double& v : fit.coeffs) v *= fit.safety;

    // Validation: the de-scaled polynomial against the analytic target.
    double sup_err = 0.0;
    double sup_target = 0.0;
    for (int k = 0; k < grid_size; ++k) {
        const double x = -1.0 + 2.0 * k / (grid_size - 1);
        const double tv = fn(x);
        sup_target = std::max(sup_target, std::abs(tv));
        sup_err = std::max(sup_err, std::abs(fit.eval(x) / fit.safety - tv));
    }
    fit.sup_error = sup_err;
    if (sup_target > 0.0 && sup_err >= 0.5 * sup_target) {
        std::ostringstream os;
        os << "chebyshev_fit: degree " << degree << " cannot represent the target (sup_error "
           << sup_err << " vs target sup " << sup_target << ")";
        throw FitQualityError(os.str(), sup_err);
    }
    return fit;
}

ChebyshevFit chebyshev_fit(const TargetFunction& f, int degree, int grid_size) {
    f.validate();
    ChebyshevFit fit =
        chebyshev_fit_fn([&](double x) { return eval_target(f, x); }, f.parity(), degree, grid_size);
    fit.target = f;
    return fit;
}

}  // namespace qgfa::approx
