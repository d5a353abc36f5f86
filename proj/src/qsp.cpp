#include "qgfa/qsp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>

#include "qgfa/numeric.hpp"

namespace qgfa::qsp {

namespace {

using Eigen::Matrix2cd;
using std::complex;

constexpr int kMaxIterations = 500;
constexpr double kGradTol = 1e-12;

Matrix2cd phase_gate(double phi) {
    Matrix2cd E = Matrix2cd::Zero();
    E(0, 0) = std::polar(1.0, phi);
    E(1, 1) = std::polar(1.0, -phi);
    return E;
}

Matrix2cd wx_signal(double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    Matrix2cd W;
    W << complex<double>(x, 0), complex<double>(0, s),
         complex<double>(0, s), complex<double>(x, 0);
    return W;
}

// Re<0|U|0> in the Wx convention and its gradient over all d = D+1 phases.
double wx_response_grad(const std::vector<double>& phis, double x, std::vector<double>* grad,
                        std::vector<Matrix2cd>& pre, std::vector<Matrix2cd>& suf) {
    const int D = static_cast<int>(phis.size()) - 1;
    const Matrix2cd W = wx_signal(x);
    pre.resize(D + 1);
    pre[0] = phase_gate(phis[0]);
    for (int j = 1; j <= D; ++j) {
        pre[j] = pre[j - 1] * W * phase_gate(phis[j]);
    }
    const double val = pre[D](0, 0).real();
    if (grad != nullptr) {
        suf.resize(D + 1);
        suf[D] = Matrix2cd::Identity();
        for (int j = D - 1; j >= 0; --j) {
            suf[j] = W * phase_gate(phis[j + 1]) * suf[j + 1];
        }
        grad->resize(D + 1);
        for (int j = 0; j <= D; ++j) {
            // d/dphi_j <0|U|0> = i * (pre_j Z suf_j)(0,0)
            const complex<double> m =
                pre[j](0, 0) * suf[j](0, 0) - pre[j](0, 1) * suf[j](1, 0);
            (*grad)[j] = -m.imag();
        }
    }
    return val;
}

std::vector<double> expand_symmetric(const std::vector<double>& theta, int D) {
    std::vector<double> phis(D + 1);
    const int nfree = static_cast<int>(theta.size());
    for (int i = 0; i < nfree; ++i) {
        phis[i] = theta[i];
        phis[D - i] = theta[i];
    }
    return phis;
}

// Wx phases solving Re P = f -> circuit phases with Im response = f.
std::vector<double> to_circuit_convention(const std::vector<double>& phis) {
    const int D = static_cast<int>(phis.size()) - 1;
    std::vector<double> psis = phis;
    if (D == 0) {
        psis[0] += M_PI / 2.0;
        return psis;
    }
    psis[0] += -M_PI / 4.0 + M_PI * (D + 1) / 2.0;
    for (int j = 1; j < D; ++j) psis[j] -= M_PI / 2.0;
    psis[D] -= M_PI / 4.0;
    return psis;
}

std::vector<double> residual_grid(int D) {
    const int M = 2 * (D + 1);
    std::vector<double> xs(M + 1);
    for (int k = 0; k <= M; ++k) xs[k] = std::cos(M_PI * k / M);
    return xs;
}

double circuit_response(const std::vector<double>& psis, double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    Matrix2cd R;
    R << complex<double>(x, 0), complex<double>(s, 0),
         complex<double>(s, 0), complex<double>(-x, 0);
    Matrix2cd U = phase_gate(psis[0]);
    for (std::size_t j = 1; j < psis.size(); ++j) {
        U = U * R * phase_gate(psis[j]);
    }
    return U(0, 0).imag();
}

}  // namespace

PhaseSequence find_phases(const approx::ChebyshevFit& fit, double tol, Deadline deadline) {
    require(tol >= 1e-10, "find_phases: tol must be >= 1e-10");
    const int D = fit.degree;
    const int d = D + 1;
    const int ntil = (d + 1) / 2;  // enough nodes for a parity-pure degree-D polynomial
    const int nfree = D % 2 == 0 ? D / 2 + 1 : (D + 1) / 2;

    std::vector<double> xs(ntil);
    Eigen::VectorXd fv(ntil);
    const std::vector<double> full = fit.full_coeffs();
    for (int k = 0; k < ntil; ++k) {
        xs[k] = std::cos((2.0 * k + 1.0) * M_PI / (4.0 * ntil));
        fv[k] = approx::clenshaw(full, xs[k]);
    }

    std::vector<double> theta(nfree, 0.0);
    theta[0] = M_PI / 4.0;

    std::vector<Matrix2cd> pre, suf;
    std::vector<double> grad_full;
    Eigen::MatrixXd J(ntil, nfree);
    Eigen::VectorXd r(ntil);

    auto evaluate = [&](const std::vector<double>& th, Eigen::VectorXd& resid,
                        Eigen::MatrixXd* jac) {
        const std::vector<double> phis = expand_symmetric(th, D);
        for (int k = 0; k < ntil; ++k) {
            const double v =
                wx_response_grad(phis, xs[k], jac != nullptr ? &grad_full : nullptr, pre, suf);
            resid[k] = v - fv[k];
            if (jac != nullptr) {
                for (int i = 0; i < nfree; ++i) {
                    const int m = D - i;
                    (*jac)(k, i) = grad_full[i] + (m != i ? grad_full[m] : 0.0);
                }
            }
        }
    };

    evaluate(theta, r, &J);
    double max_resid = r.cwiseAbs().maxCoeff();
    int iter = 0;
    for (; iter < kMaxIterations && max_resid > 0.5 * tol; ++iter) {
        if (std::chrono::steady_clock::now() > deadline) {
            throw TimeoutError("find_phases: deadline exceeded");
        }
        const Eigen::VectorXd grad = J.transpose() * r;
        if (grad.cwiseAbs().maxCoeff() <= kGradTol) break;

        Eigen::VectorXd step = J.colPivHouseholderQr().solve(r);
        const double base = r.squaredNorm();
        double scale = 1.0;
        bool improved = false;
        std::vector<double> trial(nfree);
        Eigen::VectorXd rt(ntil);
        for (int ls = 0; ls < 40; ++ls) {
            for (int i = 0; i < nfree; ++i) trial[i] = theta[i] - scale * step[i];
            evaluate(trial, rt, nullptr);
            if (rt.squaredNorm() < base) {
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;
        theta = trial;
        evaluate(theta, r, &J);
        max_resid = r.cwiseAbs().maxCoeff();
    }

    PhaseSequence seq;
    seq.phases = to_circuit_convention(expand_symmetric(theta, D));
    seq.target_id = fit.target ? fit.target->describe() : "custom";
    seq.target_safety = fit.safety;

    // Residual contract measured in the stored (circuit) convention.
    double resid = 0.0;
    for (double x : residual_grid(D)) {
        resid = std::max(resid, std::abs(circuit_response(seq.phases, x) -
                                         approx::clenshaw(full, x)));
    }
    seq.residual = resid;
    if (resid > tol) {
        std::ostringstream os;
        os << "find_phases: residual " << resid << " above tol " << tol << " after " << iter
           << " iterations (target " << seq.target_id << ", degree " << D << ")";
        throw PhaseSolverError(os.str(), resid);
    }
    return seq;
}

double qsp_response(const PhaseSequence& phases, double x) {
    require(x >= -1.0 && x <= 1.0, "qsp_response: x must lie in [-1, 1]");
    require(!phases.phases.empty(), "qsp_response: empty phase sequence");
    return circuit_response(phases.phases, x);
}

ResponseReport response_report(const PhaseSequence& phases, const approx::TargetFunction& f,
                               int grid) {
    require(grid >= 2, "response_report: grid must be >= 2");
    ResponseReport rep;
    rep.rows.reserve(grid);
    double sum = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double x = static_cast<double>(k) / (grid - 1);
        const double tv = approx::eval_target(f, x);
        const double rv = qsp_response(phases, x) / phases.target_safety;
        const double err = std::abs(tv - rv);
        rep.rows.push_back({x, tv, rv, err});
        rep.max_abs_error = std::max(rep.max_abs_error, err);
        sum += err;
    }
    rep.mean_abs_error = sum / grid;
    return rep;
}

double recompute_residual(const PhaseSequence& phases, const approx::ChebyshevFit& fit) {
    const std::vector<double> full = fit.full_coeffs();
    double resid = 0.0;
    for (double x : residual_grid(fit.degree)) {
        resid = std::max(resid,
                         std::abs(circuit_response(phases.phases, x) - approx::clenshaw(full, x)));
    }
    return resid;
}

}  // namespace qgfa::qsp
