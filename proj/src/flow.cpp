#include "qgfa/flow.hpp"

#include <cmath>
#include <sstream>

#include "qgfa/numeric.hpp"

namespace qgfa::flow {

EigenSystem eigen_system(const fem::SpdSystem& system) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(system.matrix);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw fem::SingularSystemError("eigen_system: matrix is not positive definite");
    }
    return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

double energy(const fem::SpdSystem& system, const Eigen::VectorXd& u) {
    require(u.size() == system.dim(), "energy: dimension mismatch");
    return 0.5 * u.dot(system.matrix * u) - u.dot(system.load);
}

Eigen::VectorXd solve_direct(const fem::SpdSystem& system) {
    Eigen::LLT<Eigen::MatrixXd> llt(system.matrix);
    if (llt.info() != Eigen::Success) {
        throw fem::SingularSystemError("solve_direct: Cholesky factorization failed");
    }
    Eigen::VectorXd u = llt.solve(system.load);
    const double resid = (system.matrix * u - system.load).norm();
    if (resid > 1e-10 * std::max(1.0, system.load.norm())) {
        std::ostringstream os;
        os << "solve_direct: residual " << resid << " exceeds tolerance";
        throw fem::SingularSystemError(os.str());
    }
    return u;
}

FlowSolution gradient_flow(const EigenSystem& es, const Eigen::VectorXd& u0,
                           const Eigen::VectorXd& f, double t) {
    require(t >= 0.0, "gradient_flow: t must be >= 0");
    const Eigen::VectorXd uv = es.eigenvectors.transpose() * u0;
    const Eigen::VectorXd fv = es.eigenvectors.transpose() * f;
    const int n = static_cast<int>(es.eigenvalues.size());
    Eigen::VectorXd coeff(n);
    Eigen::VectorXd star(n);
    for (int i = 0; i < n; ++i) {
        const double lam = es.eigenvalues[i];
        const double y = lam * t;
        coeff[i] = std::exp(-y) * uv[i] + t * one_minus_exp_over(y) * fv[i];
        star[i] = fv[i] / lam;
    }
    FlowSolution sol;
    sol.u_t = es.eigenvectors * coeff;
    sol.t = t;
    sol.delta_norm = (coeff - star).norm();
    return sol;
}

FlowSolution gradient_flow(const fem::SpdSystem& system, double t) {
    return gradient_flow(eigen_system(system), system.hot_start, system.load, t);
}

double error_bound(double delta0_norm, double kappa, double t) {
    require(delta0_norm >= 0.0 && t >= 0.0, "error_bound: inputs must be nonnegative");
    require(kappa >= 1.0, "error_bound: kappa must be >= 1");
    return std::exp(-t / kappa) * delta0_norm;
}

double select_time(double kappa, double zeta, double delta0_norm) {
    require(kappa >= 1.0, "select_time: kappa must be >= 1");
    require(zeta > 0.0, "select_time: zeta must be > 0");
    if (zeta >= delta0_norm) return 0.0;  // already converged
    return -kappa * std::log(zeta / delta0_norm);
}

double relative_error(const Eigen::VectorXd& u_approx, const Eigen::VectorXd& u_star) {
    require(u_approx.size() == u_star.size(), "relative_error: dimension mismatch");
    const double ref = u_star.norm();
    require(ref > 0.0, "relative_error: reference norm is zero");
    return (u_approx - u_star).norm() / ref;
}

fem::SpdSystem normalized(const fem::SpdSystem& system) {
    fem::SpdSystem out = system;
    const double nK = system.spectral_norm;
    require(nK > 0.0, "normalized: spectral_norm must be > 0");
    out.matrix /= nK;
    out.load /= nK;
    out.spectral_norm = 1.0;
    return out;
}

}  // namespace qgfa::flow
