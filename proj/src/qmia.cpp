#include "qgfa/qmia.hpp"

#include "qgfa/flow.hpp"
#include "qgfa/numeric.hpp"

namespace qgfa::qmia {

QmiaOutput run_qmia(const fem::SpdSystem& system, const qcirc::QetBranch& inverse_branch,
                    qcirc::RunMode mode) {
    const int n = system.dim();
    const double fnorm = system.load.norm();
    require(fnorm > 0.0, "run_qmia: load vector is zero");
    require(inverse_branch.fit.parity == approx::Parity::Odd,
            "run_qmia: inverse target must be an odd polynomial");

    const double safety = inverse_branch.fit.safety;
    const Eigen::VectorXd fhat = system.load / fnorm;

    QmiaOutput out;
    if (mode == qcirc::RunMode::IdealPolynomial) {
        const flow::EigenSystem es = flow::eigen_system(flow::normalized(system));
        Eigen::VectorXd c = es.eigenvectors.transpose() * fhat;
        for (int i = 0; i < n; ++i) c[i] *= inverse_branch.fit.eval(es.eigenvalues[i]);
        const Eigen::VectorXd psi = es.eigenvectors * c;
        out.u_inv = fnorm / (safety * system.spectral_norm) * psi;
        out.success_probability = psi.squaredNorm();
        out.be_applications = 0;
        return out;
    }

    if (!inverse_branch.phases) {
        throw std::invalid_argument("run_qmia: circuit mode requires phases");
    }
    if (inverse_branch.phases->degree() != inverse_branch.fit.degree) {
        throw qcirc::LayoutError("run_qmia: phase sequence degree does not match the fit");
    }
    const qcirc::BlockEncoding be = qcirc::block_encode(system);
    const qcirc::QetApplication app =
        qcirc::qet_apply(*inverse_branch.phases, be, fhat.cast<std::complex<double>>());
    out.u_inv = fnorm / (safety * system.spectral_norm) * qcirc::real_extract(app.state);
    out.success_probability = app.success_probability;
    out.be_applications = app.be_applications;
    return out;
}

double relative_error_inv(const Eigen::VectorXd& u_inv, const Eigen::VectorXd& u_star) {
    return flow::relative_error(u_inv, u_star);
}

}  // namespace qgfa::qmia
