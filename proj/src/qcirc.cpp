#include "qgfa/qcirc.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "qgfa/flow.hpp"
#include "qgfa/numeric.hpp"

namespace qgfa::qcirc {

namespace {

using std::complex;

int log2_exact(int n) {
    int p = 0;
    while ((1 << p) < n) ++p;
    if ((1 << p) != n) {
        std::ostringstream os;
        os << "system dimension " << n << " is not a power of two";
        throw LayoutError(os.str());
    }
    return p;
}

// Statevector over (qsp, be-block, sys, lcu); the BE ancilla register is the
// block index of the Hermitian dilation, so it contributes one logical axis of
// size 2^m (m = 1 here) folded together with the system axis where convenient.
struct GfState {
    int nsys;          // 2^n
    int nbe;           // 2^m
    bool has_lcu;
    Eigen::VectorXcd a;

    GfState(int nsys, int nbe, bool lcu) : nsys(nsys), nbe(nbe), has_lcu(lcu) {
        a = Eigen::VectorXcd::Zero(2 * nbe * nsys * (lcu ? 2 : 1));
        a[0] = 1.0;
    }
    int nlcu() const { return has_lcu ? 2 : 1; }
    int idx(int q, int b, int s, int l) const {
        return ((q * nbe + b) * nsys + s) * nlcu() + l;
    }

    void apply_qsp(const Eigen::Matrix2cd& M) {
        const int half = nbe * nsys * nlcu();
        for (int r = 0; r < half; ++r) {
            const complex<double> v0 = a[r];
            const complex<double> v1 = a[half + r];
            a[r] = M(0, 0) * v0 + M(0, 1) * v1;
            a[half + r] = M(1, 0) * v0 + M(1, 1) * v1;
        }
    }

    void apply_lcu(const Eigen::Matrix2cd& M) {
        for (int r = 0; r < static_cast<int>(a.size()); r += 2) {
            const complex<double> v0 = a[r];
            const complex<double> v1 = a[r + 1];
            a[r] = M(0, 0) * v0 + M(0, 1) * v1;
            a[r + 1] = M(1, 0) * v0 + M(1, 1) * v1;
        }
    }

    // W on the system register, controlled on the LCU qubit value.
    void apply_sys_ctrl(const Eigen::MatrixXd& W, int lcu_val) {
        Eigen::VectorXcd tmp(nsys);
        for (int q = 0; q < 2; ++q) {
            for (int b = 0; b < nbe; ++b) {
                for (int s = 0; s < nsys; ++s) tmp[s] = a[idx(q, b, s, lcu_val)];
                Eigen::VectorXcd out = W * tmp;
                for (int s = 0; s < nsys; ++s) a[idx(q, b, s, lcu_val)] = out[s];
            }
        }
    }

    // Block-encoding unitary on (be, sys), identical on every (qsp, lcu) slice.
    void apply_be(const Eigen::MatrixXcd& U) {
        const int dim = nbe * nsys;
        Eigen::VectorXcd tmp(dim);
        for (int q = 0; q < 2; ++q) {
            for (int l = 0; l < nlcu(); ++l) {
                for (int b = 0; b < nbe; ++b) {
                    for (int s = 0; s < nsys; ++s) tmp[b * nsys + s] = a[idx(q, b, s, l)];
                }
                Eigen::VectorXcd out = U * tmp;
                for (int b = 0; b < nbe; ++b) {
                    for (int s = 0; s < nsys; ++s) a[idx(q, b, s, l)] = out[b * nsys + s];
                }
            }
        }
    }

    // Projector-controlled z-rotation C_{0^m} (e^{-i phi Z} x I) C_{0^m} in its
    // closed diagonal form: phase e^{+i phi} where (qsp == 0) == (be == 0^m),
    // e^{-i phi} elsewhere. Optionally controlled on the LCU qubit value.
    void apply_ctrl_rz(double phi, int lcu_val) {
        const complex<double> ep = std::polar(1.0, phi);
        const complex<double> em = std::polar(1.0, -phi);
        for (int q = 0; q < 2; ++q) {
            for (int b = 0; b < nbe; ++b) {
                const complex<double> ph = ((q == 0) == (b == 0)) ? ep : em;
                for (int s = 0; s < nsys; ++s) {
                    const int l0 = has_lcu ? lcu_val : 0;
                    a[idx(q, b, s, l0)] *= ph;
                }
            }
        }
    }
};

const Eigen::Matrix2cd kX = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
const Eigen::Matrix2cd kH =
    (Eigen::Matrix2cd() << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0),
     -1 / std::sqrt(2.0))
        .finished();

}  // namespace

BlockEncoding block_encode(const fem::SpdSystem& system) {
    const int n = system.dim();
    log2_exact(n);
    require(system.spectral_norm > 0.0, "block_encode: spectral_norm must be > 0");

    const Eigen::MatrixXd Kt = system.matrix / system.spectral_norm;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Kt);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw fem::SingularSystemError("block_encode: matrix is not positive definite");
    }
    if (es.eigenvalues().maxCoeff() > 1.0 + 1e-10) {
        throw std::invalid_argument("block_encode: ||K~|| exceeds 1, normalization failure");
    }
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) {
        s[i] = std::sqrt(std::max(0.0, 1.0 - es.eigenvalues()[i] * es.eigenvalues()[i]));
    }
    const Eigen::MatrixXd S =
        es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();

    BlockEncoding be;
    be.m_be = 1;
    be.normalization = system.spectral_norm;
    be.unitary = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    be.unitary.topLeftCorner(n, n) = Kt;
    be.unitary.topRightCorner(n, n) = S;
    be.unitary.bottomLeftCorner(n, n) = S;
    be.unitary.bottomRightCorner(n, n) = -Kt;

    const double unit_err =
        (be.unitary.adjoint() * be.unitary - Eigen::MatrixXcd::Identity(2 * n, 2 * n))
            .cwiseAbs()
            .maxCoeff();
    if (unit_err > 1e-10) {
        std::ostringstream os;
        os << "block_encode: dilation deviates from unitarity by " << unit_err;
        throw std::runtime_error(os.str());
    }
    return be;
}

Eigen::MatrixXd state_prep(const Eigen::VectorXd& v) {
    const double nv = v.norm();
    require(nv > 0.0, "state_prep: zero vector");
    const int n = static_cast<int>(v.size());
    const Eigen::VectorXd vh = v / nv;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
    e1[0] = 1.0;
    if (vh[0] >= 0.0) {
        const Eigen::VectorXd w = vh + e1;
        return 2.0 * (w * w.transpose()) / w.squaredNorm() - Eigen::MatrixXd::Identity(n, n);
    }
    const Eigen::VectorXd w = vh - e1;
    return Eigen::MatrixXd::Identity(n, n) - 2.0 * (w * w.transpose()) / w.squaredNorm();
}

QetApplication qet_apply(const qsp::PhaseSequence& phases, const BlockEncoding& be,
                         const Eigen::VectorXcd& psi) {
    const int n = static_cast<int>(be.unitary.rows()) / 2;
    if (psi.size() != n) {
        throw LayoutError("qet_apply: state dimension does not match block encoding");
    }
    const int d = static_cast<int>(phases.phases.size());
    require(d >= 1, "qet_apply: empty phase sequence");

    GfState st(n, 2, /*lcu=*/false);
    // |0>_qsp |0>_be |psi>, then the X/H extraction sandwich.
    for (int s = 0; s < n; ++s) st.a[st.idx(0, 0, s, 0)] = psi[s];
    st.apply_qsp(kX);
    st.apply_qsp(kH);

    long count = 0;
    for (int j = d - 1; j >= 0; --j) {
        st.apply_ctrl_rz(phases.phases[j], 0);
        if (j > 0) {
            st.apply_be(be.unitary);  // U_K = U_K^dagger for the Hermitian dilation
            ++count;
        }
    }
    st.apply_qsp(kX);
    st.apply_qsp(kH);

    QetApplication out;
    out.state.resize(n);
    for (int s = 0; s < n; ++s) out.state[s] = st.a[st.idx(0, 0, s, 0)];
    out.success_probability = out.state.squaredNorm() / psi.squaredNorm();
    out.be_applications = count;
    return out;
}

Eigen::VectorXd real_extract(const Eigen::VectorXcd& v, double tol) {
    const Eigen::VectorXcd rotated = complex<double>(0, -1) * v;
    const double leak = rotated.imag().cwiseAbs().maxCoeff();
    if (leak > tol * std::max(1.0, rotated.real().cwiseAbs().maxCoeff())) {
        std::ostringstream os;
        os << "real_extract: imaginary residue " << leak << " above tolerance";
        throw std::runtime_error(os.str());
    }
    return rotated.real();
}

QgfaOutput run_qgfa(const fem::SpdSystem& system, const QetBranch& branch1,
                    const QetBranch& branch2, double t, RunMode mode) {
    require(t >= 0.0, "run_qgfa: t must be >= 0");
    const int n = system.dim();
    const int nq = log2_exact(n);
    (void)nq;

    if (branch1.fit.target && branch2.fit.target) {
        if (branch1.fit.target->t != branch2.fit.target->t) {
            throw std::invalid_argument("run_qgfa: branches fitted at inconsistent t");
        }
    }
    const double alpha = system.hot_start.norm();
    const double beta = t * system.load.norm() / system.spectral_norm;
    require(alpha > 0.0 || beta > 0.0, "run_qgfa: both u(0) and f vanish");

    const double a_eff = alpha / branch1.fit.safety;
    const double b_eff = beta / branch2.fit.safety;

    QgfaOutput out;
    out.alpha = alpha;
    out.beta = beta;

    if (mode == RunMode::IdealPolynomial) {
        const fem::SpdSystem norm_sys = flow::normalized(system);
        const flow::EigenSystem es = flow::eigen_system(norm_sys);
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(n);
        if (alpha > 0.0) {
            const Eigen::VectorXd uhat = system.hot_start / alpha;
            Eigen::VectorXd c = es.eigenvectors.transpose() * uhat;
            for (int i = 0; i < n; ++i) c[i] *= branch1.fit.eval(es.eigenvalues[i]);
            psi += a_eff * (es.eigenvectors * c);
        }
        if (beta > 0.0) {
            const Eigen::VectorXd fhat = system.load / system.load.norm();
            Eigen::VectorXd c = es.eigenvectors.transpose() * fhat;
            for (int i = 0; i < n; ++i) c[i] *= branch2.fit.eval(es.eigenvalues[i]);
            psi += b_eff * (es.eigenvectors * c);
        }
        psi /= (a_eff + b_eff);
        out.u_qc = (a_eff + b_eff) * psi;
        out.success_probability = psi.squaredNorm();
        out.be_applications = 0;
        return out;
    }

    if (!branch1.phases || !branch2.phases) {
        throw std::invalid_argument("run_qgfa: circuit mode requires phases on both branches");
    }
    const auto& ph1 = *branch1.phases;
    const auto& ph2 = *branch2.phases;
    if (ph1.phases.size() != ph2.phases.size()) {
        throw LayoutError("run_qgfa: branch phase sequences differ in length");
    }
    if (ph1.degree() != branch1.fit.degree || ph2.degree() != branch2.fit.degree) {
        throw LayoutError("run_qgfa: phase sequence degree does not match its fit");
    }
    const int d = static_cast<int>(ph1.phases.size());

    const BlockEncoding be = block_encode(system);
    const Eigen::MatrixXd W1 =
        alpha > 0.0 ? state_prep(system.hot_start) : Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd W2 =
        beta > 0.0 ? state_prep(system.load) : Eigen::MatrixXd::Identity(n, n);

    Eigen::Matrix2cd S;
    const double denom = std::sqrt(a_eff + b_eff);
    S << std::sqrt(a_eff) / denom, -std::sqrt(b_eff) / denom,
         std::sqrt(b_eff) / denom, std::sqrt(a_eff) / denom;

    GfState st(n, 2, /*lcu=*/true);
    st.apply_lcu(S);
    st.apply_qsp(kX);
    st.apply_qsp(kH);
    st.apply_sys_ctrl(W2, 1);
    st.apply_sys_ctrl(W1, 0);

    long count = 0;
    for (int j = d - 1; j >= 0; --j) {
        st.apply_ctrl_rz(ph2.phases[j], 1);
        st.apply_ctrl_rz(ph1.phases[j], 0);
        if (j > 0) {
            st.apply_be(be.unitary);
            ++count;
        }
    }
    const double norm_drift = std::abs(st.a.norm() - 1.0);
    if (norm_drift > 1e-10) {
        std::ostringstream os;
        os << "run_qgfa: state norm drifted by " << norm_drift;
        throw std::runtime_error(os.str());
    }
    st.apply_qsp(kX);
    st.apply_qsp(kH);
    st.apply_lcu(S.adjoint());

    Eigen::VectorXcd amp(n);
    for (int s = 0; s < n; ++s) amp[s] = st.a[st.idx(0, 0, s, 0)];
    out.u_qc = (a_eff + b_eff) * real_extract(amp);
    out.success_probability = amp.squaredNorm();
    out.be_applications = count;
    return out;
}

double success_probability(const QgfaOutput& output) {
    return output.success_probability;
}

}  // namespace qgfa::qcirc
