#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qgfa/flow.hpp"
#include "qgfa/qcirc.hpp"
#include "test_util.hpp"

using namespace qgfa;
using namespace qgfa::approx;
using namespace qgfa::qcirc;

namespace {

fem::SpdSystem small_system(unsigned seed, int dim, double kappa) {
    std::mt19937_64 rng(seed);
    return testutil::random_spd(rng, dim, kappa);
}

QetBranch fitted_branch(TargetKind kind, double t, double eps, int degree) {
    QetBranch b{chebyshev_fit({kind, t, eps, 0.0, 0.0}, degree), std::nullopt};
    b.phases = qsp::find_phases(b.fit, 1e-10);
    return b;
}

// Eigendecomposition oracle for p(K~) v.
Eigen::VectorXd apply_poly(const fem::SpdSystem& sys, const ChebyshevFit& fit,
                           const Eigen::VectorXd& v) {
    const flow::EigenSystem es = flow::eigen_system(flow::normalized(sys));
    Eigen::VectorXd c = es.eigenvectors.transpose() * v;
    for (int i = 0; i < c.size(); ++i) c[i] *= fit.eval(es.eigenvalues[i]);
    return es.eigenvectors * c;
}

}  // namespace

TEST_CASE("block_encode: scalar dilation, unitarity, block extraction") {
    fem::SpdSystem half;
    half.matrix = 0.5 * Eigen::MatrixXd::Identity(4, 4);
    half.load = Eigen::VectorXd::Ones(4);
    half.hot_start = Eigen::VectorXd::Zero(4);
    half.spectral_norm = 1.0;  // K~ = I/2
    const BlockEncoding be = block_encode(half);
    CHECK((be.unitary.topRightCorner(4, 4) -
           (std::sqrt(3.0) / 2.0) * Eigen::MatrixXcd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    const fem::SpdSystem sys = small_system(3, 8, 12.0);
    const BlockEncoding b2 = block_encode(sys);
    CHECK((b2.unitary.adjoint() * b2.unitary - Eigen::MatrixXcd::Identity(16, 16))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((b2.unitary.topLeftCorner(8, 8).real() - sys.matrix / sys.spectral_norm)
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    fem::SpdSystem bad = sys;
    bad.matrix.resize(6, 6);
    bad.matrix = Eigen::MatrixXd::Identity(6, 6);
    CHECK_THROWS_AS(block_encode(bad), LayoutError);
}

TEST_CASE("state_prep places the normalized vector in the first column") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd v(8);
        for (int i = 0; i < 8; ++i) v[i] = gauss(rng);
        const Eigen::MatrixXd W = state_prep(v);
        CHECK((W.col(0) - v / v.norm()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((W.transpose() * W - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <
              1e-13);
    }
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
    e1[0] = 1.0;
    CHECK((state_prep(e1) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(state_prep(Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("qet_apply: constant polynomial scales the state") {
    const fem::SpdSystem sys = small_system(21, 4, 6.0);
    const BlockEncoding be = block_encode(sys);
    const double c = 0.55;
    const ChebyshevFit fit = chebyshev_fit_fn([&](double) { return c; }, Parity::Even, 0);
    const qsp::PhaseSequence seq = qsp::find_phases(fit, 1e-10);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi[2] = 1.0;
    const QetApplication app = qet_apply(seq, be, psi);
    const Eigen::VectorXd out = real_extract(app.state);
    CHECK((out - c * psi.real()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(app.success_probability == doctest::Approx(c * c).epsilon(1e-9));
    CHECK(app.be_applications == 0);
}

TEST_CASE("qet_apply matches the eigendecomposition polynomial oracle") {
    const fem::SpdSystem sys = small_system(33, 8, 10.0);
    const BlockEncoding be = block_encode(sys);
    const double t = 4.0, eps = 0.05;
    const QetBranch branch = fitted_branch(TargetKind::G1, t, eps, 40);

    std::mt19937_64 rng(12);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(8);
    for (int i = 0; i < 8; ++i) v[i] = gauss(rng);
    v.normalize();

    const QetApplication app = qet_apply(*branch.phases, be, v.cast<std::complex<double>>());
    CHECK(app.be_applications == branch.fit.degree);
    const Eigen::VectorXd got = real_extract(app.state);
    const Eigen::VectorXd want = apply_poly(sys, branch.fit, v);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("qet_apply on an eigenvector scales it by p(lambda)") {
    const fem::SpdSystem sys = small_system(55, 4, 7.0);
    const flow::EigenSystem es = flow::eigen_system(flow::normalized(sys));
    const BlockEncoding be = block_encode(sys);
    const QetBranch branch = fitted_branch(TargetKind::G2Tilde, 3.0, 0.06, 30);

    for (int i = 0; i < 4; ++i) {
        const Eigen::VectorXd v = es.eigenvectors.col(i);
        const QetApplication app = qet_apply(*branch.phases, be, v.cast<std::complex<double>>());
        const Eigen::VectorXd got = real_extract(app.state);
        const double scale = branch.fit.eval(es.eigenvalues[i]);
        CHECK((got - scale * v).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("hermiticity chain: the realized operator stays real") {
    const fem::SpdSystem sys = small_system(77, 4, 5.0);
    const BlockEncoding be = block_encode(sys);
    const QetBranch branch = fitted_branch(TargetKind::G1, 2.0, 0.08, 24);
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(4);
        basis[i] = 1.0;
        const QetApplication app = qet_apply(*branch.phases, be, basis);
        // post state is i * (real vector): real residue below 1e-10
        CHECK(app.state.real().cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("run_qgfa circuit mode matches ideal mode and the flow oracle") {
    const fem::SpdSystem sys = small_system(101, 8, 9.0);
    const double t = 5.0;
    const double eps = 0.05;
    const int degree = 40;
    const QetBranch b1 = fitted_branch(TargetKind::G1, t, eps, degree);
    const QetBranch b2 = fitted_branch(TargetKind::G2Tilde, t, eps, degree);

    const QgfaOutput circ = run_qgfa(sys, b1, b2, t, RunMode::Circuit);
    const QgfaOutput ideal = run_qgfa(sys, b1, b2, t, RunMode::IdealPolynomial);

    CHECK(circ.be_applications == degree);
    CHECK(ideal.be_applications == 0);
    CHECK(circ.alpha == doctest::Approx(sys.hot_start.norm()));
    CHECK(circ.beta == doctest::Approx(t * sys.load.norm() / sys.spectral_norm));

    const double a_eff = circ.alpha / b1.fit.safety;
    const double b_eff = circ.beta / b2.fit.safety;
    const double phase_budget = a_eff * b1.phases->residual + b_eff * b2.phases->residual;
    CHECK((circ.u_qc - ideal.u_qc).norm() <= phase_budget + 1e-11);

    // ideal mode against the classical flow of the normalized system
    const flow::FlowSolution ref = flow::gradient_flow(flow::normalized(sys), t);
    const double fit_budget = circ.alpha * (b1.fit.sup_error + 1e-6) +
                              circ.beta * (b2.fit.sup_error + 1e-6);
    CHECK((ideal.u_qc - ref.u_t).norm() <= fit_budget);

    CHECK(circ.success_probability > 0.0);
    CHECK(circ.success_probability <= 1.0);
    CHECK(circ.success_probability ==
          doctest::Approx(ideal.success_probability).epsilon(1e-6));
}

TEST_CASE("run_qgfa success probability equals the projector norm") {
    // alpha = 1, beta = 0, constant-1 polynomials: success probability ~ safety^2
    fem::SpdSystem sys = small_system(131, 4, 4.0);
    sys.load.setZero();
    const ChebyshevFit one = chebyshev_fit_fn([](double) { return 1.0; }, Parity::Even, 0);
    QetBranch b1{one, qsp::find_phases(one, 1e-10)};
    QetBranch b2 = b1;
    const QgfaOutput out = run_qgfa(sys, b1, b2, 0.0, RunMode::Circuit);
    const double s = one.safety;
    CHECK(out.success_probability == doctest::Approx(s * s).epsilon(1e-9));
    CHECK(success_probability(out) == out.success_probability);
    // halved polynomial scale quarters the probability
    const ChebyshevFit half = chebyshev_fit_fn([](double) { return 0.5; }, Parity::Even, 0);
    QetBranch h1{half, qsp::find_phases(half, 1e-10)};
    const QgfaOutput out_half = run_qgfa(sys, h1, h1, 0.0, RunMode::Circuit);
    CHECK(out_half.success_probability == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("LCU linearity via branch isolation") {
    const fem::SpdSystem base = small_system(149, 8, 11.0);
    const double t = 3.0, eps = 0.06;
    const int degree = 30;
    const QetBranch b1 = fitted_branch(TargetKind::G1, t, eps, degree);
    const QetBranch b2 = fitted_branch(TargetKind::G2Tilde, t, eps, degree);

    fem::SpdSystem only_u = base;
    only_u.load.setZero();
    const QgfaOutput u_only = run_qgfa(only_u, b1, b2, t, RunMode::Circuit);
    const Eigen::VectorXd want_u =
        base.hot_start.norm() *
        apply_poly(base, b1.fit, base.hot_start / base.hot_start.norm()) / b1.fit.safety;
    CHECK((u_only.u_qc - want_u).cwiseAbs().maxCoeff() < 1e-9);

    fem::SpdSystem only_f = base;
    only_f.hot_start.setZero();
    const QgfaOutput f_only = run_qgfa(only_f, b1, b2, t, RunMode::Circuit);
    const double beta = t * base.load.norm() / base.spectral_norm;
    const Eigen::VectorXd want_f =
        beta * apply_poly(base, b2.fit, base.load / base.load.norm()) / b2.fit.safety;
    CHECK((f_only.u_qc - want_f).cwiseAbs().maxCoeff() < 1e-9);

    // full run equals the sum of the isolated branches
    const QgfaOutput both = run_qgfa(base, b1, b2, t, RunMode::Circuit);
    CHECK((both.u_qc - (u_only.u_qc + f_only.u_qc)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("run_qgfa validation errors") {
    const fem::SpdSystem sys = small_system(171, 4, 5.0);
    const QetBranch b1 = fitted_branch(TargetKind::G1, 2.0, 0.08, 20);
    const QetBranch b2_other_t = fitted_branch(TargetKind::G2Tilde, 3.0, 0.08, 20);
    CHECK_THROWS_AS(run_qgfa(sys, b1, b2_other_t, 2.0, RunMode::Circuit),
                    std::invalid_argument);

    const QetBranch b2_short = fitted_branch(TargetKind::G2Tilde, 2.0, 0.08, 18);
    CHECK_THROWS_AS(run_qgfa(sys, b1, b2_short, 2.0, RunMode::Circuit), LayoutError);

    QetBranch no_phases = b1;
    no_phases.phases.reset();
    const QetBranch b2 = fitted_branch(TargetKind::G2Tilde, 2.0, 0.08, 20);
    CHECK_THROWS_AS(run_qgfa(sys, no_phases, b2, 2.0, RunMode::Circuit), std::invalid_argument);

    fem::SpdSystem zeroed = sys;
    zeroed.load.setZero();
    zeroed.hot_start.setZero();
    CHECK_THROWS_AS(run_qgfa(zeroed, b1, b2, 2.0, RunMode::IdealPolynomial),
                    std::invalid_argument);
}
