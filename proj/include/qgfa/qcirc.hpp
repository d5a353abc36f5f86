#pragma once

// Statevector simulation of the full gradient-flow circuit: block encoding of
// K~ = K/||K||, two QET branches selected by the LCU ancilla, state
// preparation, the S_{alpha,beta} mixer, and exact post-selection.
//
// Register order (most to least significant index bit): QSP ancilla,
// block-encoding ancillas, system qubits, LCU ancilla.

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

#include "qgfa/approx.hpp"
#include "qgfa/fem.hpp"
#include "qgfa/qsp.hpp"

namespace qgfa::qcirc {

struct CircuitLayout {
    int n_sys = 0;
    int m_be = 1;
    int total_qubits() const { return n_sys + m_be + 2; }
};

struct BlockEncoding {
    Eigen::MatrixXcd unitary;    // dim 2^{m+n}, top-left block = K~
    double normalization = 1.0;  // ||K||
    int m_be = 1;
};

enum class RunMode { Circuit, IdealPolynomial };

// One QET branch: the realized polynomial plus, in circuit mode, its phases.
struct QetBranch {
    approx::ChebyshevFit fit;
    std::optional<qsp::PhaseSequence> phases;
};

struct QgfaOutput {
    Eigen::VectorXd u_qc;
    double success_probability = 0.0;
    double alpha = 0.0;  // ||u(0)||
    double beta = 0.0;   // t ||f|| / ||K||
    long be_applications = 0;
};

struct QetApplication {
    // Post-selected (QSP = 0, BE = 0^m) unnormalized system state; equals
    // i * P[p_fit](K~) psi up to the phase residual.
    Eigen::VectorXcd state;
    double success_probability = 0.0;
    long be_applications = 0;
};

// m = 1 Hermitian dilation U = [[K~, S],[S, -K~]], S = sqrt(I - K~^2).
BlockEncoding block_encode(const fem::SpdSystem& system);

// Orthogonal matrix whose first column is v/||v|| (Householder completion).
Eigen::MatrixXd state_prep(const Eigen::VectorXd& v);

// Single QET branch on a normalized system state (no LCU register).
QetApplication qet_apply(const qsp::PhaseSequence& phases, const BlockEncoding& be,
                         const Eigen::VectorXcd& psi);

// Full gradient-flow run; t is the evolution parameter of the normalized flow.
QgfaOutput run_qgfa(const fem::SpdSystem& system, const QetBranch& branch1,
                    const QetBranch& branch2, double t, RunMode mode);

double success_probability(const QgfaOutput& output);

// Real part of -i * v with a check that the residue is negligible.
Eigen::VectorXd real_extract(const Eigen::VectorXcd& v, double tol = 1e-10);

class LayoutError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qgfa::qcirc
