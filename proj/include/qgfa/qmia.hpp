#pragma once

// Quantum matrix-inverse baseline: a single QET branch applying the truncated
// inverse polynomial g_inv to the block-encoded system, sharing the circuit
// machinery of qcirc.

#include <Eigen/Dense>

#include "qgfa/qcirc.hpp"

namespace qgfa::qmia {

struct QmiaOutput {
    Eigen::VectorXd u_inv;
    double success_probability = 0.0;
    long be_applications = 0;
};

// u_inv = P[g_inv](K~) f / ||K||, reconstructed from ||f|| and the fit safety.
QmiaOutput run_qmia(const fem::SpdSystem& system, const qcirc::QetBranch& inverse_branch,
                    qcirc::RunMode mode);

// Same definition as flow::relative_error, kept for symmetry with the paper's
// R^inv notation.
double relative_error_inv(const Eigen::VectorXd& u_inv, const Eigen::VectorXd& u_star);

}  // namespace qgfa::qmia
