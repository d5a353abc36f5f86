#pragma once

// Classical gradient-flow mathematics on an SPD system, evaluated exactly
// through the eigendecomposition. These are the oracles every quantum result
// is judged against.

#include <Eigen/Dense>

#include "qgfa/fem.hpp"

namespace qgfa::flow {

struct EigenSystem {
    Eigen::VectorXd eigenvalues;   // ascending, all > 0
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

struct FlowSolution {
    Eigen::VectorXd u_t;
    double t = 0.0;
    double delta_norm = 0.0;  // ||u(t) - u*||
};

EigenSystem eigen_system(const fem::SpdSystem& system);

// Pi(u) = 1/2 u^T K u - u^T f.
double energy(const fem::SpdSystem& system, const Eigen::VectorXd& u);

// u* = K^{-1} f with residual check.
Eigen::VectorXd solve_direct(const fem::SpdSystem& system);

// u(t) = e^{-Kt} u(0) + K^{-1}(I - e^{-Kt}) f via the eigenbasis.
FlowSolution gradient_flow(const fem::SpdSystem& system, double t);
FlowSolution gradient_flow(const EigenSystem& es, const Eigen::VectorXd& u0,
                           const Eigen::VectorXd& f, double t);

// e^{-t/kappa} ||delta(0)||.
double error_bound(double delta0_norm, double kappa, double t);

// Smallest sufficient t with ||delta(t)|| <= zeta: -kappa ln(zeta/||delta0||).
double select_time(double kappa, double zeta, double delta0_norm);

// ||u_approx - u*|| / ||u*||.
double relative_error(const Eigen::VectorXd& u_approx, const Eigen::VectorXd& u_star);

// Rescale (K, f) by 1/||K|| so the spectrum lies in [1/kappa, 1]; u* and the
// hot start are unchanged. The quantum path evolves under this normalization.
fem::SpdSystem normalized(const fem::SpdSystem& system);

}  // namespace qgfa::flow
