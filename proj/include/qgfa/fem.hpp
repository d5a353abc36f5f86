#pragma once

// Plane-stress linear elasticity on 4-node quadrilateral meshes: assembly,
// Dirichlet blocking into diag(I, K_NN) form, and the two built-in benchmark
// problems. Dense storage throughout; problem sizes stay at desk scale.

#include <Eigen/Dense>
#include <array>
#include <map>
#include <stdexcept>
#include <vector>

namespace qgfa::fem {

struct Mesh {
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 4>> elements;  // counter-clockwise node indices

    int n_dofs() const { return 2 * static_cast<int>(nodes.size()); }
};

struct Material {
    double youngs_modulus = 1.0;
    double poisson_ratio = 0.0;  // in (-1, 0.5)
    double thickness = 1.0;

    void validate() const;
};

struct BcSpec {
    std::map<int, double> dirichlet;  // dof index -> prescribed displacement
    Eigen::VectorXd neumann_load;     // full-length; entries at Dirichlet dofs ignored
};

struct SpdSystem {
    Eigen::MatrixXd matrix;    // blocked K = diag(I, K_NN), or any SPD matrix
    Eigen::VectorXd load;      // f = (u_D ; f_N - K_ND u_D)
    Eigen::VectorXd hot_start; // u(0) = (u_D ; 0)
    double spectral_norm = 0.0;
    double kappa = 0.0;
    // permutation[i] = original mesh dof stored in blocked row i; empty when
    // the system was not produced by apply_bcs.
    std::vector<int> permutation;

    int dim() const { return static_cast<int>(matrix.rows()); }
    // Map a blocked-order solution back to mesh dof ordering.
    Eigen::VectorXd to_mesh_order(const Eigen::VectorXd& u_blocked) const;
};

class GeometryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class SingularSystemError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Structured grid of nx*ny quadrilaterals on [0,Lx]x[0,Ly]; nodes x-fastest.
Mesh build_mesh_rect(int nx, int ny, double Lx, double Ly);

// 8x8 element stiffness for a bilinear quad, 2x2 Gauss quadrature.
Eigen::Matrix<double, 8, 8> element_stiffness(const std::array<std::array<double, 2>, 4>& coords,
                                              const Material& material);

// Global stiffness, node-major (u_x, u_y) interleaved dof ordering.
Eigen::MatrixXd assemble_global(const Mesh& mesh, const Material& material);

// Dirichlet blocking per the K = diag(I, K_NN) reformulation.
SpdSystem apply_bcs(const Eigen::MatrixXd& K_global, const BcSpec& bcs);

// lambda_max / lambda_min via symmetric eigendecomposition.
double condition_number(const SpdSystem& system);

// Pad with an identity block (zero load / hot start) up to the next power of two.
SpdSystem pad_to_power_of_two(const SpdSystem& system);

// Built-in benchmark problems (3x3 tensile square, 3x1 cantilever strip).
SpdSystem make_tensile_problem();
SpdSystem make_cantilever_problem();

// Dof index helpers for the structured mesh (component 0 = u_x, 1 = u_y).
inline int dof_index(int node, int component) { return 2 * node + component; }

}  // namespace qgfa::fem
