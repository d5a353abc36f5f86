#pragma once

// QSP phase factors for parity-pure bounded polynomials, plus the scalar
// response used to validate them.
//
// Stored convention ("qet-reflection-im-sym-v1"): with R(x) = [[x, s],[s, -x]],
// s = sqrt(1 - x^2), and E(phi) = diag(e^{i phi}, e^{-i phi}),
//
//   response(Phi, x) = Im < 0 | E(phi_0) R(x) E(phi_1) ... R(x) E(phi_{d-1}) | 0 >.
//
// This is exactly the quantity the block-encoded circuit extracts when the
// projector-controlled z-rotations are sandwiched between X/H on the QSP
// ancilla, so phases validated here drop into the circuit unchanged.

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgfa/approx.hpp"

namespace qgfa::qsp {

inline constexpr const char* kConvention = "qet-reflection-im-sym-v1";

struct PhaseSequence {
    std::vector<double> phases;  // length d = degree + 1
    std::string convention = kConvention;
    std::string target_id;
    double residual = 0.0;       // sup |response - p_fit| on the residual grid
    double target_safety = 1.0;  // safety factor of the fit the phases realize

    int degree() const { return static_cast<int>(phases.size()) - 1; }
};

class PhaseSolverError : public std::runtime_error {
  public:
    PhaseSolverError(const std::string& msg, double residual)
        : std::runtime_error(msg), residual(residual) {}
    double residual;
};

class TimeoutError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Deadline = std::chrono::steady_clock::time_point;
inline Deadline no_deadline() { return Deadline::max(); }

// Damped Gauss-Newton on the squared response error at ceil((d+1)/2) Chebyshev
// nodes, symmetric phase ansatz, started from the trivial sequence
// (pi/4, 0, ..., 0, pi/4). Deterministic. Throws PhaseSolverError when the
// residual stays above tol, TimeoutError past the deadline.
PhaseSequence find_phases(const approx::ChebyshevFit& fit, double tol,
                          Deadline deadline = no_deadline());

// Scalar response of the stored convention; |response| <= 1 by unitarity.
double qsp_response(const PhaseSequence& phases, double x);

struct ResponseRow {
    double x;
    double target;
    double response;  // de-scaled by the fit safety factor
    double abs_error;
};

struct ResponseReport {
    std::vector<ResponseRow> rows;
    double max_abs_error = 0.0;
    double mean_abs_error = 0.0;
};

// Response vs analytic target on a uniform grid over [0, 1].
ResponseReport response_report(const PhaseSequence& phases, const approx::TargetFunction& f,
                               int grid);

// Residual of a phase sequence against a fit, recomputed on the same
// deterministic Chebyshev grid find_phases uses.
double recompute_residual(const PhaseSequence& phases, const approx::ChebyshevFit& fit);

}  // namespace qgfa::qsp
