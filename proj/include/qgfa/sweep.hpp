#pragma once

// Experiment driver: builds a benchmark system, runs the (t, p) relative-error
// grid for the gradient-flow solver and the p grid for the inverse baseline,
// and emits the CSV data behind the error heatmaps and response curves.

#include <map>
#include <string>
#include <vector>

#include "qgfa/fem.hpp"
#include "qgfa/qcirc.hpp"
#include "qgfa/qsp.hpp"

namespace qgfa::sweep {

struct SweepConfig {
    std::string problem = "tensile";  // tensile | cantilever | path to a system JSON
    std::vector<double> t_values;
    std::vector<int> p_values;        // even; p = 2d split across the two branches
    qcirc::RunMode mode = qcirc::RunMode::IdealPolynomial;
    double eta = 1e-6;
    double epsilon_apx = 1e-3;
    std::string output = "sweep";
    unsigned long seed = 0;           // recorded for randomized property suites
    double cell_timeout_sec = 300.0;
    double phase_tol = 1e-8;
    int phase_degree_cap = 1024;

    void validate() const;
};

struct SweepCell {
    double t = 0.0;
    int p = 0;
    double R = 0.0;
    double success_prob = 0.0;
    double sup_err_g1 = 0.0;
    double sup_err_g2 = 0.0;
    double seconds = 0.0;
    bool ok = false;
    std::string error;
};

struct QmiaCell {
    int p = 0;
    double R_inv = 0.0;
    double seconds = 0.0;
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;      // t-major, then p, matching the config grids
    std::vector<QmiaCell> qmia;
    double kappa = 0.0;
    double spectral_norm = 0.0;
    std::map<double, double> epsilon_smooth;  // t -> solved smoothing parameter
    qcirc::RunMode mode = qcirc::RunMode::IdealPolynomial;
    double eta = 0.0;
    double epsilon_apx = 0.0;
    unsigned long seed = 0;
    double total_seconds = 0.0;
};

// Largest even polynomial degree realizable with a budget of d phases.
int qgfa_branch_degree(int p_total);
// Odd degree for the single-branch inverse run with p phases.
int qmia_branch_degree(int p_total);

SweepResult run_sweep(const SweepConfig& config);

// Writes <base>.csv and <base>_qmia.csv with 17-significant-digit decimals.
void emit_csv(const SweepResult& result, const std::string& path);

void emit_response_csv(const qsp::ResponseReport& report, const std::string& path);

// Resolve the config's problem field to a system (built-ins or a JSON file).
fem::SpdSystem resolve_problem(const std::string& problem);

}  // namespace qgfa::sweep
