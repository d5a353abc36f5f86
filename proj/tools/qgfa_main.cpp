// Command-line driver: assemble benchmark systems, solve them classically or
// through the quantum pipeline, run parameter sweeps, and export phase/response
// data for inspection.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>

#include "qgfa/flow.hpp"
#include "qgfa/json_io.hpp"
#include "qgfa/qmia.hpp"
#include "qgfa/softabs.hpp"
#include "qgfa/sweep.hpp"

namespace {

using namespace qgfa;

fem::SpdSystem assemble_from_path(const std::string& input) {
    if (input == "tensile" || input == "cantilever") return sweep::resolve_problem(input);
    const io::MeshProblem p = io::mesh_problem_from_json(io::load_json_file(input));
    p.material.validate();
    return fem::apply_bcs(fem::assemble_global(p.mesh, p.material), p.bcs);
}

qcirc::RunMode parse_mode(const std::string& mode) {
    if (mode == "circuit") return qcirc::RunMode::Circuit;
    if (mode == "ideal_polynomial") return qcirc::RunMode::IdealPolynomial;
    throw CLI::ValidationError("--mode", "must be circuit or ideal_polynomial");
}

int cmd_assemble(const std::string& input, const std::string& output) {
    fem::SpdSystem sys = assemble_from_path(input);
    std::printf("dofs: %d\n", sys.dim());
    std::printf("kappa: %.6f\n", sys.kappa);
    std::printf("spectral_norm: %.12g\n", sys.spectral_norm);
    if (!output.empty()) {
        io::write_json_file(io::system_to_json(sys), output);
        std::printf("wrote %s\n", output.c_str());
    }
    return 0;
}

int cmd_solve(const std::string& problem, const std::string& method, double t, int p,
              const std::string& mode_str, double eta, double eps_apx, double phase_tol,
              const std::string& output) {
    fem::SpdSystem sys = fem::pad_to_power_of_two(sweep::resolve_problem(problem));
    const Eigen::VectorXd u_star = flow::solve_direct(sys);
    const qcirc::RunMode mode = parse_mode(mode_str);

    Eigen::VectorXd u;
    if (method == "classical") {
        u = t > 0.0 ? flow::gradient_flow(flow::normalized(sys), t).u_t : u_star;
    } else if (method == "qgfa") {
        if (t <= 0.0 || p <= 0) throw CLI::ValidationError("solve", "qgfa needs --t and --p");
        const double e1 = softabs::solve_epsilon(sys.kappa, t, eta, softabs::GKind::G1);
        const double e2 = softabs::solve_epsilon(sys.kappa, t, eta, softabs::GKind::G2);
        const double eps = std::min(e1, e2);
        const int degree = sweep::qgfa_branch_degree(p);
        qcirc::QetBranch b1{
            approx::chebyshev_fit({approx::TargetKind::G1, t, eps, 0.0, 0.0}, degree), {}};
        qcirc::QetBranch b2{
            approx::chebyshev_fit({approx::TargetKind::G2Tilde, t, eps, 0.0, 0.0}, degree), {}};
        if (mode == qcirc::RunMode::Circuit) {
            b1.phases = qsp::find_phases(b1.fit, phase_tol);
            b2.phases = qsp::find_phases(b2.fit, phase_tol);
        }
        const qcirc::QgfaOutput out = qcirc::run_qgfa(sys, b1, b2, t, mode);
        u = out.u_qc;
        std::printf("success_probability: %.6g\n", out.success_probability);
        std::printf("epsilon_smooth: %.6g\n", eps);
    } else if (method == "qmia") {
        if (p <= 0) throw CLI::ValidationError("solve", "qmia needs --p");
        const int degree = sweep::qmia_branch_degree(p);
        qcirc::QetBranch inv{
            approx::chebyshev_fit({approx::TargetKind::Ginv, 0.0, 0.0, sys.kappa, eps_apx}, degree),
            {}};
        if (mode == qcirc::RunMode::Circuit) {
            inv.phases = qsp::find_phases(inv.fit, phase_tol);
        }
        const qmia::QmiaOutput out = qmia::run_qmia(sys, inv, mode);
        u = out.u_inv;
        std::printf("success_probability: %.6g\n", out.success_probability);
    } else {
        throw CLI::ValidationError("--method", "must be classical, qgfa, or qmia");
    }

    const double residual = (sys.matrix * u_star - sys.load).norm();
    std::printf("kappa: %.6f\n", sys.kappa);
    std::printf("R: %.17g\n", flow::relative_error(u, u_star));
    std::printf("direct_residual: %.3e\n", residual);
    if (!output.empty()) {
        nlohmann::json j{{"u", std::vector<double>(u.data(), u.data() + u.size())},
                         {"u_star", std::vector<double>(u_star.data(), u_star.data() + u_star.size())}};
        io::write_json_file(j, output);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    const sweep::SweepConfig config = io::sweep_config_from_json(io::load_json_file(config_path));
    const sweep::SweepResult result = sweep::run_sweep(config);
    sweep::emit_csv(result, config.output);
    int failed = 0;
    for (const auto& c : result.cells) {
        if (!c.ok) {
            std::fprintf(stderr, "cell t=%g p=%d failed: %s\n", c.t, c.p, c.error.c_str());
            ++failed;
        }
    }
    for (const auto& c : result.qmia) {
        if (!c.ok) {
            std::fprintf(stderr, "qmia p=%d failed: %s\n", c.p, c.error.c_str());
            ++failed;
        }
    }
    std::printf("kappa: %.6f\n", result.kappa);
    std::printf("cells: %zu (+%zu qmia), %d failed, %.2f s\n", result.cells.size(),
                result.qmia.size(), failed, result.total_seconds);
    std::printf("wrote %s.csv and %s_qmia.csv\n", config.output.c_str(), config.output.c_str());
    return 0;
}

int cmd_phases(const std::string& kind, double t, double eps_smooth, double kappa, double eps_apx,
               int degree, double tol, const std::string& output) {
    approx::TargetFunction f;
    if (kind == "g1") {
        f = {approx::TargetKind::G1, t, eps_smooth, 0.0, 0.0};
    } else if (kind == "g2tilde") {
        f = {approx::TargetKind::G2Tilde, t, eps_smooth, 0.0, 0.0};
    } else if (kind == "ginv") {
        f = {approx::TargetKind::Ginv, 0.0, 0.0, kappa, eps_apx};
    } else {
        throw CLI::ValidationError("--kind", "must be g1, g2tilde, or ginv");
    }
    const approx::ChebyshevFit fit = approx::chebyshev_fit(f, degree);
    const qsp::PhaseSequence phases = qsp::find_phases(fit, tol);
    std::printf("degree: %d  sup_error: %.3e  safety: %.6g  residual: %.3e\n", fit.degree,
                fit.sup_error, fit.safety, phases.residual);
    io::write_json_file(io::phases_to_json(phases, fit), output);
    std::printf("wrote %s\n", output.c_str());
    return 0;
}

int cmd_response(const std::string& phases_path, int grid, const std::string& output) {
    const auto [phases, fit] = io::phases_from_json(io::load_json_file(phases_path));
    if (!fit.target) {
        throw std::runtime_error("response: phase document carries no target parameters");
    }
    const qsp::ResponseReport rep = qsp::response_report(phases, *fit.target, grid);
    std::printf("max_abs_error: %.6e\nmean_abs_error: %.6e\n", rep.max_abs_error,
                rep.mean_abs_error);
    sweep::emit_response_csv(rep, output);
    std::printf("wrote %s\n", output.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-flow and matrix-inverse quantum linear solvers on FEM benchmarks"};
    app.require_subcommand(1);

    std::string input = "tensile", output, problem = "tensile", method = "classical";
    std::string mode = "ideal_polynomial", config_path, kind = "g1", phases_path;
    double t = 0.0, eta = 1e-6, eps_apx = 1e-3, eps_smooth = 0.0, kappa = 0.0, tol = 1e-8;
    int p = 0, degree = 0, grid = 2000;

    auto* assemble = app.add_subcommand("assemble", "Mesh/BC JSON or built-in name -> system JSON");
    assemble->add_option("--input", input, "tensile, cantilever, or a mesh JSON path");
    assemble->add_option("--output", output, "system JSON path");

    auto* solve = app.add_subcommand("solve", "Solve a system and report R against the direct solve");
    solve->add_option("--problem", problem, "tensile, cantilever, or a system JSON path");
    solve->add_option("--method", method, "classical | qgfa | qmia");
    solve->add_option("--t", t, "evolution parameter (normalized flow units)");
    solve->add_option("--p", p, "total phase-factor budget");
    solve->add_option("--mode", mode, "circuit | ideal_polynomial");
    solve->add_option("--eta", eta, "relative-error budget for the smoothing parameter");
    solve->add_option("--epsilon-apx", eps_apx, "inverse-approximation threshold");
    solve->add_option("--phase-tol", tol, "phase solver tolerance");
    solve->add_option("--output", output, "solution JSON path");

    auto* sw = app.add_subcommand("sweep", "Run a (t, p) sweep from a config JSON");
    sw->add_option("--config", config_path, "sweep config JSON")->required();

    auto* ph = app.add_subcommand("phases", "Fit a target and solve its phase factors");
    ph->add_option("--kind", kind, "g1 | g2tilde | ginv");
    ph->add_option("--t", t, "evolution parameter (g1/g2tilde)");
    ph->add_option("--epsilon-smooth", eps_smooth, "smoothing parameter (g1/g2tilde)");
    ph->add_option("--kappa", kappa, "condition number (ginv)");
    ph->add_option("--epsilon-apx", eps_apx, "approximation threshold (ginv)");
    ph->add_option("--degree", degree, "polynomial degree")->required();
    ph->add_option("--tol", tol, "phase solver tolerance");
    ph->add_option("--output", output, "phases JSON path")->required();

    auto* resp = app.add_subcommand("response", "Evaluate a phase document's response curve");
    resp->add_option("--phases", phases_path, "phases JSON path")->required();
    resp->add_option("--grid", grid, "number of grid points on [0, 1]");
    resp->add_option("--output", output, "response CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (assemble->parsed()) return cmd_assemble(input, output);
        if (solve->parsed())
            return cmd_solve(problem, method, t, p, mode, eta, eps_apx, tol, output);
        if (sw->parsed()) return cmd_sweep(config_path);
        if (ph->parsed()) return cmd_phases(kind, t, eps_smooth, kappa, eps_apx, degree, tol, output);
        if (resp->parsed()) return cmd_response(phases_path, grid, output);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 2;
}
