#include "qgfa/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "qgfa/flow.hpp"
#include "qgfa/json_io.hpp"
#include "qgfa/numeric.hpp"
#include "qgfa/qmia.hpp"
#include "qgfa/softabs.hpp"

namespace qgfa::sweep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_base(const std::string& path) {
    const std::string ext = ".csv";
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
        return path.substr(0, path.size() - ext.size());
    }
    return path;
}

void run_pool(int n_tasks, const std::function<void(int)>& task) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int n_threads = static_cast<int>(std::min<unsigned>(hw, n_tasks == 0 ? 1 : n_tasks));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) task(i);
    };
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
}

}  // namespace

void SweepConfig::validate() const {
    require(!t_values.empty(), "SweepConfig: t_values must be non-empty");
    require(!p_values.empty(), "SweepConfig: p_values must be non-empty");
    for (int p : p_values) require(p > 0 && p % 2 == 0, "SweepConfig: p values must be positive and even");
    require(eta > 0.0 && eta < 1.0, "SweepConfig: eta must be in (0, 1)");
    require(epsilon_apx > 0.0, "SweepConfig: epsilon_apx must be > 0");
}

int qgfa_branch_degree(int p_total) {
    const int d = p_total / 2;  // phase budget per branch
    const int deg = d - 1;
    return deg % 2 == 0 ? deg : deg - 1;
}

int qmia_branch_degree(int p_total) {
    const int deg = p_total - 1;
    return deg % 2 == 1 ? deg : deg - 1;
}

fem::SpdSystem resolve_problem(const std::string& problem) {
    if (problem == "tensile") return fem::make_tensile_problem();
    if (problem == "cantilever") return fem::make_cantilever_problem();
    return io::system_from_json(io::load_json_file(problem));
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    const auto t_start = Clock::now();

    fem::SpdSystem system = resolve_problem(config.problem);
    system = fem::pad_to_power_of_two(system);
    const Eigen::VectorXd u_star = flow::solve_direct(system);

    SweepResult result;
    result.kappa = system.kappa;
    result.spectral_norm = system.spectral_norm;
    result.mode = config.mode;
    result.eta = config.eta;
    result.epsilon_apx = config.epsilon_apx;
    result.seed = config.seed;

    // Smoothing parameter per t, shared across the p axis.
    std::map<double, std::string> eps_errors;
    for (double t : config.t_values) {
        try {
            const double e1 = softabs::solve_epsilon(system.kappa, t, config.eta, softabs::GKind::G1);
            const double e2 = softabs::solve_epsilon(system.kappa, t, config.eta, softabs::GKind::G2);
            result.epsilon_smooth[t] = std::min(e1, e2);
        } catch (const std::exception& ex) {
            eps_errors[t] = ex.what();
        }
    }

    const int nt = static_cast<int>(config.t_values.size());
    const int np = static_cast<int>(config.p_values.size());
    result.cells.resize(static_cast<std::size_t>(nt) * np);

    auto cell_task = [&](int index) {
        const int ti = index / np;
        const int pi = index % np;
        SweepCell cell;
        cell.t = config.t_values[ti];
        cell.p = config.p_values[pi];
        const auto c0 = Clock::now();
        const auto deadline = c0 + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(config.cell_timeout_sec));
        try {
            if (auto it = eps_errors.find(cell.t); it != eps_errors.end()) {
                throw std::runtime_error("solve_epsilon failed: " + it->second);
            }
            const double eps = result.epsilon_smooth.at(cell.t);
            const int degree = qgfa_branch_degree(cell.p);
            require(degree >= 0, "run_sweep: p too small for a valid branch degree");

            approx::TargetFunction f1{approx::TargetKind::G1, cell.t, eps, 0.0, 0.0};
            approx::TargetFunction f2{approx::TargetKind::G2Tilde, cell.t, eps, 0.0, 0.0};
            qcirc::QetBranch b1{approx::chebyshev_fit(f1, degree), std::nullopt};
            qcirc::QetBranch b2{approx::chebyshev_fit(f2, degree), std::nullopt};
            if (Clock::now() > deadline) throw qsp::TimeoutError("cell timeout after fitting");

            if (config.mode == qcirc::RunMode::Circuit) {
                if (degree + 1 > config.phase_degree_cap) {
                    std::ostringstream os;
                    os << "phase count " << degree + 1 << " exceeds cap " << config.phase_degree_cap
                       << "; use ideal_polynomial mode";
                    throw std::runtime_error(os.str());
                }
                b1.phases = qsp::find_phases(b1.fit, config.phase_tol, deadline);
                b2.phases = qsp::find_phases(b2.fit, config.phase_tol, deadline);
            }
            const qcirc::QgfaOutput out = qcirc::run_qgfa(system, b1, b2, cell.t, config.mode);
            cell.R = flow::relative_error(out.u_qc, u_star);
            cell.success_prob = out.success_probability;
            cell.sup_err_g1 = b1.fit.sup_error;
            cell.sup_err_g2 = b2.fit.sup_error;
            cell.ok = true;
        } catch (const std::exception& ex) {
            cell.ok = false;
            cell.error = ex.what();
            cell.R = cell.success_prob = cell.sup_err_g1 = cell.sup_err_g2 =
                std::numeric_limits<double>::quiet_NaN();
        }
        cell.seconds = seconds_since(c0);
        result.cells[index] = std::move(cell);
    };
    run_pool(nt * np, cell_task);

    result.qmia.resize(np);
    auto qmia_task = [&](int pi) {
        QmiaCell cell;
        cell.p = config.p_values[pi];
        const auto c0 = Clock::now();
        const auto deadline = c0 + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(config.cell_timeout_sec));
        try {
            const int degree = qmia_branch_degree(cell.p);
            require(degree >= 1, "run_sweep: p too small for the inverse branch");
            approx::TargetFunction finv{approx::TargetKind::Ginv, 0.0, 0.0, system.kappa,
                                        config.epsilon_apx};
            qcirc::QetBranch inv{approx::chebyshev_fit(finv, degree), std::nullopt};
            if (config.mode == qcirc::RunMode::Circuit) {
                if (degree + 1 > config.phase_degree_cap) {
                    std::ostringstream os;
                    os << "phase count " << degree + 1 << " exceeds cap " << config.phase_degree_cap;
                    throw std::runtime_error(os.str());
                }
                inv.phases = qsp::find_phases(inv.fit, config.phase_tol, deadline);
            }
            const qmia::QmiaOutput out = qmia::run_qmia(system, inv, config.mode);
            cell.R_inv = flow::relative_error(out.u_inv, u_star);
            cell.ok = true;
        } catch (const std::exception& ex) {
            cell.ok = false;
            cell.error = ex.what();
            cell.R_inv = std::numeric_limits<double>::quiet_NaN();
        }
        cell.seconds = seconds_since(c0);
        result.qmia[pi] = std::move(cell);
    };
    run_pool(np, qmia_task);

    result.total_seconds = seconds_since(t_start);
    return result;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    const std::string base = csv_base(path);
    {
        const std::string main_path = base + ".csv";
        std::ofstream out(main_path);
        if (!out) throw std::runtime_error("emit_csv: cannot open " + main_path);
        out << "t,p,R,success_prob,sup_err_g1,sup_err_g2\n";
        for (const auto& c : result.cells) {
            out << format17(c.t) << ',' << c.p << ',' << format17(c.R) << ','
                << format17(c.success_prob) << ',' << format17(c.sup_err_g1) << ','
                << format17(c.sup_err_g2) << '\n';
        }
        if (!out) throw std::runtime_error("emit_csv: write failed for " + main_path);
    }
    {
        const std::string qmia_path = base + "_qmia.csv";
        std::ofstream out(qmia_path);
        if (!out) throw std::runtime_error("emit_csv: cannot open " + qmia_path);
        out << "p,R_inv\n";
        for (const auto& c : result.qmia) {
            out << c.p << ',' << format17(c.R_inv) << '\n';
        }
        if (!out) throw std::runtime_error("emit_csv: write failed for " + qmia_path);
    }
}

void emit_response_csv(const qsp::ResponseReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_response_csv: cannot open " + path);
    out << "x,target,response,abs_error\n";
    for (const auto& row : report.rows) {
        out << format17(row.x) << ',' << format17(row.target) << ',' << format17(row.response)
            << ',' << format17(row.abs_error) << '\n';
    }
    if (!out) throw std::runtime_error("emit_response_csv: write failed for " + path);
}

}  // namespace qgfa::sweep
