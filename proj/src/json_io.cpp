#include "qgfa/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "qgfa/numeric.hpp"

namespace qgfa::io {

namespace {

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json j = json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

approx::TargetKind kind_from_string(const std::string& s) {
    if (s == "g1") return approx::TargetKind::G1;
    if (s == "g2tilde") return approx::TargetKind::G2Tilde;
    if (s == "ginv") return approx::TargetKind::Ginv;
    throw std::invalid_argument("unknown target kind: " + s);
}

std::string kind_to_string(approx::TargetKind k) {
    switch (k) {
        case approx::TargetKind::G1: return "g1";
        case approx::TargetKind::G2Tilde: return "g2tilde";
        case approx::TargetKind::Ginv: return "ginv";
    }
    throw std::invalid_argument("unknown target kind");
}

json target_to_json(const approx::TargetFunction& f) {
    return json{{"kind", kind_to_string(f.kind)},
                {"t", f.t},
                {"epsilon_smooth", f.epsilon_smooth},
                {"kappa", f.kappa},
                {"epsilon_apx", f.epsilon_apx}};
}

approx::TargetFunction target_from_json(const json& j) {
    approx::TargetFunction f;
    f.kind = kind_from_string(j.at("kind").get<std::string>());
    f.t = j.value("t", 0.0);
    f.epsilon_smooth = j.value("epsilon_smooth", 0.0);
    f.kappa = j.value("kappa", 0.0);
    f.epsilon_apx = j.value("epsilon_apx", 0.0);
    return f;
}

}  // namespace

MeshProblem mesh_problem_from_json(const json& j) {
    MeshProblem p;
    for (const auto& n : j.at("nodes")) {
        p.mesh.nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    }
    for (const auto& e : j.at("elements")) {
        p.mesh.elements.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                                   e.at(3).get<int>()});
    }
    p.material.youngs_modulus = j.at("E").get<double>();
    p.material.poisson_ratio = j.at("nu").get<double>();
    p.material.thickness = j.value("thickness", 1.0);
    for (const auto& [key, val] : j.at("dirichlet").items()) {
        p.bcs.dirichlet[std::stoi(key)] = val.get<double>();
    }
    if (j.contains("loads")) {
        p.bcs.neumann_load = Eigen::VectorXd::Zero(p.mesh.n_dofs());
        for (const auto& [key, val] : j.at("loads").items()) {
            const int dof = std::stoi(key);
            require(dof >= 0 && dof < p.mesh.n_dofs(), "mesh_problem_from_json: load dof out of range");
            p.bcs.neumann_load[dof] = val.get<double>();
        }
    }
    return p;
}

json system_to_json(const fem::SpdSystem& system) {
    const int n = system.dim();
    json matrix = json::array();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) matrix.push_back(system.matrix(i, k));
    }
    return json{{"dim", n},
                {"matrix", matrix},
                {"load", vector_to_json(system.load)},
                {"hot_start", vector_to_json(system.hot_start)},
                {"kappa", system.kappa},
                {"spectral_norm", system.spectral_norm},
                {"permutation", system.permutation}};
}

fem::SpdSystem system_from_json(const json& j) {
    fem::SpdSystem s;
    const int n = j.at("dim").get<int>();
    const auto& m = j.at("matrix");
    require(static_cast<int>(m.size()) == n * n, "system_from_json: matrix size mismatch");
    s.matrix.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) s.matrix(i, k) = m[i * n + k].get<double>();
    }
    s.load = vector_from_json(j.at("load"));
    s.hot_start = vector_from_json(j.at("hot_start"));
    require(s.load.size() == n && s.hot_start.size() == n,
            "system_from_json: vector size mismatch");
    s.kappa = j.at("kappa").get<double>();
    s.spectral_norm = j.at("spectral_norm").get<double>();
    if (j.contains("permutation")) {
        s.permutation = j.at("permutation").get<std::vector<int>>();
    }
    return s;
}

json fit_to_json(const approx::ChebyshevFit& fit) {
    json j{{"parity", fit.parity == approx::Parity::Even ? "even" : "odd"},
           {"degree", fit.degree},
           {"coefficients", fit.coeffs},
           {"sup_error", fit.sup_error},
           {"safety", fit.safety}};
    if (fit.target) j["target"] = target_to_json(*fit.target);
    return j;
}

approx::ChebyshevFit fit_from_json(const json& j) {
    approx::ChebyshevFit fit;
    fit.parity = j.at("parity").get<std::string>() == "odd" ? approx::Parity::Odd
                                                            : approx::Parity::Even;
    fit.degree = j.at("degree").get<int>();
    fit.coeffs = j.at("coefficients").get<std::vector<double>>();
    fit.sup_error = j.at("sup_error").get<double>();
    fit.safety = j.at("safety").get<double>();
    if (j.contains("target")) fit.target = target_from_json(j.at("target"));
    return fit;
}

json phases_to_json(const qsp::PhaseSequence& phases, const approx::ChebyshevFit& fit) {
    return json{{"convention", phases.convention},
                {"phases", phases.phases},
                {"residual", phases.residual},
                {"target_id", phases.target_id},
                {"target_safety", phases.target_safety},
                {"fit", fit_to_json(fit)}};
}

std::pair<qsp::PhaseSequence, approx::ChebyshevFit> phases_from_json(const json& j) {
    qsp::PhaseSequence seq;
    seq.convention = j.at("convention").get<std::string>();
    if (seq.convention != qsp::kConvention) {
        throw std::invalid_argument("phases_from_json: unsupported convention " + seq.convention);
    }
    seq.phases = j.at("phases").get<std::vector<double>>();
    seq.residual = j.at("residual").get<double>();
    seq.target_id = j.value("target_id", "");
    seq.target_safety = j.at("target_safety").get<double>();
    return {seq, fit_from_json(j.at("fit"))};
}

sweep::SweepConfig sweep_config_from_json(const json& j) {
    sweep::SweepConfig c;
    c.problem = j.value("problem", std::string("tensile"));
    c.t_values = j.at("t_values").get<std::vector<double>>();
    c.p_values = j.at("p_values").get<std::vector<int>>();
    const std::string mode = j.value("mode", std::string("ideal_polynomial"));
    if (mode == "circuit") {
        c.mode = qcirc::RunMode::Circuit;
    } else if (mode == "ideal_polynomial") {
        c.mode = qcirc::RunMode::IdealPolynomial;
    } else {
        throw std::invalid_argument("sweep_config_from_json: unknown mode " + mode);
    }
    c.eta = j.value("eta", 1e-6);
    c.epsilon_apx = j.value("epsilon_apx", 1e-3);
    c.output = j.value("output", std::string("sweep"));
    c.seed = j.value("seed", 0UL);
    c.cell_timeout_sec = j.value("cell_timeout_sec", 300.0);
    c.phase_tol = j.value("phase_tol", 1e-8);
    c.phase_degree_cap = j.value("phase_degree_cap", 1024);
    return c;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace qgfa::io
