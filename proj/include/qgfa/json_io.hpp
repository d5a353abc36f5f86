#pragma once

// JSON schemas for every file format the tools exchange: mesh/BC problem
// descriptions, assembled systems, Chebyshev fits, phase sequences, and sweep
// configurations.

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "qgfa/approx.hpp"
#include "qgfa/fem.hpp"
#include "qgfa/qsp.hpp"
#include "qgfa/sweep.hpp"

namespace qgfa::io {

using json = nlohmann::json;

struct MeshProblem {
    fem::Mesh mesh;
    fem::Material material;
    fem::BcSpec bcs;
};

MeshProblem mesh_problem_from_json(const json& j);
json system_to_json(const fem::SpdSystem& system);
fem::SpdSystem system_from_json(const json& j);

json fit_to_json(const approx::ChebyshevFit& fit);
approx::ChebyshevFit fit_from_json(const json& j);

// Phase documents embed the fit they realize so circuits can be rebuilt
// without re-solving.
json phases_to_json(const qsp::PhaseSequence& phases, const approx::ChebyshevFit& fit);
std::pair<qsp::PhaseSequence, approx::ChebyshevFit> phases_from_json(const json& j);

sweep::SweepConfig sweep_config_from_json(const json& j);

json load_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);

}  // namespace qgfa::io
