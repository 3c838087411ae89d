#pragma once

#include <string>

#include <json.hpp>

#include "birelay/channel.hpp"
#include "birelay/solver.hpp"
#include "birelay/types.hpp"

namespace birelay {

/// Instance file schema:
/// {"n": N, "w": [wa, wb], "r": [ra, rb], "p": [pa, pb, pr],
///  "gains": {"ab": [...], "ba": [...], "ar": [...], "br": [...],
///            "ra": [...], "rb": [...]}}
/// Gains are linear squared magnitudes; rates bits/OFDM symbol.
nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);
ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

nlohmann::json outcome_to_json(const SolveOutcome& outcome);

ChannelConfig channel_config_from_json(const nlohmann::json& j);
nlohmann::json channel_config_to_json(const ChannelConfig& cfg);

SolverOptions solver_options_from_json(const nlohmann::json& j);

}  // namespace birelay
