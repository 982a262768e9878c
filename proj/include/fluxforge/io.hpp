#pragma once

#include <string>

#include "json.hpp"

#include "fluxforge/approximant.hpp"
#include "fluxforge/connections.hpp"
#include "fluxforge/oned.hpp"

namespace fluxforge {

/// Malformed input with the offending byte offset.
struct FormatError : std::runtime_error {
    std::size_t offset;
    FormatError(const std::string& what, std::size_t off)
        : std::runtime_error(what + " (byte offset " + std::to_string(off) + ")"),
          offset(off) {}
};

/// FFLD: magic "FFLD", u16 LE version = 1, u16 LE dim, u32 LE cells,
/// f64 LE q, then cells^dim * dim f64 LE values, component-fastest,
/// axes row-major.
void write_ffld(const std::string& path, const VectorField& V, double q = 0.0);
std::pair<VectorField, double> read_ffld(const std::string& path);

ChargeSet charges_from_json(const nlohmann::json& j, int expected_dim = 0);
nlohmann::json charges_to_json(const ChargeSet& cs, int dim);
ChargeSet read_charges(const std::string& path, int expected_dim = 0);

nlohmann::json current_to_json(const OneCurrent& c);
OneCurrent current_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const FluxAuditReport& rep);
nlohmann::json records_to_json(const CubicMesh& mesh, const std::vector<CubeRecord>& recs);
nlohmann::json step_to_json(const StepFunction& s);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace fluxforge
