#pragma once

#include "esn/lyapunov.hpp"
#include "esn/profile.hpp"
#include "esn/readout.hpp"
#include "esn/replica.hpp"
#include "esn/reservoir.hpp"

#include <json.hpp>

#include <iosfwd>

namespace esn {

using json = nlohmann::json;

/// Network document, format "esn-network-v1":
///
///   { "format": "esn-network-v1",
///     "spec": { "size", "wiring_probability", "spectral_radius", "input_dim", "bias", "seed" },
///     "achieved_spectral_radius": double,
///     "weights": { "rows", "cols", "storage": "dense", "values": [row-major] }
///             or { "rows", "cols", "storage": "triplets", "entries": [[i, j, w], ...] },
///     "input_weights": { "rows", "cols", "storage": "dense", "values": [row-major] },
///     "bias": [ ... ] }
///
/// W is written as triplets when fewer than 10% of its entries are nonzero.
json network_to_json(const NetworkRealization& net);
NetworkRealization network_from_json(const json& doc);

json spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const json& doc);

/// { "global", "excluded", "samples", "node": [gamma_i^2 or null] }
json consistency_report_to_json(const ConsistencyReport& report);
/// "node,gamma_sq" rows; excluded nodes have an empty value.
void write_consistency_csv(std::ostream& out, const ConsistencyReport& report);

/// "lag,M,M_squared,Gamma_R_squared,Gamma_R"; the Gamma columns are empty without a replica.
void write_memory_csv(std::ostream& out, const MemoryProfile& profile);
json memory_summary_to_json(const MemoryProfile& profile);

json lyapunov_report_to_json(const LyapunovReport& report);

/// "index,sigma_squared,level,retained": full-response PC sizes next to the
/// sorted consistency levels; discarded directions have an empty level.
void write_profile_csv(std::ostream& out, const ConsistencyProfile& profile);

json matrix_to_json(const MatrixXd& m);

/// Makes `out` print doubles in shortest round-trip form.
void use_round_trip_doubles(std::ostream& out);

}  // namespace esn
