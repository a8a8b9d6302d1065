#pragma once

#include <string>

#include <json.hpp>

#include "qcorr/certify.hpp"
#include "qcorr/channels.hpp"
#include "qcorr/scan.hpp"
#include "qcorr/states.hpp"

namespace qcorr::io {

using nlohmann::json;

/// Row-major nested arrays of [re, im] pairs.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// { "dim", "kraus": [matrix, ...], "meta": { "kind", "params" } }.
json channel_to_json(const KrausChannel& ch, const json& params = json::object());
/// Parses and validates (trace preservation, Choi positivity).
KrausChannel channel_from_json(const json& j);

/// { "dimA", "dimB", "matrix" }.
json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const json& j);

json cp_verdict_to_json(const CpVerdict& v);
json witness_to_json(const CreationWitness& w);
json verdict_to_json(const ClassificationVerdict& v);
json scan_to_json(const ScanReport& r);

/// Reloads a serialized witness and checks it against `ch`: the input must
/// be classical on B (quantumness <= 1e-9) and (I (x) ch)(input) must have
/// quantumness above `tol`.
bool revalidate_witness(const json& witness, const KrausChannel& ch, double tol);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

inline constexpr const char* choi_convention =
    "J = (L (x) I)(|Phi+><Phi+|), |Phi+> = sum_i |ii>/sqrt(d), unit trace, output leg first";
inline constexpr const char* sampling_measures =
    "unitaries: Haar (Ginibre QR); states: Hilbert-Schmidt induced (Ginibre); channels: Stinespring Haar isometry; "
    "probabilities: flat Dirichlet";

} // namespace qcorr::io
