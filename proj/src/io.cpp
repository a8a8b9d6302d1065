#include "qcorr/io.hpp"

#include <fstream>

#include "qcorr/error.hpp"

namespace qcorr::io {

namespace {

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw InvalidInput("expected a complex number as [re, im], got " + j.dump());
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

int require_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw InvalidInput(std::string("missing or non-integer field \"") + key + "\"");
    }
    return j[key].get<int>();
}

} // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
        throw InvalidInput("expected a non-empty nested array matrix");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidInput("matrix rows have different lengths");
        }
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
    return m;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("expected a non-empty vector");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

json channel_to_json(const KrausChannel& ch, const json& params) {
    json kraus = json::array();
    for (const auto& e : ch.ops()) kraus.push_back(matrix_to_json(e));
    return {{"dim", ch.dim()}, {"kraus", std::move(kraus)}, {"meta", {{"kind", ch.kind()}, {"params", params}}}};
}

KrausChannel channel_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("channel file must hold a JSON object");
    const int d = require_int(j, "dim");
    if (d < 1) throw InvalidInput("channel dim must be positive");
    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
        throw InvalidInput("channel needs a non-empty \"kraus\" array");
    }
    std::vector<Matrix> ops;
    for (const auto& k : j["kraus"]) {
        Matrix e = matrix_from_json(k);
        if (e.rows() != d || e.cols() != d) throw DimensionMismatch("Kraus operator is not dim x dim");
        ops.push_back(std::move(e));
    }
    KrausChannel ch = validate_cptp(std::move(ops));
    if (j.contains("meta") && j["meta"].is_object() && j["meta"].contains("kind") && j["meta"]["kind"].is_string()) {
        ch = ch.with_kind(j["meta"]["kind"].get<std::string>());
    }
    return ch;
}

json state_to_json(const BipartiteState& s) {
    return {{"dimA", s.dimA()}, {"dimB", s.dimB()}, {"matrix", matrix_to_json(s.matrix())}};
}

BipartiteState state_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("state file must hold a JSON object");
    const int dA = require_int(j, "dimA");
    const int dB = require_int(j, "dimB");
    if (!j.contains("matrix")) throw InvalidInput("state needs a \"matrix\" field");
    return BipartiteState(dA, dB, DensityMatrix(matrix_from_json(j["matrix"])));
}

json cp_verdict_to_json(const CpVerdict& v) {
    json out = {{"preserving", v.preserving},
                {"max_violation", v.max_violation},
                {"evaluations", v.evaluations},
                {"budget_exhausted", v.budget_exhausted},
                {"meaning", v.preserving ? "no violation found within budget" : "violation proven by witness pair"}};
    if (v.witness_pair) {
        out["witness_pair"] = {{"phi", vector_to_json(v.witness_pair->first.amplitudes())},
                               {"psi", vector_to_json(v.witness_pair->second.amplitudes())}};
    }
    return out;
}

json witness_to_json(const CreationWitness& w) {
    return {{"phi", vector_to_json(w.phi.amplitudes())},
            {"psi", vector_to_json(w.psi.amplitudes())},
            {"input", state_to_json(w.input)},
            {"output", state_to_json(w.output)},
            {"input_quantumness", w.input_quantumness},
            {"output_quantumness", w.output_quantumness}};
}

json verdict_to_json(const ClassificationVerdict& v) {
    json out = {{"label", to_string(v.label)}, {"consistent_with_cp_test", v.consistent}, {"cp_test", cp_verdict_to_json(v.cp)}};
    struct Evidence {
        json operator()(const std::monostate&) const { return nullptr; }
        json operator()(const DecoheringEvidence& e) const { return {{"basis", matrix_to_json(e.basis)}}; }
        json operator()(const UnitalEvidence& e) const { return {{"unitality_residual", e.residual}}; }
        json operator()(const IsotropicFit& f) const {
            json j = {{"p", f.p}, {"gamma_kind", to_string(f.kind)}, {"fit_residual", f.residual}};
            j["u"] = f.u ? matrix_to_json(*f.u) : json(nullptr);
            j["gamma_identifiable"] = f.u.has_value();
            return j;
        }
        json operator()(const CreationWitness& w) const { return witness_to_json(w); }
    };
    out["evidence"] = std::visit(Evidence{}, v.evidence);
    return out;
}

json scan_to_json(const ScanReport& r) {
    json fams = json::object();
    for (const auto& [name, c] : r.families) {
        fams[name] = {{"total", c.total},
                      {"completely_decohering", c.completely_decohering},
                      {"isotropic", c.isotropic},
                      {"unital_mixing", c.unital_mixing},
                      {"creator", c.creator},
                      {"cp_pass", c.cp_pass}};
    }
    json flagged = json::array();
    for (const auto& f : r.flagged) {
        flagged.push_back({{"index", f.index},
                           {"family", f.family},
                           {"anomaly", f.anomaly},
                           {"completely_decohering", f.completely_decohering},
                           {"isotropic", f.isotropic},
                           {"unital", f.unital},
                           {"cp_pass", f.cp_pass},
                           {"max_violation", f.max_violation}});
    }
    return {{"dim", r.dim}, {"channels", r.records.size()}, {"families", fams}, {"anomalies", r.anomalies()}, {"flagged", flagged}};
}

bool revalidate_witness(const json& witness, const KrausChannel& ch, double tol) {
    const BipartiteState input = state_from_json(witness.at("input"));
    if (input.dimB() != ch.dim()) return false;
    if (!is_classical_on_B(input, 1e-9).is_classical_on_B) return false;
    return quantumness_on_B(apply_local_B(ch, input)) > tol;
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in " + path + ": " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace qcorr::io
