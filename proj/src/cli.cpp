#include "qcorr/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qcorr/certify.hpp"
#include "qcorr/error.hpp"
#include "qcorr/io.hpp"
#include "qcorr/msf.hpp"
#include "qcorr/sampling.hpp"
#include "qcorr/scan.hpp"

namespace qcorr::cli {

namespace {

std::uint64_t effective_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    static const std::uint64_t drawn = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    return drawn;
}

json config_echo(const RunConfig& cfg) {
    return {{"command", cfg.command},
            {"dim", cfg.dim},
            {"seed", effective_seed(cfg)},
            {"reproducible", cfg.seed.has_value()},
            {"tol", cfg.tol},
            {"budget", cfg.budget},
            {"samples", cfg.samples},
            {"in", cfg.in},
            {"channel", cfg.channel},
            {"format", cfg.format},
            {"require_mixing", cfg.require_mixing}};
}

SearchOptions search_options(const RunConfig& cfg) {
    SearchOptions so;
    so.budget = cfg.budget;
    so.tol = cfg.tol;
    return so;
}

const std::string& channel_path(const RunConfig& cfg) {
    const std::string& path = cfg.channel.empty() ? cfg.in : cfg.channel;
    if (path.empty()) throw InvalidInput("a channel file is required (--channel)");
    return path;
}

KrausChannel load_channel(const RunConfig& cfg) {
    KrausChannel ch = io::channel_from_json(io::read_file(channel_path(cfg)));
    if (cfg.dim != 0 && cfg.dim != ch.dim()) {
        throw DimensionMismatch("--dim " + std::to_string(cfg.dim) + " does not match channel dimension " +
                                std::to_string(ch.dim()));
    }
    return ch;
}

} // namespace

void validate(const RunConfig& cfg) {
    if (cfg.dim < 0 || cfg.dim > 16) throw InvalidInput("--dim must be between 1 and 16");
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw InvalidInput("--tol must be positive");
    if (cfg.budget < 1) throw InvalidInput("--budget must be positive");
    if (cfg.samples < 0) throw InvalidInput("--samples must be nonnegative");
    if (cfg.format != "json" && cfg.format != "text") throw InvalidInput("--format must be json or text");
}

CommandResult cmd_classify(const RunConfig& cfg) {
    const KrausChannel ch = load_channel(cfg);
    Rng rng(effective_seed(cfg));
    const ClassificationVerdict v = classify(ch, search_options(cfg), rng);
    json result = io::verdict_to_json(v);
    result["dim"] = ch.dim();
    result["channel_kind"] = ch.kind();
    result["scope"] = ch.dim() == 2   ? "qubit: unital or completely decohering, otherwise creator"
                      : ch.dim() == 3 ? "qutrit: completely decohering or isotropic, otherwise creator"
                                      : "d >= 4: detectors only, no completeness claim";
    return {v.label == ChannelClass::unresolved ? failure : ok, {{"result", result}}};
}

CommandResult cmd_witness(const RunConfig& cfg) {
    const KrausChannel ch = load_channel(cfg);
    Rng rng(effective_seed(cfg));
    const WitnessSearch ws = search_witness(ch, search_options(cfg), rng);
    json result = {{"dim", ch.dim()}, {"found", ws.witness.has_value()}, {"cp_test", io::cp_verdict_to_json(ws.cp)}};
    if (ws.witness) {
        result["witness"] = io::witness_to_json(*ws.witness);
    } else {
        result["message"] = "none found within budget";
    }
    return {ws.witness ? ok : not_found, {{"result", result}}};
}

CommandResult cmd_verify_witness(const RunConfig& cfg) {
    const KrausChannel ch = load_channel(cfg);
    if (cfg.in.empty()) throw InvalidInput("--in must name a witness or report file");
    const json doc = io::read_file(cfg.in);
    const json* w = &doc;
    if (doc.contains("result")) {
        const json& r = doc["result"];
        if (r.contains("witness")) w = &r["witness"];
        else if (r.contains("evidence") && r["evidence"].is_object() && r["evidence"].contains("input")) w = &r["evidence"];
    }
    if (!w->is_object() || !w->contains("input")) throw InvalidInput("no witness found in " + cfg.in);
    const bool valid = io::revalidate_witness(*w, ch, cfg.tol);
    return {valid ? ok : failure, {{"result", {{"revalidated", valid}}}}};
}

CommandResult cmd_msf(const RunConfig& cfg) {
    if (cfg.in.empty()) throw InvalidInput("--in must name a state file");
    const BipartiteState s = io::state_from_json(io::read_file(cfg.in));
    if (s.dimA() != s.dimB()) throw DimensionMismatch("msf needs a d x d state");
    Rng rng(effective_seed(cfg));
    MsfOptions mo;
    mo.budget = cfg.budget;
    json result;
    int code = ok;
    auto msf_json = [&](const MsfResult& r) {
        return json{{"F", r.F}, {"fidelity", r.fidelity}, {"optimal_unitary", io::matrix_to_json(r.optimal_unitary)}};
    };
    if (cfg.channel.empty()) {
        result = msf_json(msf(s, mo, rng));
    } else {
        const KrausChannel ch = io::channel_from_json(io::read_file(cfg.channel));
        if (ch.dim() != s.dimB()) throw DimensionMismatch("channel does not act on subsystem B");
        const bool unital = is_unital(ch);
        if (!unital && cfg.require_mixing) throw InvalidInput("channel is not unital (mixing) but --require-mixing was given");
        if (unital) {
            const MsfBound b = verify_msf_bound(s, ch, mo, rng);
            result = msf_json(b.before);
            result["after"] = msf_json(b.after);
            result["F_after"] = b.after.F;
            result["slack"] = b.slack;
            result["bound_holds"] = b.holds;
            code = b.holds ? ok : failure;
        } else {
            result = msf_json(msf(s, mo, rng));
            const MsfResult after = msf(apply_local_B(ch, s), mo, rng);
            result["after"] = msf_json(after);
            result["F_after"] = after.F;
            result["bound_holds"] = nullptr;
            result["note"] = "channel is not unital; the MSF bound is not claimed";
        }
    }
    result["dim"] = s.dimA();
    return {code, {{"result", result}}};
}

CommandResult cmd_scan(const RunConfig& cfg) {
    ScanOptions so;
    so.dim = cfg.dim == 0 ? 4 : cfg.dim;
    if (so.dim < 2) throw InvalidInput("scan needs --dim >= 2");
    so.n_channels = cfg.samples;
    so.seed = effective_seed(cfg);
    so.search = search_options(cfg);
    so.constructors_only = cfg.constructors_only;
    const ScanReport r = conjecture_scan(so);
    json result = io::scan_to_json(r);
    result["prediction"] = so.dim == 2 ? "commutativity preserving <=> unital or completely decohering"
                                       : "commutativity preserving <=> completely decohering or isotropic";
    result["status"] = "Monte Carlo evidence, not proof";
    return {r.anomalies() == 0 ? ok : failure, {{"result", result}}};
}

namespace {

struct Group {
    std::string name;
    double worst = 0.0;
    int checks = 0;
    bool pass = true;
    void check(bool ok, double value) {
        ++checks;
        worst = std::max(worst, value);
        pass = pass && ok;
    }
};

} // namespace

CommandResult cmd_selftest(const RunConfig& cfg) {
    const double tol = cfg.tol;
    const int n = std::max(1, std::min(cfg.samples, 50));
    const std::uint64_t seed = effective_seed(cfg);
    std::vector<Group> groups;

    {
        Group g{"hermitian_eig_residual"};
        Rng rng = Rng::substream(seed, 1);
        for (int i = 0; i < n; ++i) {
            const int d = 2 + i % 7;
            const Matrix x = ginibre_matrix(d, d, rng);
            const Matrix m = x + x.adjoint();
            const Spectrum sp = hermitian_eig(m);
            const Matrix rec = sp.vectors * sp.values.cast<Complex>().asDiagonal() * sp.vectors.adjoint();
            const double r = (m - rec).norm() / (1.0 + m.norm());
            const double o = (sp.vectors.adjoint() * sp.vectors - Matrix::Identity(d, d)).norm();
            g.check(r <= tol && o <= tol, std::max(r, o));
        }
        groups.push_back(g);
    }
    {
        Group g{"tensor_partial_trace"};
        Rng rng = Rng::substream(seed, 2);
        for (int i = 0; i < n; ++i) {
            const DensityMatrix a = random_density(2 + i % 3, 2, rng);
            const DensityMatrix b = random_density(2 + i % 2, 2, rng);
            const Matrix ab = tensor(a.matrix(), b.matrix());
            const double r1 = (partial_trace(ab, a.dim(), b.dim(), Subsystem::A) - a.matrix()).norm();
            const double r2 = (partial_trace(ab, a.dim(), b.dim(), Subsystem::B) - b.matrix()).norm();
            g.check(r1 <= tol && r2 <= tol, std::max(r1, r2));
        }
        groups.push_back(g);
    }
    {
        Group g{"half_classical_roundtrip"};
        Rng rng = Rng::substream(seed, 3);
        for (int i = 0; i < n; ++i) {
            const int dB = 2 + i % 3;
            const BipartiteState s = random_half_classical(2 + i % 2, dB, rng.integer(1, dB), rng);
            const ClassicalityReport rep = is_classical_on_B(s, std::max(tol, 1e-12));
            g.check(rep.is_classical_on_B && rep.quantumness <= tol, rep.quantumness);
        }
        groups.push_back(g);
    }
    {
        Group g{"choi_kraus_roundtrip"};
        Rng rng = Rng::substream(seed, 4);
        for (int i = 0; i < n; ++i) {
            const int d = 2 + i % 3;
            const KrausChannel ch = random_cptp(d, rng.integer(1, d * d), rng);
            const KrausChannel back = kraus_from_choi(choi_from_kraus(ch));
            double worst = 0.0;
            for (const auto& e : matrix_units(d)) worst = std::max(worst, (ch.act(e) - back.act(e)).norm());
            g.check(worst <= tol, worst);
        }
        groups.push_back(g);
    }
    {
        Group g{"adjoint_duality"};
        Rng rng = Rng::substream(seed, 5);
        for (int i = 0; i < n; ++i) {
            const int d = 2 + i % 3;
            const KrausChannel ch = random_cptp(d, 2, rng);
            const KrausChannel adj = adjoint(ch);
            const Matrix a = ginibre_matrix(d, d, rng), b = ginibre_matrix(d, d, rng);
            const double r = std::abs((a * ch.act(b)).trace() - (adj.act(a) * b).trace());
            g.check(r <= tol, r);
        }
        groups.push_back(g);
    }
    {
        Group g{"detector_roundtrips"};
        Rng rng = Rng::substream(seed, 6);
        for (int i = 0; i < std::min(n, 20); ++i) {
            const int d = 2 + i % 3;
            const KrausChannel cd = random_completely_decohering(d, d, rng);
            g.check(is_completely_decohering(cd, std::max(tol, 1e-12)).has_value(), 0.0);
            const Matrix u = haar_unitary(d, rng);
            const double p = rng.uniform(0.1, 0.9) * isotropic_p_range(d, GammaKind::unitary).hi;
            const auto fit = is_isotropic(make_isotropic(d, GammaKind::unitary, u, p), std::max(tol, 1e-12));
            const double err = fit ? std::abs(fit->p - p) : 1.0;
            g.check(fit.has_value() && err <= tol, err);
            const KrausChannel mix = random_unital_mixture(d, 2, rng);
            const Matrix id = Matrix::Identity(d, d);
            const double r = (mix.act(id) - id).norm();
            g.check(r <= tol, r);
        }
        groups.push_back(g);
    }
    {
        Group g{"isotropic_p_range_boundaries"};
        Rng rng = Rng::substream(seed, 7);
        for (int d = 2; d <= 4; ++d) {
            const Matrix u = haar_unitary(d, rng);
            for (GammaKind kind : {GammaKind::unitary, GammaKind::transpose_unitary}) {
                const PRange r = isotropic_p_range(d, kind);
                auto min_eig = [&](double p) { return hermitian_eig(isotropic_choi(d, kind, u, p), 1e-8).values(0); };
                const double at_lo = std::abs(min_eig(r.lo));
                const double at_hi = std::abs(min_eig(r.hi));
                const bool outside_negative = min_eig(r.lo - 1e-3) < 0.0 && min_eig(r.hi + 1e-3) < 0.0;
                g.check(at_lo <= tol && at_hi <= tol && outside_negative, std::max(at_lo, at_hi));
            }
        }
        groups.push_back(g);
    }
    {
        Group g{"seed_determinism"};
        Rng a = Rng::substream(seed, 8), b = Rng::substream(seed, 8);
        const Matrix x = haar_unitary(4, a), y = haar_unitary(4, b);
        g.check(x == y, (x - y).norm());
        groups.push_back(g);
    }

    json out = json::array();
    bool all = true;
    for (const auto& g : groups) {
        out.push_back({{"group", g.name}, {"pass", g.pass}, {"checks", g.checks}, {"worst", g.worst}});
        all = all && g.pass;
    }
    return {all ? ok : failure, {{"result", {{"groups", out}, {"all_pass", all}}}}};
}

CommandResult cmd_make_channel(const RunConfig& cfg) {
    const int d = cfg.dim == 0 ? 2 : cfg.dim;
    Rng rng(effective_seed(cfg));
    json params = json::object();
    KrausChannel ch = [&]() -> KrausChannel {
        if (cfg.kind == "depolarizing") {
            params = {{"p", cfg.p}};
            return make_depolarizing(d, cfg.p);
        }
        if (cfg.kind == "dephasing") return make_dephasing(d);
        if (cfg.kind == "isotropic") {
            const GammaKind kind = cfg.gamma == "transpose" ? GammaKind::transpose_unitary : GammaKind::unitary;
            const Matrix u = cfg.seed ? haar_unitary(d, rng) : Matrix(Matrix::Identity(d, d));
            params = {{"p", cfg.p}, {"gamma_kind", to_string(kind)}, {"u", io::matrix_to_json(u)}};
            return make_isotropic(d, kind, u, cfg.p);
        }
        if (cfg.kind == "block_mixing") {
            const std::vector<double> e{std::sqrt(0.5), std::sqrt(0.5)};
            const std::vector<Matrix> us{Matrix::Identity(2, 2), rotation2(cfg.angle)};
            params = {{"e", e}, {"rotation_angles", {0.0, cfg.angle}}};
            return make_block_mixing(e, us);
        }
        if (cfg.kind == "amplitude_damping") {
            if (d != 2) throw InvalidInput("amplitude_damping is a qubit channel");
            if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw InvalidInput("damping probability must lie in [0, 1]");
            Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
            e0(0, 0) = 1.0;
            e0(1, 1) = std::sqrt(1.0 - cfg.p);
            e1(0, 1) = std::sqrt(cfg.p);
            params = {{"gamma", cfg.p}};
            return validate_cptp({e0, e1}).with_kind("amplitude_damping");
        }
        if (cfg.kind == "unital_mixture") return random_unital_mixture(d, 2, rng);
        if (cfg.kind == "random_cptp") return random_cptp(d, cfg.env > 0 ? cfg.env : d * d, rng);
        if (cfg.kind == "completely_decohering") return random_completely_decohering(d, d, rng);
        throw InvalidInput("unknown channel kind '" + cfg.kind + "'");
    }();
    return {ok, io::channel_to_json(ch, params)};
}

CommandResult cmd_make_state(const RunConfig& cfg) {
    const int d = cfg.dim == 0 ? 2 : cfg.dim;
    Rng rng(effective_seed(cfg));
    Vector phi = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    const Matrix proj = phi * phi.adjoint();
    if (cfg.kind == "phi_plus") return {ok, io::state_to_json(BipartiteState(d, d, DensityMatrix(proj)))};
    if (cfg.kind == "isotropic") {
        const Matrix m = cfg.p * proj + (1.0 - cfg.p) * Matrix::Identity(d * d, d * d) / static_cast<double>(d * d);
        return {ok, io::state_to_json(BipartiteState(d, d, DensityMatrix(m)))};
    }
    if (cfg.kind == "random") return {ok, io::state_to_json(random_bipartite(d, d, rng))};
    throw InvalidInput("unknown state kind '" + cfg.kind + "'");
}

CommandResult run_command(const RunConfig& cfg) {
    static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> table{
        {"classify", cmd_classify},   {"witness", cmd_witness},       {"verify-witness", cmd_verify_witness},
        {"msf", cmd_msf},             {"scan", cmd_scan},             {"selftest", cmd_selftest},
        {"make-channel", cmd_make_channel}, {"make-state", cmd_make_state}};
    const auto start = std::chrono::steady_clock::now();
    CommandResult res;
    try {
        validate(cfg);
        const auto it = table.find(cfg.command);
        if (it == table.end()) throw InvalidInput("unknown command '" + cfg.command + "'");
        res = it->second(cfg);
    } catch (const InvalidInput& e) {
        res = {invalid_input, {{"error", e.what()}}};
    } catch (const json::exception& e) {
        res = {invalid_input, {{"error", std::string("malformed JSON: ") + e.what()}}};
    }
    if (cfg.command == "make-channel" || cfg.command == "make-state") {
        return res;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json report = std::move(res.report);
    report["config"] = config_echo(cfg);
    report["exit_code"] = res.exit_code;
    report["library"] = {{"name", "qcorr"}, {"version", version}};
    report["notes"] = {{"choi_convention", io::choi_convention}, {"sampling_measures", io::sampling_measures}};
    report["timing"] = {{"seconds", seconds}};
    res.report = std::move(report);
    return res;
}

namespace {

void render(std::ostringstream& os, const json& j, const std::string& prefix, int depth) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object() && depth < 3) {
            render(os, value, name, depth + 1);
        } else if (value.is_array()) {
            if (key == "groups" || key == "flagged") {
                for (const auto& item : value) os << name << ": " << item.dump() << '\n';
            }
        } else if (!value.is_object()) {
            os << name << ": " << value.dump() << '\n';
        }
    }
}

} // namespace

std::string render_text(const json& report) {
    std::ostringstream os;
    render(os, report, "", 0);
    return os.str();
}

int main(int argc, char** argv) {
    CLI::App app{"qcorr: local quantum-correlation creation by quantum channels"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::uint64_t seed = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--dim", cfg.dim, "system dimension");
        sub->add_option("--seed", seed, "64-bit seed (reproducible mode)");
        sub->add_option("--tol", cfg.tol, "decision tolerance")->capture_default_str();
        sub->add_option("--budget", cfg.budget, "objective evaluations per search")->capture_default_str();
        sub->add_option("--samples", cfg.samples, "sample count")->capture_default_str();
        sub->add_option("--in", cfg.in, "input file (state or witness)");
        sub->add_option("--channel", cfg.channel, "channel JSON file");
        sub->add_option("--out", cfg.out, "write the report here instead of stdout");
        sub->add_option("--format", cfg.format, "json or text")->capture_default_str();
        sub->add_flag("--require-mixing", cfg.require_mixing, "reject non-unital channels (msf)");
    };
    std::vector<CLI::App*> subs;
    const std::pair<const char*, const char*> commands[] = {
        {"classify", "label a channel and cross-check it against the commutativity test"},
        {"witness", "search for a half-classical input whose output is not classical"},
        {"verify-witness", "re-check a saved witness against a channel"},
        {"msf", "maximum singlet fraction of a state, before and after a channel on B"},
        {"scan", "census of sampled channels against the predicted families"},
        {"selftest", "numerical self-checks of the library"}};
    for (const auto& [name, help] : commands) {
        subs.push_back(app.add_subcommand(name, help));
        common(subs.back());
    }
    subs[4]->add_flag("--constructors-only", cfg.constructors_only, "skip random CPTP channels");
    for (const auto& [name, help] : {std::pair{"make-channel", "write a channel JSON file"},
                                     std::pair{"make-state", "write a bipartite state JSON file"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        common(sub);
        sub->add_option("--kind", cfg.kind)->required();
        sub->add_option("--p", cfg.p, "mixing parameter");
        sub->add_option("--gamma", cfg.gamma, "unitary or transpose (isotropic)");
        sub->add_option("--angle", cfg.angle, "second block rotation angle (block_mixing)");
        sub->add_option("--env", cfg.env, "environment dimension (random_cptp)");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid_input;
    }
    for (CLI::App* sub : subs) {
        if (sub->parsed()) {
            cfg.command = sub->get_name();
            if (sub->count("--seed") > 0) cfg.seed = seed;
        }
    }

    const CommandResult res = run_command(cfg);
    const std::string body = cfg.format == "text" && !res.report.contains("kraus") && !res.report.contains("dimA")
                                 ? render_text(res.report)
                                 : res.report.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            std::cerr << "cannot write " << cfg.out << '\n';
            return invalid_input;
        }
        f << body;
    }
    if (res.exit_code == invalid_input && res.report.contains("error")) {
        std::cerr << "error: " << res.report["error"].get<std::string>() << '\n';
    }
    return res.exit_code;
}

} // namespace qcorr::cli
