#include "qcorr/scan.hpp"

#include <cmath>

#include "qcorr/error.hpp"
#include "qcorr/parallel.hpp"

namespace qcorr {

std::vector<std::string> scan_families(int d, bool constructors_only) {
    std::vector<std::string> f{"completely_decohering", "isotropic_unitary", "isotropic_transpose",
                               "depolarizing", "unital_mixture"};
    if (d == 3) f.emplace_back("block_mixing");
    if (!constructors_only) f.emplace_back("random_cptp");
    return f;
}

KrausChannel sample_scan_channel(int d, const std::string& family, Rng& rng) {
    if (family == "completely_decohering") return random_completely_decohering(d, rng.integer(1, d), rng);
    if (family == "isotropic_unitary") return random_isotropic(d, GammaKind::unitary, rng);
    if (family == "isotropic_transpose") return random_isotropic(d, GammaKind::transpose_unitary, rng);
    if (family == "depolarizing") {
        const PRange r = isotropic_p_range(d, GammaKind::unitary);
        return make_depolarizing(d, rng.uniform(r.lo, r.hi));
    }
    if (family == "unital_mixture") return random_unital_mixture(d, rng.integer(2, 4), rng);
    if (family == "block_mixing" && d == 3) {
        const int n = rng.integer(2, 3);
        std::vector<double> e(static_cast<std::size_t>(n));
        const auto w = random_probability(n, rng);
        for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = std::sqrt(w[static_cast<std::size_t>(i)]);
        std::vector<Matrix> us;
        for (int i = 0; i < n; ++i) us.push_back(haar_unitary(2, rng));
        return make_block_mixing(e, us);
    }
    if (family == "random_cptp") return random_cptp(d, rng.integer(1, d * d), rng);
    throw InvalidInput("unknown scan family: " + family);
}

ScanReport conjecture_scan(const ScanOptions& opts) {
    if (opts.dim < 2) throw InvalidInput("conjecture_scan: dimension must be at least 2");
    if (opts.n_channels < 0) throw InvalidInput("conjecture_scan: negative channel count");
    const int d = opts.dim;
    const auto families = scan_families(d, opts.constructors_only);

    std::vector<ScanRecord> records(static_cast<std::size_t>(opts.n_channels));
    parallel_for(opts.n_channels, [&](int i) {
        Rng rng = Rng::substream(opts.seed, static_cast<std::uint64_t>(i));
        ScanRecord r;
        r.index = i;
        r.family = families[static_cast<std::size_t>(i) % families.size()];
        const KrausChannel ch = sample_scan_channel(d, r.family, rng);
        r.unital = is_unital(ch);
        r.completely_decohering = is_completely_decohering(ch).has_value();
        r.isotropic = is_isotropic(ch).has_value();
        const CpVerdict cp = is_commutativity_preserving(ch, opts.search, rng);
        r.cp_pass = cp.preserving;
        r.max_violation = cp.max_violation;
        const bool predicted = d == 2 ? (r.unital || r.completely_decohering)
                                      : (r.completely_decohering || r.isotropic);
        if (r.cp_pass && !predicted) r.anomaly = "counterexample_candidate";
        if (!r.cp_pass && predicted) r.anomaly = "soundness";
        records[static_cast<std::size_t>(i)] = std::move(r);
    });

    ScanReport report;
    report.dim = d;
    for (const auto& f : families) report.families[f];
    for (const auto& r : records) {
        FamilyCounts& c = report.families[r.family];
        ++c.total;
        c.completely_decohering += r.completely_decohering;
        c.isotropic += r.isotropic;
        c.unital_mixing += r.unital;
        c.creator += !r.cp_pass;
        c.cp_pass += r.cp_pass;
        if (!r.anomaly.empty()) report.flagged.push_back(r);
    }
    report.records = std::move(records);
    return report;
}

} // namespace qcorr
