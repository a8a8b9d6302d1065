#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcorr/certify.hpp"

namespace qcorr {

struct ScanOptions {
    int dim = 4;
    int n_channels = 300;
    std::uint64_t seed = 1;
    SearchOptions search;
    /// Skip the unstructured random_cptp family.
    bool constructors_only = false;
};

struct ScanRecord {
    int index = 0;
    std::string family;
    bool completely_decohering = false;
    bool isotropic = false;
    bool unital = false;
    bool cp_pass = false;
    double max_violation = 0.0;
    /// Empty when consistent; otherwise "counterexample_candidate" (passes
    /// the commutativity test outside the predicted families) or "soundness"
    /// (a predicted family member failed the test).
    std::string anomaly;
};

struct FamilyCounts {
    int total = 0;
    int completely_decohering = 0;
    int isotropic = 0;
    int unital_mixing = 0;
    int creator = 0;
    int cp_pass = 0;
};

struct ScanReport {
    int dim = 0;
    std::map<std::string, FamilyCounts> families;
    std::vector<ScanRecord> records;
    std::vector<ScanRecord> flagged;
    int anomalies() const { return static_cast<int>(flagged.size()); }
};

/// Family names sampled by the scan at dimension d, in cycling order.
std::vector<std::string> scan_families(int d, bool constructors_only);

/// Draws channel `index` of the scan (family chosen by index, parameters
/// from substream `index` of `seed`).
KrausChannel sample_scan_channel(int d, const std::string& family, Rng& rng);

/// Census over sampled channels. The predicted commutativity-preserving set
/// is (unital or completely decohering) for d = 2 and (completely decohering
/// or isotropic) for d >= 3; any disagreement with the test is flagged.
/// Channels are processed in parallel with one substream per index.
ScanReport conjecture_scan(const ScanOptions& opts);

} // namespace qcorr
