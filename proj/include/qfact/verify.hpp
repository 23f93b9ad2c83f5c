#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfact/eichler.hpp"

namespace qfact {

/// Builds the atom table a check factors with. The default enumerates the
/// canonical atoms; tests substitute a damaged table to see checks fail.
using AtomTableFactory =
    std::function<std::shared_ptr<const AtomTable>(const EichlerOrder& order, int bound)>;

struct VerifyConfig {
    std::uint64_t seed = 20240611;
    /// Replaces the per-instance sample count of every sampled check.
    std::optional<int> samples;
    /// Worker threads; checks run independently and results keep check order.
    int threads = 1;
    /// Check ids to run (1..12); empty runs all.
    std::vector<int> checks;
    AtomTableFactory atom_table;
};

struct CheckResult {
    int id = 0;
    std::string name;
    std::string anchor;
    std::size_t instances = 0;
    bool pass = false;
    nlohmann::json counterexample; ///< null when the check passes
    double seconds = 0;            ///< wall time; not part of the JSON report
};

struct VerificationReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    /// Deterministic for a fixed config (no timings).
    nlohmann::json to_json() const;
};

constexpr int kCheckCount = 12;

/// Short name and anchor statement of a check id.
std::pair<std::string, std::string> check_description(int id);

CheckResult run_check(int id, const VerifyConfig& config);
VerificationReport run_verification(const VerifyConfig& config);

} // namespace qfact
