#include "qmem/analysis.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace qmem {

using json = nlohmann::ordered_json;

double fidelity(const PureState& target, const PureState& actual) {
    if (std::abs(target.norm2() - 1.0) > 1e-8)
        throw FockError("fidelity target must be normalized");
    double f = std::norm(inner_product(target, actual));
    return f < 0.0 ? 0.0 : (f > 1.0 + 1e-12 ? 1.0 : std::min(f, 1.0));
}

double fidelity(const PureState& target, const MixedState& actual) {
    if (std::abs(target.norm2() - 1.0) > 1e-8)
        throw FockError("fidelity target must be normalized");
    double f = 0.0;
    for (const auto& [w, s] : actual.branches) f += w * std::norm(inner_product(target, s));
    return std::min(f, 1.0);
}

std::map<PatternClass, double> exact_success_probability(const ProtocolConfig& config) {
    if (config.provenance == MemoryProvenance::heralded)
        throw FockError("exact enumeration requires ideal or noisy memory provenance");
    double c1 = config.provenance == MemoryProvenance::noisy ? config.c1 : 0.0;
    double c2 = config.provenance == MemoryProvenance::noisy ? config.c2 : 0.0;
    MemoryState memory = build_memory_state(c1, c2, config.phi_a, config.phi_b);

    std::map<PatternClass, double> probs{{PatternClass::SuccessIdentity, 0.0},
                                         {PatternClass::SuccessPhaseFlip, 0.0},
                                         {PatternClass::Reject, 0.0}};
    for (const auto& branch :
         enumerate_store(memory, config.alpha, config.beta, config.bell_detector))
        probs[branch.pattern_class] += branch.probability;
    return probs;
}

std::pair<double, double> wilson_interval(long successes, long trials) {
    if (trials <= 0) return {0.0, 0.0};
    const double z = 1.959963984540054;  // 97.5% normal quantile
    double n = double(trials);
    double phat = double(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    double lo = center - half, hi = center + half;
    return {lo < 0.0 ? 0.0 : lo, hi > 1.0 ? 1.0 : hi};
}

RunStatistics aggregate(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw FockError("aggregate requires at least one trial record");
    RunStatistics stats;
    stats.trials = long(records.size());
    double fid_sum = 0.0;
    double attempts_sum = 0.0;
    for (const auto& rec : records) {
        stats.class_counts[rec.pattern_class] += 1;
        attempts_sum += rec.prep_attempts_a + rec.prep_attempts_b;
        if (rec.pattern_class != PatternClass::Reject) {
            stats.accepts += 1;
            fid_sum += rec.readout_fidelity.value_or(0.0);
        }
    }
    stats.acceptance_rate = double(stats.accepts) / double(stats.trials);
    std::tie(stats.acceptance_lo, stats.acceptance_hi) =
        wilson_interval(stats.accepts, stats.trials);
    if (stats.accepts > 0) stats.mean_fidelity_on_accept = fid_sum / double(stats.accepts);
    stats.mean_prep_attempts = attempts_sum / (2.0 * double(stats.trials));
    return stats;
}

std::string RunStatistics::to_json_string() const {
    json obj;
    obj["trials"] = trials;
    obj["accepts"] = accepts;
    obj["acceptance_rate"] = acceptance_rate;
    obj["acceptance_interval_95"] = {{"lo", acceptance_lo}, {"hi", acceptance_hi}};
    obj["interval_method"] = "wilson_score";
    if (mean_fidelity_on_accept)
        obj["mean_fidelity_on_accept"] = *mean_fidelity_on_accept;
    else
        obj["mean_fidelity_on_accept"] = nullptr;
    obj["mean_prep_attempts"] = mean_prep_attempts;
    json counts = json::object();
    for (const auto& [cls, count] : class_counts) counts[to_string(cls)] = count;
    obj["class_counts"] = counts;
    return obj.dump();
}

std::string RunStatistics::csv_header() {
    return "trials,accepts,acceptance_rate,acceptance_lo,acceptance_hi,"
           "mean_fidelity_on_accept,mean_prep_attempts,success_identity,"
           "success_phase_flip,reject";
}

std::string RunStatistics::to_csv_row() const {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto count_of = [this](PatternClass c) {
        auto it = class_counts.find(c);
        return it == class_counts.end() ? 0L : it->second;
    };
    std::string fid = mean_fidelity_on_accept ? fmt(*mean_fidelity_on_accept) : "";
    return std::to_string(trials) + "," + std::to_string(accepts) + "," + fmt(acceptance_rate) +
           "," + fmt(acceptance_lo) + "," + fmt(acceptance_hi) + "," + fid + "," +
           fmt(mean_prep_attempts) + "," + std::to_string(count_of(PatternClass::SuccessIdentity)) +
           "," + std::to_string(count_of(PatternClass::SuccessPhaseFlip)) + "," +
           std::to_string(count_of(PatternClass::Reject));
}

}  // namespace qmem
