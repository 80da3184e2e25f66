#ifndef QMEM_ANALYSIS_HPP
#define QMEM_ANALYSIS_HPP

#include <map>
#include <optional>
#include <vector>

#include "qmem/protocol.hpp"

namespace qmem {

struct RunStatistics {
    long trials = 0;
    long accepts = 0;
    double acceptance_rate = 0.0;
    double acceptance_lo = 0.0;  // 95% Wilson score interval
    double acceptance_hi = 0.0;
    std::optional<double> mean_fidelity_on_accept;
    double mean_prep_attempts = 0.0;
    std::map<PatternClass, long> class_counts;

    std::string to_json_string() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

// F = |<target|actual>|^2, extended to mixtures by the branch-weighted sum.
double fidelity(const PureState& target, const PureState& actual);
double fidelity(const PureState& target, const MixedState& actual);

// Full enumeration, no sampling. Requires ideal or noisy provenance.
std::map<PatternClass, double> exact_success_probability(const ProtocolConfig& config);

RunStatistics aggregate(const std::vector<TrialRecord>& records);

// 95% binomial score (Wilson) interval.
std::pair<double, double> wilson_interval(long successes, long trials);

}  // namespace qmem

#endif  // QMEM_ANALYSIS_HPP
