#include "qmem/detection.hpp"

#include <algorithm>
#include <cmath>

#include "qmem/elements.hpp"

namespace qmem {

std::string ClickPattern::str() const {
    std::string out;
    for (const auto& [mode, n] : clicks) {
        if (!out.empty()) out += ",";
        out += mode.name + ":" + std::to_string(n);
    }
    return out;
}

std::vector<OutcomeBranch> enumerate_outcomes(const PureState& state,
                                              const std::vector<ModeLabel>& detectors,
                                              const DetectorModel& model) {
    double n2 = state.norm2();
    if (std::abs(n2 - 1.0) > 1e-8)
        throw FockError("enumerate_outcomes requires a normalized state (norm^2 = " +
                        std::to_string(n2) + ")");

    // Partition basis terms by exact detector occupancy signature. Tracing
    // out the detector modes leaves each partition's residual pure, for both
    // detector models; the bucket model only coarsens the reported pattern.
    std::map<std::vector<int>, PureState> partitions;
    for (const auto& [cfg, amp] : state.terms()) {
        std::vector<int> signature;
        signature.reserve(detectors.size());
        OccupationConfig residual_cfg = cfg;
        for (const auto& det : detectors) {
            signature.push_back(occupancy(cfg, det));
            residual_cfg.erase(det);
        }
        partitions[signature].add_term(residual_cfg, amp);
    }

    std::vector<OutcomeBranch> branches;
    for (const auto& [signature, partition] : partitions) {
        OutcomeBranch branch;
        branch.probability = partition.norm2();
        if (branch.probability < kPruneEpsilon) continue;
        for (std::size_t i = 0; i < detectors.size(); ++i) {
            int n = signature[i];
            if (n > 0) branch.pattern.clicks[detectors[i]] = model.number_resolving ? n : 1;
        }
        branch.residual = normalize(partition).first;
        branches.push_back(std::move(branch));
    }
    return branches;
}

OutcomeBranch sample_outcome(const PureState& state, const std::vector<ModeLabel>& detectors,
                             const DetectorModel& model, Rng& rng) {
    auto branches = enumerate_outcomes(state, detectors, model);
    double u = rng.next_double();
    double acc = 0.0;
    for (const auto& branch : branches) {
        acc += branch.probability;
        if (u < acc) return branch;
    }
    return branches.back();
}

ClickPattern apply_dark_counts(const ClickPattern& pattern, const std::vector<ModeLabel>& detectors,
                               const DetectorModel& model, Rng& rng) {
    ClickPattern out = pattern;
    for (const auto& det : detectors) {
        if (rng.bernoulli(model.dark_prob)) {
            if (model.number_resolving)
                out.clicks[det] += 1;
            else
                out.clicks[det] = 1;
        }
    }
    return out;
}

MixedState apply_loss(const PureState& state, const ModeLabel& mode, double eta) {
    if (eta < 0.0 || eta > 1.0) throw FockError("transmissivity must be in [0, 1]");
    auto [normalized, norm] = normalize(state);
    if (eta >= 1.0) return MixedState::pure(normalized);

    ModeLabel sink = loss_mode(mode.name);
    for (const auto& occupied : normalized.occupied_modes())
        if (occupied == sink) sink = loss_mode(mode.name + "'");

    double t = std::sqrt(eta), r = std::sqrt(1.0 - eta);
    auto coupler = LinearModeMap::from_rules({
        {mode, {{mode, Complex(t)}, {sink, Complex(r)}}},
        {sink, {{mode, Complex(r)}, {sink, Complex(-t)}}},
    });
    PureState coupled = apply_mode_map(normalized, coupler);

    MixedState out;
    for (auto& branch : enumerate_outcomes(coupled, {sink}, DetectorModel::resolving()))
        out.branches.emplace_back(branch.probability, std::move(branch.residual));
    return out;
}

MixedState apply_loss(const MixedState& state, const ModeLabel& mode, double eta) {
    MixedState out;
    for (const auto& [weight, branch] : state.branches) {
        MixedState thinned = apply_loss(branch, mode, eta);
        for (auto& [w, s] : thinned.branches) out.branches.emplace_back(weight * w, std::move(s));
    }
    return out;
}

}  // namespace qmem
