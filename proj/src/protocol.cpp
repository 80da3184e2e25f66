#include "qmem/protocol.hpp"

#include <cmath>

namespace qmem {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Complex phase(double radians) { return std::polar(1.0, radians); }

// Negates every term with an odd excitation number on `mode`.
PureState flip_phase_on(const PureState& state, const ModeLabel& mode) {
    PureState out;
    for (const auto& [cfg, amp] : state.terms())
        out.add_term(cfg, occupancy(cfg, mode) % 2 == 1 ? -amp : amp);
    return out;
}
}  // namespace

const char* to_string(MemoryProvenance p) {
    switch (p) {
        case MemoryProvenance::ideal: return "ideal";
        case MemoryProvenance::heralded: return "heralded";
        case MemoryProvenance::noisy: return "noisy";
    }
    return "?";
}

const char* to_string(PatternClass c) {
    switch (c) {
        case PatternClass::SuccessIdentity: return "success_identity";
        case PatternClass::SuccessPhaseFlip: return "success_phase_flip";
        case PatternClass::Reject: return "reject";
    }
    return "?";
}

ModeLabel memory_mode(const std::string& name) { return ensemble_mode(name); }

ModeLabel output_mode(char pol) { return photon_mode(std::string("out.") + pol); }

PreparedPair prepare_entangled_pair(double p, double phi, const DetectorModel& model,
                                    const ModeLabel& m1, const ModeLabel& m2,
                                    int max_attempts, Rng& rng) {
    if (p <= 0.0 || p >= 1.0) throw FockError("emission probability must be in (0, 1)");

    ModeLabel s1 = photon_mode("stokes." + m1.name);
    ModeLabel s2 = photon_mode("stokes." + m2.name);
    ModeLabel d1 = detector_mode("D1");
    ModeLabel d2 = detector_mode("D2");
    std::vector<ModeLabel> detectors{d1, d2};

    // Stokes modes interfere at the 50/50 BS and land on the detectors.
    auto splitter = LinearModeMap::from_rules({
        {s1, {{d1, kInvSqrt2}, {d2, kInvSqrt2}}},
        {s2, {{d1, kInvSqrt2}, {d2, -kInvSqrt2}}},
    });

    double amp_stay = std::sqrt(1.0 - p);
    double amp_emit = std::sqrt(p);

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        PureState vac = PureState::vacuum();
        PureState factor1 =
            vac * Complex(amp_stay) +
            apply_creation(apply_creation(vac, m1), s1) * Complex(amp_emit);
        PureState attempt_state =
            factor1 * Complex(amp_stay) +
            apply_creation(apply_creation(factor1, m2), s2) * (amp_emit * phase(phi));
        attempt_state = apply_mode_map(attempt_state, splitter);

        MixedState pre = model.efficiency < 1.0
                             ? apply_loss(apply_loss(attempt_state, d1, model.efficiency), d2,
                                          model.efficiency)
                             : MixedState::pure(attempt_state);
        double u = rng.next_double();
        double acc = 0.0;
        const PureState* chosen = &pre.branches.back().second;
        for (const auto& [w, s] : pre.branches) {
            acc += w;
            if (u < acc) {
                chosen = &s;
                break;
            }
        }

        OutcomeBranch outcome = sample_outcome(*chosen, detectors, model, rng);
        ClickPattern pattern = apply_dark_counts(outcome.pattern, detectors, model, rng);

        bool clicked1 = pattern.clicks.count(d1) > 0;
        bool clicked2 = pattern.clicks.count(d2) > 0;
        if (!clicked1 && !clicked2) continue;  // re-pump and retry
        if (clicked1 && clicked2) continue;    // ambiguous herald sign
        if (model.number_resolving) {
            int count = clicked1 ? pattern.clicks.at(d1) : pattern.clicks.at(d2);
            if (count != 1) continue;  // two-photon signature excluded
        }

        PureState residual = outcome.residual;
        if (clicked2) residual = flip_phase_on(residual, m2);  // feed-forward sign repair
        return {residual, attempt};
    }
    throw FockError("preparation exceeded " + std::to_string(max_attempts) + " attempts");
}

MemoryState build_memory_state(double c1, double c2, double phi_a, double phi_b) {
    if (c1 < 0.0 || c2 < 0.0) throw FockError("vacuum admixture coefficients must be >= 0");

    auto pair_state = [](const std::string& n1, const std::string& n2, double phi) {
        PureState vac = PureState::vacuum();
        return (apply_creation(vac, memory_mode(n1)) +
                apply_creation(vac, memory_mode(n2)) * phase(phi)) *
               Complex(kInvSqrt2);
    };
    PureState pair_a = pair_state("S_A1", "S_A2", phi_a);
    PureState pair_b = pair_state("S_B1", "S_B2", phi_b);
    PureState vac = PureState::vacuum();

    MemoryState memory;
    memory.provenance = (c1 == 0.0 && c2 == 0.0) ? MemoryProvenance::ideal
                                                 : MemoryProvenance::noisy;
    double norm = (1.0 + c1) * (1.0 + c2);
    memory.state.branches = {
        {c1 * c2 / norm, vac},
        {c1 / norm, pair_b},
        {c2 / norm, pair_a},
        {1.0 / norm, tensor_product(pair_a, pair_b)},
    };
    std::erase_if(memory.state.branches, [](const auto& b) { return b.first == 0.0; });
    return memory;
}

PatternClass classify_pattern(const ClickPattern& pattern) {
    if (pattern.clicks.size() != 2) return PatternClass::Reject;
    char pol[2], arm[2];
    int i = 0;
    for (const auto& [mode, count] : pattern.clicks) {
        if (count != 1) return PatternClass::Reject;
        // Detector names follow D_<pol>^<arm>.
        if (mode.kind != ModeKind::detector || mode.name.size() != 5 ||
            mode.name.compare(0, 2, "D_") != 0 || mode.name[3] != '^')
            return PatternClass::Reject;
        pol[i] = mode.name[2];
        arm[i] = mode.name[4];
        ++i;
    }
    if (arm[0] == arm[1]) return PatternClass::Reject;  // both up or both down
    return pol[0] == pol[1] ? PatternClass::SuccessIdentity : PatternClass::SuccessPhaseFlip;
}

namespace {

// Storage-stage circuit up to (but not including) measurement: mixture of
// normalized pre-detector states with weights.
MixedState storage_circuit(const PureState& memory_branch, Complex alpha, Complex beta,
                           const DetectorModel& model, double eta_store) {
    PolarizationPort anti{photon_mode("as.h"), photon_mode("as.v")};
    PolarizationPort in{photon_mode("in.h"), photon_mode("in.v")};
    auto swap = make_polarization_swap(anti.h, anti.v);
    auto analyzer = make_bell_analyzer(anti, in);

    MixedState stage = retrieve_excitation(memory_branch, memory_mode("S_A1"), anti.h, eta_store);
    MixedState next;
    for (auto& [w, s] : stage.branches) {
        PureState swapped = apply_mode_map(s, swap);
        MixedState retrieved = retrieve_excitation(swapped, memory_mode("S_B1"), anti.h, eta_store);
        for (auto& [w2, s2] : retrieved.branches) next.branches.emplace_back(w * w2, std::move(s2));
    }

    MixedState out;
    for (auto& [w, s] : next.branches) {
        PureState injected = apply_creation(s, in.h) * alpha + apply_creation(s, in.v) * beta;
        PureState analyzed = apply_mode_map(injected, analyzer);
        if (model.efficiency < 1.0) {
            MixedState thinned = MixedState::pure(analyzed);
            for (const auto& det : analyzer_detectors())
                thinned = apply_loss(thinned, det, model.efficiency);
            for (auto& [w2, s2] : thinned.branches) out.branches.emplace_back(w * w2, std::move(s2));
        } else {
            out.branches.emplace_back(w, std::move(analyzed));
        }
    }
    return out;
}

}  // namespace

StoreOutcome store_photon(const MemoryState& memory, Complex alpha, Complex beta,
                          const DetectorModel& model, Rng& rng, double eta_store) {
    double norm_in = std::abs(std::norm(alpha) + std::norm(beta) - 1.0);
    if (norm_in > 1e-10) throw FockError("input qubit amplitudes must satisfy |a|^2+|b|^2=1");

    // Sample a memory branch, then a circuit branch, then the detectors.
    double u = rng.next_double();
    double acc = 0.0;
    const PureState* mem_branch = &memory.state.branches.back().second;
    for (const auto& [w, s] : memory.state.branches) {
        acc += w;
        if (u < acc) {
            mem_branch = &s;
            break;
        }
    }

    MixedState circuit = storage_circuit(*mem_branch, alpha, beta, model, eta_store);
    u = rng.next_double();
    acc = 0.0;
    const PureState* pre = &circuit.branches.back().second;
    for (const auto& [w, s] : circuit.branches) {
        acc += w;
        if (u < acc) {
            pre = &s;
            break;
        }
    }

    auto detectors = analyzer_detectors();
    OutcomeBranch outcome = sample_outcome(*pre, detectors, model, rng);
    ClickPattern pattern = apply_dark_counts(outcome.pattern, detectors, model, rng);

    StoreOutcome result;
    result.pattern = pattern;
    result.pattern_class = classify_pattern(pattern);
    result.stored = std::move(outcome.residual);
    return result;
}

std::vector<StoreBranch> enumerate_store(const MemoryState& memory, Complex alpha, Complex beta,
                                         const DetectorModel& model, double eta_store) {
    auto detectors = analyzer_detectors();
    const int n_det = int(detectors.size());

    std::vector<StoreBranch> out;
    for (const auto& [mem_w, mem_branch] : memory.state.branches) {
        MixedState circuit = storage_circuit(mem_branch, alpha, beta, model, eta_store);
        for (const auto& [circ_w, pre] : circuit.branches) {
            for (const auto& outcome : enumerate_outcomes(pre, detectors, model)) {
                double base = mem_w * circ_w * outcome.probability;
                if (model.dark_prob == 0.0) {
                    StoreBranch branch;
                    branch.probability = base;
                    branch.pattern = outcome.pattern;
                    branch.pattern_class = classify_pattern(outcome.pattern);
                    branch.stored = outcome.residual;
                    out.push_back(std::move(branch));
                    continue;
                }
                // Convolve the independent per-detector dark-count layer.
                for (int mask = 0; mask < (1 << n_det); ++mask) {
                    double dark_w = 1.0;
                    ClickPattern pattern = outcome.pattern;
                    for (int i = 0; i < n_det; ++i) {
                        if (mask & (1 << i)) {
                            dark_w *= model.dark_prob;
                            if (model.number_resolving)
                                pattern.clicks[detectors[i]] += 1;
                            else
                                pattern.clicks[detectors[i]] = 1;
                        } else {
                            dark_w *= 1.0 - model.dark_prob;
                        }
                    }
                    StoreBranch branch;
                    branch.probability = base * dark_w;
                    branch.pattern = pattern;
                    branch.pattern_class = classify_pattern(pattern);
                    branch.stored = outcome.residual;
                    out.push_back(std::move(branch));
                }
            }
        }
    }
    return out;
}

PureState apply_correction(const PureState& stored, PatternClass cls) {
    if (cls == PatternClass::Reject) throw FockError("no correction is defined for rejected trials");
    if (cls == PatternClass::SuccessIdentity) return stored;
    return flip_phase_on(stored, memory_mode("S_B2"));
}

MixedState read_out(const PureState& stored, double eta_retrieval) {
    ModeLabel a2 = memory_mode("S_A2"), b2 = memory_mode("S_B2");
    for (const auto& [cfg, amp] : stored.terms())
        for (const auto& [mode, n] : cfg)
            if (mode != a2 && mode != b2)
                throw FockError("stored state occupies unsupported mode " + mode.str());

    MixedState stage = retrieve_excitation(stored, a2, output_mode('h'), eta_retrieval);
    MixedState out;
    for (const auto& [w, s] : stage.branches) {
        MixedState second = retrieve_excitation(s, b2, output_mode('v'), eta_retrieval);
        for (auto& [w2, s2] : second.branches) out.branches.emplace_back(w * w2, std::move(s2));
    }
    return out;
}

TrialRecord run_trial(const ProtocolConfig& config, Rng& rng) {
    TrialRecord record;

    MemoryState memory;
    if (config.provenance == MemoryProvenance::heralded) {
        PreparedPair pair_a =
            prepare_entangled_pair(config.p, config.phi_a, config.prep_detector,
                                   memory_mode("S_A1"), memory_mode("S_A2"),
                                   config.max_prep_attempts, rng);
        PreparedPair pair_b =
            prepare_entangled_pair(config.p, config.phi_b, config.prep_detector,
                                   memory_mode("S_B1"), memory_mode("S_B2"),
                                   config.max_prep_attempts, rng);
        record.prep_attempts_a = pair_a.attempts;
        record.prep_attempts_b = pair_b.attempts;
        memory.state = MixedState::pure(tensor_product(pair_a.state, pair_b.state));
        memory.provenance = MemoryProvenance::heralded;
    } else {
        double c1 = config.provenance == MemoryProvenance::noisy ? config.c1 : 0.0;
        double c2 = config.provenance == MemoryProvenance::noisy ? config.c2 : 0.0;
        memory = build_memory_state(c1, c2, config.phi_a, config.phi_b);
    }

    StoreOutcome outcome =
        store_photon(memory, config.alpha, config.beta, config.bell_detector, rng);
    record.pattern = outcome.pattern;
    record.pattern_class = outcome.pattern_class;
    record.stored = outcome.stored;

    if (record.pattern_class != PatternClass::Reject) {
        PureState corrected = apply_correction(outcome.stored, outcome.pattern_class);
        MixedState photon = read_out(corrected, config.eta_retrieval);
        PureState vac = PureState::vacuum();
        PureState target = apply_creation(vac, output_mode('h')) * config.alpha +
                           apply_creation(vac, output_mode('v')) * config.beta;
        double f = 0.0;
        for (const auto& [w, s] : photon.branches) f += w * std::norm(inner_product(target, s));
        record.readout_fidelity = f;
    }
    return record;
}

}  // namespace qmem
