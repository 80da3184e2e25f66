#ifndef QMEM_PROTOCOL_HPP
#define QMEM_PROTOCOL_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "qmem/detection.hpp"
#include "qmem/elements.hpp"
#include "qmem/fock.hpp"
#include "qmem/rng.hpp"

namespace qmem {

enum class MemoryProvenance { ideal, heralded, noisy };

const char* to_string(MemoryProvenance p);

struct ProtocolConfig {
    double p = 0.01;               // per-attempt Raman emission probability
    double phi_a = 0.0;            // fixed channel phase, A pair
    double phi_b = 0.0;            // fixed channel phase, B pair
    double c1 = 0.0;               // vacuum admixture, A pair
    double c2 = 0.0;               // vacuum admixture, B pair
    Complex alpha{1.0, 0.0};       // input qubit amplitudes, |alpha|^2+|beta|^2=1
    Complex beta{0.0, 0.0};
    DetectorModel prep_detector = DetectorModel::resolving();
    DetectorModel bell_detector = DetectorModel::resolving();
    double eta_retrieval = 1.0;
    int max_prep_attempts = 100000;
    int trials = 10000;
    std::uint64_t seed = 0;
    MemoryProvenance provenance = MemoryProvenance::ideal;
};

enum class PatternClass { SuccessIdentity, SuccessPhaseFlip, Reject };

const char* to_string(PatternClass c);

struct MemoryState {
    MixedState state;  // over modes {S_A1, S_A2, S_B1, S_B2}
    MemoryProvenance provenance = MemoryProvenance::ideal;
};

struct TrialRecord {
    int prep_attempts_a = 0;
    int prep_attempts_b = 0;
    ClickPattern pattern;
    PatternClass pattern_class = PatternClass::Reject;
    PureState stored;  // vacuum on rejected or vacuum-projected branches
    std::optional<double> readout_fidelity;
};

// Canonical mode labels used by the protocol stages.
ModeLabel memory_mode(const std::string& name);  // S_A1, S_A2, S_B1, S_B2
ModeLabel output_mode(char pol);                 // out.h / out.v

// Write-in preparation loop for one pair of ensembles. Repeats the
// emit/interfere/detect attempt until a herald; a D2 herald's sign is
// repaired by a classical phase flip so the returned state is always
// (S_M1 + e^{i phi} S_M2)/sqrt2 (or the double-excitation false herald
// S_M1 S_M2 with bucket detectors).
struct PreparedPair {
    PureState state;  // over {S_M1, S_M2}
    int attempts = 0;
};

PreparedPair prepare_entangled_pair(double p, double phi, const DetectorModel& model,
                                    const ModeLabel& m1, const ModeLabel& m2,
                                    int max_attempts, Rng& rng);

// Product memory state, optionally with per-pair vacuum admixture
// (branch weights proportional to {c1*c2, c1, c2, 1}).
MemoryState build_memory_state(double c1, double c2, double phi_a, double phi_b);

PatternClass classify_pattern(const ClickPattern& pattern);

// Storage stage on one pure memory branch: retrieve A1 (through the
// polarization swap) and B1, inject the input photon, apply the Bell
// analyzer, and measure. eta_store is the storage-side retrieval efficiency.
struct StoreOutcome {
    ClickPattern pattern;
    PatternClass pattern_class = PatternClass::Reject;
    PureState stored;  // residual over {S_A2, S_B2}, normalized or vacuum
};

StoreOutcome store_photon(const MemoryState& memory, Complex alpha, Complex beta,
                          const DetectorModel& model, Rng& rng, double eta_store = 1.0);

// Exact counterpart of store_photon: every (pattern, class, residual) branch
// with its probability, dark counts convolved in analytically.
struct StoreBranch {
    double probability = 0.0;
    ClickPattern pattern;
    PatternClass pattern_class = PatternClass::Reject;
    PureState stored;
};

std::vector<StoreBranch> enumerate_store(const MemoryState& memory, Complex alpha,
                                         Complex beta, const DetectorModel& model,
                                         double eta_store = 1.0);

PureState apply_correction(const PureState& stored, PatternClass cls);

// Anti-pump readout of the stored qubit onto {out.h, out.v}.
MixedState read_out(const PureState& stored, double eta_retrieval);

TrialRecord run_trial(const ProtocolConfig& config, Rng& rng);

}  // namespace qmem

#endif  // QMEM_PROTOCOL_HPP
