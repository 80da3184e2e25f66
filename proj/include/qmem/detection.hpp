#ifndef QMEM_DETECTION_HPP
#define QMEM_DETECTION_HPP

#include <vector>

#include "qmem/fock.hpp"
#include "qmem/rng.hpp"

namespace qmem {

struct DetectorModel {
    bool number_resolving = true;
    double efficiency = 1.0;
    double dark_prob = 0.0;

    static DetectorModel resolving() { return {true, 1.0, 0.0}; }
    static DetectorModel bucket() { return {false, 1.0, 0.0}; }
};

// Which detectors clicked. For a number-resolving model the count is the
// photon number; for a bucket model every listed detector has count 1.
struct ClickPattern {
    std::map<ModeLabel, int> clicks;

    bool operator==(const ClickPattern&) const = default;
    bool operator<(const ClickPattern& other) const { return clicks < other.clicks; }

    // Sorted "detector:count" pairs, e.g. "D_h^d:1,D_h^u:1".
    std::string str() const;
};

struct OutcomeBranch {
    ClickPattern pattern;
    double probability = 0.0;
    PureState residual;  // normalized, detector modes projected out
};

// Exact projective measurement of the listed detector modes. Partitions basis
// terms by their exact detector occupancy signature; with a bucket model the
// reported pattern collapses counts to clicked/not-clicked but branches with
// distinct exact signatures keep their own residuals. Dark counts and
// efficiency are not applied here.
std::vector<OutcomeBranch> enumerate_outcomes(const PureState& state,
                                              const std::vector<ModeLabel>& detectors,
                                              const DetectorModel& model);

OutcomeBranch sample_outcome(const PureState& state,
                             const std::vector<ModeLabel>& detectors,
                             const DetectorModel& model, Rng& rng);

// Classical dark-count layer: independently per listed detector, with
// probability dark_prob, one extra click. Never touches the quantum state.
ClickPattern apply_dark_counts(const ClickPattern& pattern,
                               const std::vector<ModeLabel>& detectors,
                               const DetectorModel& model, Rng& rng);

// Beam splitter of transmissivity eta to a fresh loss mode, then branch on
// the loss mode's occupancy and trace it out.
MixedState apply_loss(const PureState& state, const ModeLabel& mode, double eta);

MixedState apply_loss(const MixedState& state, const ModeLabel& mode, double eta);

}  // namespace qmem

#endif  // QMEM_DETECTION_HPP
