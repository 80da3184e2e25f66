#ifndef QMEM_ELEMENTS_HPP
#define QMEM_ELEMENTS_HPP

#include <utility>
#include <vector>

#include "qmem/fock.hpp"

namespace qmem {

class NonUnitaryMap : public FockError {
public:
    explicit NonUnitaryMap(const std::string& what) : FockError(what) {}
};

// Unitary substitution rule: each transformed input mode's creation operator
// maps to a complex combination of output modes' creation operators. Modes
// not listed pass through untouched (and must stay disjoint from the output
// set).
class LinearModeMap {
public:
    using Rule = std::vector<std::pair<ModeLabel, Complex>>;
    using Rules = std::map<ModeLabel, Rule>;

    // Validates row orthonormality (within 1e-12) before accepting.
    static LinearModeMap from_rules(Rules rules);

    const Rules& rules() const { return rules_; }
    bool transforms(const ModeLabel& mode) const { return rules_.count(mode) > 0; }
    bool is_output(const ModeLabel& mode) const;

    // Applies this map, then `next`.
    LinearModeMap then(const LinearModeMap& next) const;

    std::string to_json_string() const;

private:
    LinearModeMap() = default;
    Rules rules_;
    std::vector<ModeLabel> outputs_;
};

PureState apply_mode_map(const PureState& state, const LinearModeMap& map,
                         int max_occupancy = kMaxOccupancyDefault);

// 50/50 beam splitter: m1 -> (m1+m2)/sqrt2, m2 -> (m1-m2)/sqrt2.
LinearModeMap make_beamsplitter(const ModeLabel& m1, const ModeLabel& m2);

// Half-wave plate at 22.5 degrees: h -> (h+v)/sqrt2, v -> (h-v)/sqrt2.
LinearModeMap make_halfwave(const ModeLabel& h, const ModeLabel& v);

// Half-wave plate at 45 degrees: exchanges the two polarizations.
LinearModeMap make_polarization_swap(const ModeLabel& h, const ModeLabel& v);

struct PolarizationPort {
    ModeLabel h;
    ModeLabel v;
};

// Polarizing beam splitter: transmits horizontal, reflects vertical.
LinearModeMap make_pbs(const PolarizationPort& in_a, const PolarizationPort& in_b,
                       const PolarizationPort& out_t, const PolarizationPort& out_r);

// Detector-facing modes of the Bell analyzer, fixed by convention.
ModeLabel analyzer_detector(char pol, char arm);  // pol in {h,v}, arm in {u,d}
std::vector<ModeLabel> analyzer_detectors();

// PBS followed by a half-wave plate on each output arm, routed onto the four
// analyzer detector modes:
//   anti_stokes.v -> (D_h^d - D_v^d)/sqrt2
//   anti_stokes.h -> (D_h^u + D_v^u)/sqrt2
//   input.h       -> (D_h^d + D_v^d)/sqrt2
//   input.v       -> (D_h^u - D_v^u)/sqrt2
LinearModeMap make_bell_analyzer(const PolarizationPort& anti_stokes,
                                 const PolarizationPort& input);

// Anti-pump readout: rewrites every excitation of `ensemble` into `photon`.
// eta < 1 adds a loss channel on the produced photon.
MixedState retrieve_excitation(const PureState& state, const ModeLabel& ensemble,
                               const ModeLabel& photon, double eta);

}  // namespace qmem

#endif  // QMEM_ELEMENTS_HPP
