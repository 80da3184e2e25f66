#include "qmem/elements.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "qmem/detection.hpp"

namespace qmem {

using json = nlohmann::ordered_json;

namespace {
constexpr double kUnitarityTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

LinearModeMap LinearModeMap::from_rules(Rules rules) {
    std::set<ModeLabel> outputs;
    for (const auto& [in, rule] : rules) {
        if (rule.empty()) throw NonUnitaryMap("empty rule for mode " + in.str());
        std::set<ModeLabel> seen;
        for (const auto& [out, c] : rule) {
            if (!seen.insert(out).second)
                throw NonUnitaryMap("duplicate output mode " + out.str() + " in rule for " + in.str());
            outputs.insert(out);
        }
    }
    // Row orthonormality over the output basis.
    for (auto i = rules.begin(); i != rules.end(); ++i) {
        for (auto j = i; j != rules.end(); ++j) {
            Complex dot(0.0);
            for (const auto& [out_i, c_i] : i->second)
                for (const auto& [out_j, c_j] : j->second)
                    if (out_i == out_j) dot += c_i * std::conj(c_j);
            double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(dot - expected) > kUnitarityTol)
                throw NonUnitaryMap("rows for " + i->first.str() + " and " + j->first.str() +
                                    " are not orthonormal");
        }
    }
    LinearModeMap map;
    map.rules_ = std::move(rules);
    map.outputs_.assign(outputs.begin(), outputs.end());
    return map;
}

bool LinearModeMap::is_output(const ModeLabel& mode) const {
    return std::binary_search(outputs_.begin(), outputs_.end(), mode);
}

LinearModeMap LinearModeMap::then(const LinearModeMap& next) const {
    Rules composed;
    for (const auto& [in, rule] : rules_) {
        std::map<ModeLabel, Complex> acc;
        for (const auto& [mid, c] : rule) {
            if (next.transforms(mid)) {
                for (const auto& [out, d] : next.rules().at(mid)) acc[out] += c * d;
            } else {
                acc[mid] += c;
            }
        }
        Rule out_rule;
        for (const auto& [out, c] : acc)
            if (std::abs(c) >= kPruneEpsilon) out_rule.emplace_back(out, c);
        composed[in] = std::move(out_rule);
    }
    // Inputs of `next` that this map neither consumes nor produces act on
    // pass-through modes and keep their rules.
    for (const auto& [in, rule] : next.rules()) {
        if (!composed.count(in) && !is_output(in)) composed[in] = rule;
    }
    return from_rules(std::move(composed));
}

std::string LinearModeMap::to_json_string() const {
    json obj = json::object();
    for (const auto& [in, rule] : rules_) {
        json terms = json::array();
        for (const auto& [out, c] : rule)
            terms.push_back({{"mode", out.str()}, {"re", c.real()}, {"im", c.imag()}});
        obj[in.str()] = terms;
    }
    return obj.dump();
}

PureState apply_mode_map(const PureState& state, const LinearModeMap& map, int max_occupancy) {
    PureState out;
    for (const auto& [cfg, amp] : state.terms()) {
        // |n1,n2,...> = prod (a_i^+)^{n_i}/sqrt(n_i!) |0>; substitute each
        // creation operator and re-expand the polynomial over output modes.
        double prefactor = 1.0;
        std::map<OccupationConfig, Complex> poly{{OccupationConfig{}, Complex(1.0)}};
        for (const auto& [mode, n] : cfg) {
            for (int k = 1; k <= n; ++k) prefactor /= std::sqrt(double(k));
            LinearModeMap::Rule identity{{mode, Complex(1.0)}};
            const LinearModeMap::Rule* rule = &identity;
            if (map.transforms(mode)) {
                rule = &map.rules().at(mode);
            } else if (map.is_output(mode)) {
                throw FockError("state occupies mode " + mode.str() +
                                " which the map produces but does not transform");
            }
            for (int k = 0; k < n; ++k) {
                std::map<OccupationConfig, Complex> next;
                for (const auto& [mono, coeff] : poly) {
                    for (const auto& [target, c] : *rule) {
                        OccupationConfig raised = mono;
                        int occ = ++raised[target];
                        if (occ > max_occupancy)
                            throw TruncationOverflow("occupancy of mode " + target.str() +
                                                     " would exceed bound " +
                                                     std::to_string(max_occupancy));
                        next[raised] += coeff * c;
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto& [mono, coeff] : poly) {
            double factor = prefactor;
            for (const auto& [mode, n] : mono)
                for (int k = 1; k <= n; ++k) factor *= std::sqrt(double(k));
            out.add_term(mono, amp * coeff * factor);
        }
    }
    return out.pruned();
}

LinearModeMap make_beamsplitter(const ModeLabel& m1, const ModeLabel& m2) {
    if (m1 == m2) throw FockError("beam splitter requires two distinct modes");
    return LinearModeMap::from_rules({
        {m1, {{m1, kInvSqrt2}, {m2, kInvSqrt2}}},
        {m2, {{m1, kInvSqrt2}, {m2, -kInvSqrt2}}},
    });
}

LinearModeMap make_halfwave(const ModeLabel& h, const ModeLabel& v) {
    if (h == v) throw FockError("half-wave plate requires two distinct modes");
    return LinearModeMap::from_rules({
        {h, {{h, kInvSqrt2}, {v, kInvSqrt2}}},
        {v, {{h, kInvSqrt2}, {v, -kInvSqrt2}}},
    });
}

LinearModeMap make_polarization_swap(const ModeLabel& h, const ModeLabel& v) {
    if (h == v) throw FockError("polarization swap requires two distinct modes");
    return LinearModeMap::from_rules({
        {h, {{v, Complex(1.0)}}},
        {v, {{h, Complex(1.0)}}},
    });
}

LinearModeMap make_pbs(const PolarizationPort& in_a, const PolarizationPort& in_b,
                       const PolarizationPort& out_t, const PolarizationPort& out_r) {
    std::set<ModeLabel> labels{in_a.h, in_a.v, in_b.h, in_b.v, out_t.h, out_t.v, out_r.h, out_r.v};
    if (labels.size() != 8) throw FockError("PBS requires eight distinct mode labels");
    return LinearModeMap::from_rules({
        {in_a.h, {{out_t.h, Complex(1.0)}}},
        {in_a.v, {{out_r.v, Complex(1.0)}}},
        {in_b.h, {{out_r.h, Complex(1.0)}}},
        {in_b.v, {{out_t.v, Complex(1.0)}}},
    });
}

ModeLabel analyzer_detector(char pol, char arm) {
    return detector_mode(std::string("D_") + pol + "^" + arm);
}

std::vector<ModeLabel> analyzer_detectors() {
    return {analyzer_detector('h', 'u'), analyzer_detector('v', 'u'),
            analyzer_detector('h', 'd'), analyzer_detector('v', 'd')};
}

LinearModeMap make_bell_analyzer(const PolarizationPort& anti_stokes,
                                 const PolarizationPort& input) {
    std::set<ModeLabel> labels{anti_stokes.h, anti_stokes.v, input.h, input.v};
    if (labels.size() != 4) throw FockError("Bell analyzer requires four distinct input modes");
    ModeLabel dhu = analyzer_detector('h', 'u'), dvu = analyzer_detector('v', 'u');
    ModeLabel dhd = analyzer_detector('h', 'd'), dvd = analyzer_detector('v', 'd');
    return LinearModeMap::from_rules({
        {anti_stokes.v, {{dhd, kInvSqrt2}, {dvd, -kInvSqrt2}}},
        {anti_stokes.h, {{dhu, kInvSqrt2}, {dvu, kInvSqrt2}}},
        {input.h, {{dhd, kInvSqrt2}, {dvd, kInvSqrt2}}},
        {input.v, {{dhu, kInvSqrt2}, {dvu, -kInvSqrt2}}},
    });
}

MixedState retrieve_excitation(const PureState& state, const ModeLabel& ensemble,
                               const ModeLabel& photon, double eta) {
    PureState rewritten;
    for (const auto& [cfg, amp] : state.terms()) {
        if (occupancy(cfg, photon) > 0)
            throw FockError("retrieval target mode " + photon.str() + " is already occupied");
        OccupationConfig moved = cfg;
        auto it = moved.find(ensemble);
        if (it != moved.end()) {
            int n = it->second;
            moved.erase(it);
            moved[photon] = n;
        }
        rewritten.add_term(moved, amp);
    }
    if (eta >= 1.0) return MixedState::pure(std::move(rewritten));
    return apply_loss(rewritten, photon, eta);
}

}  // namespace qmem
