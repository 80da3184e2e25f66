#include "qmem/fock.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace qmem {

using json = nlohmann::ordered_json;

const char* to_string(ModeKind kind) {
    switch (kind) {
        case ModeKind::ensemble: return "ensemble";
        case ModeKind::photon: return "photon";
        case ModeKind::detector: return "detector";
        case ModeKind::loss: return "loss";
    }
    return "?";
}

ModeKind mode_kind_from_string(const std::string& s) {
    if (s == "ensemble") return ModeKind::ensemble;
    if (s == "photon") return ModeKind::photon;
    if (s == "detector") return ModeKind::detector;
    if (s == "loss") return ModeKind::loss;
    throw FockError("unknown mode kind '" + s + "'");
}

ModeLabel ModeLabel::parse(const std::string& s) {
    auto pos = s.find(':');
    if (pos == std::string::npos)
        throw FockError("mode label '" + s + "' missing kind prefix");
    return {mode_kind_from_string(s.substr(0, pos)), s.substr(pos + 1)};
}

int occupancy(const OccupationConfig& cfg, const ModeLabel& mode) {
    auto it = cfg.find(mode);
    return it == cfg.end() ? 0 : it->second;
}

int total_photons(const OccupationConfig& cfg) {
    int total = 0;
    for (const auto& [mode, n] : cfg) total += n;
    return total;
}

PureState PureState::vacuum() {
    PureState s;
    s.terms_[OccupationConfig{}] = Complex(1.0, 0.0);
    return s;
}

PureState PureState::single(const OccupationConfig& cfg, Complex amplitude) {
    PureState s;
    s.add_term(cfg, amplitude);
    return s;
}

bool PureState::is_vacuum_only() const {
    for (const auto& [cfg, amp] : terms_)
        if (!cfg.empty() && std::abs(amp) >= kPruneEpsilon) return false;
    return true;
}

Complex PureState::amplitude(const OccupationConfig& cfg) const {
    auto it = terms_.find(cfg);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

double PureState::norm2() const {
    double total = 0.0;
    for (const auto& [cfg, amp] : terms_) total += std::norm(amp);
    return total;
}

PureState PureState::pruned(double eps) const {
    PureState out;
    for (const auto& [cfg, amp] : terms_)
        if (std::abs(amp) >= eps) out.terms_[cfg] = amp;
    return out;
}

void PureState::add_term(const OccupationConfig& cfg, Complex amplitude) {
    for (const auto& [mode, n] : cfg) {
        if (n < 0) throw FockError("negative occupancy on mode " + mode.str());
        if (n == 0) throw FockError("explicit zero occupancy on mode " + mode.str());
    }
    terms_[cfg] += amplitude;
    if (std::abs(terms_[cfg]) < kPruneEpsilon) terms_.erase(cfg);
}

PureState PureState::operator+(const PureState& other) const {
    PureState out = *this;
    for (const auto& [cfg, amp] : other.terms_) {
        out.terms_[cfg] += amp;
        if (std::abs(out.terms_[cfg]) < kPruneEpsilon) out.terms_.erase(cfg);
    }
    return out;
}

PureState PureState::operator*(Complex scalar) const {
    PureState out;
    for (const auto& [cfg, amp] : terms_) {
        Complex a = amp * scalar;
        if (std::abs(a) >= kPruneEpsilon) out.terms_[cfg] = a;
    }
    return out;
}

std::vector<ModeLabel> PureState::occupied_modes() const {
    std::map<ModeLabel, int> seen;
    for (const auto& [cfg, amp] : terms_)
        for (const auto& [mode, n] : cfg) seen[mode] = 1;
    std::vector<ModeLabel> out;
    for (const auto& [mode, _] : seen) out.push_back(mode);
    return out;
}

std::string PureState::to_json_string() const {
    json arr = json::array();
    for (const auto& [cfg, amp] : terms_) {
        json occ = json::object();
        for (const auto& [mode, n] : cfg) occ[mode.str()] = n;
        arr.push_back({{"occupancy", occ}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return arr.dump();
}

PureState PureState::from_json_string(const std::string& text) {
    json arr = json::parse(text);
    PureState out;
    for (const auto& term : arr) {
        OccupationConfig cfg;
        for (const auto& [key, count] : term.at("occupancy").items())
            cfg[ModeLabel::parse(key)] = count.get<int>();
        out.add_term(cfg, Complex(term.at("re").get<double>(), term.at("im").get<double>()));
    }
    return out;
}

MixedState MixedState::pure(PureState state) {
    MixedState m;
    m.branches.emplace_back(1.0, std::move(state));
    return m;
}

double MixedState::total_weight() const {
    double total = 0.0;
    for (const auto& [w, s] : branches) total += w;
    return total;
}

std::string MixedState::to_json_string() const {
    json arr = json::array();
    for (const auto& [w, s] : branches)
        arr.push_back({{"weight", w}, {"state", json::parse(s.to_json_string())}});
    return arr.dump();
}

PureState apply_creation(const PureState& state, const ModeLabel& mode, int max_occupancy) {
    PureState out;
    for (const auto& [cfg, amp] : state.terms()) {
        int n = occupancy(cfg, mode);
        if (n + 1 > max_occupancy)
            throw TruncationOverflow("occupancy of mode " + mode.str() + " would exceed bound " +
                                     std::to_string(max_occupancy));
        OccupationConfig raised = cfg;
        raised[mode] = n + 1;
        out.add_term(raised, amp * std::sqrt(double(n + 1)));
    }
    return out;
}

Complex inner_product(const PureState& a, const PureState& b) {
    // Conjugate-linear in the first argument; iterate over the smaller map.
    const PureState& small = a.terms().size() <= b.terms().size() ? a : b;
    const PureState& large = a.terms().size() <= b.terms().size() ? b : a;
    Complex total(0.0);
    for (const auto& [cfg, amp] : small.terms()) {
        Complex other = large.amplitude(cfg);
        if (&small == &a)
            total += std::conj(amp) * other;
        else
            total += std::conj(other) * amp;
    }
    return total;
}

PureState tensor_product(const PureState& a, const PureState& b) {
    PureState out;
    for (const auto& [cfg_a, amp_a] : a.terms()) {
        for (const auto& [cfg_b, amp_b] : b.terms()) {
            OccupationConfig merged = cfg_a;
            for (const auto& [mode, n] : cfg_b) {
                if (merged.count(mode))
                    throw FockError("tensor factors share mode " + mode.str());
                merged[mode] = n;
            }
            out.add_term(merged, amp_a * amp_b);
        }
    }
    return out;
}

std::pair<PureState, double> normalize(const PureState& state) {
    double n2 = state.norm2();
    if (n2 <= 0.0) throw FockError("cannot normalize the zero state");
    double norm = std::sqrt(n2);
    return {state * Complex(1.0 / norm, 0.0), norm};
}

}  // namespace qmem
