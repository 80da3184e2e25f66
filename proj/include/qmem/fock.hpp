#ifndef QMEM_FOCK_HPP
#define QMEM_FOCK_HPP

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmem {

using Complex = std::complex<double>;

// Default per-mode occupancy cap. The protocol never legitimately puts more
// than two photons in one detector mode, so hitting this bound indicates a
// bug in the circuit construction rather than physics.
inline constexpr int kMaxOccupancyDefault = 4;

// Amplitudes below this are dropped when states are put in canonical form.
inline constexpr double kPruneEpsilon = 1e-15;

class FockError : public std::runtime_error {
public:
    explicit FockError(const std::string& what) : std::runtime_error(what) {}
};

class TruncationOverflow : public FockError {
public:
    explicit TruncationOverflow(const std::string& what) : FockError(what) {}
};

enum class ModeKind { ensemble, photon, detector, loss };

const char* to_string(ModeKind kind);
ModeKind mode_kind_from_string(const std::string& s);

// Names one bosonic mode: an atomic collective mode of an ensemble, a
// photonic spatial+polarization channel, a detector input, or a loss sink.
struct ModeLabel {
    ModeKind kind;
    std::string name;

    auto operator<=>(const ModeLabel&) const = default;

    std::string str() const { return std::string(to_string(kind)) + ":" + name; }
    static ModeLabel parse(const std::string& s);
};

inline ModeLabel ensemble_mode(std::string name) { return {ModeKind::ensemble, std::move(name)}; }
inline ModeLabel photon_mode(std::string name) { return {ModeKind::photon, std::move(name)}; }
inline ModeLabel detector_mode(std::string name) { return {ModeKind::detector, std::move(name)}; }
inline ModeLabel loss_mode(std::string name) { return {ModeKind::loss, std::move(name)}; }

// Sparse occupation-number configuration. Modes absent from the map have
// count zero; no explicit zero entries are stored. std::map keeps the
// canonical (kind, name) ordering.
using OccupationConfig = std::map<ModeLabel, int>;

int occupancy(const OccupationConfig& cfg, const ModeLabel& mode);
int total_photons(const OccupationConfig& cfg);

// Sparse Fock vector: finite association from occupation configurations to
// complex amplitudes. Immutable by convention; operations return new states.
class PureState {
public:
    using Terms = std::map<OccupationConfig, Complex>;

    PureState() = default;

    static PureState vacuum();
    static PureState single(const OccupationConfig& cfg, Complex amplitude);

    const Terms& terms() const { return terms_; }
    bool is_vacuum_only() const;
    Complex amplitude(const OccupationConfig& cfg) const;
    double norm2() const;

    // Drops terms with |amplitude| < eps and returns the canonical state.
    PureState pruned(double eps = kPruneEpsilon) const;

    void add_term(const OccupationConfig& cfg, Complex amplitude);

    PureState operator+(const PureState& other) const;
    PureState operator*(Complex scalar) const;

    std::vector<ModeLabel> occupied_modes() const;

    std::string to_json_string() const;
    static PureState from_json_string(const std::string& text);

private:
    Terms terms_;
};

inline PureState operator*(Complex scalar, const PureState& s) { return s * scalar; }

// Probabilistic mixture of pure states; weights sum to 1 for states that
// represent physical ensembles.
struct MixedState {
    std::vector<std::pair<double, PureState>> branches;

    static MixedState pure(PureState state);
    double total_weight() const;

    std::string to_json_string() const;
};

PureState apply_creation(const PureState& state, const ModeLabel& mode,
                         int max_occupancy = kMaxOccupancyDefault);

Complex inner_product(const PureState& a, const PureState& b);

// Product state of two states on disjoint mode sets.
PureState tensor_product(const PureState& a, const PureState& b);

// Returns (normalized state, original norm). Throws on the null vector.
std::pair<PureState, double> normalize(const PureState& state);

}  // namespace qmem

#endif  // QMEM_FOCK_HPP
