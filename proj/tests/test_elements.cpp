#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "qmem/elements.hpp"
#include "qmem/rng.hpp"

using namespace qmem;

namespace {

const ModeLabel m1 = photon_mode("m1");
const ModeLabel m2 = photon_mode("m2");
const ModeLabel h = photon_mode("h");
const ModeLabel v = photon_mode("v");
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState one(const ModeLabel& mode) { return apply_creation(PureState::vacuum(), mode); }

// Random normalized sparse state with up to `max_photons` photons over the
// given modes.
PureState random_state(const std::vector<ModeLabel>& modes, int max_photons, Rng& rng) {
    PureState s;
    int n_terms = 2 + int(rng.next_u64() % 4);
    for (int t = 0; t < n_terms; ++t) {
        OccupationConfig cfg;
        int photons = int(rng.next_u64() % std::uint64_t(max_photons + 1));
        for (int k = 0; k < photons; ++k) {
            const ModeLabel& mode = modes[rng.next_u64() % modes.size()];
            cfg[mode] += 1;
        }
        if (cfg.empty() && photons > 0) continue;
        s.add_term(cfg, Complex(rng.next_double() * 2 - 1, rng.next_double() * 2 - 1));
    }
    if (s.terms().empty()) return PureState::vacuum();
    return normalize(s).first;
}

bool states_close(const PureState& a, const PureState& b, double tol) {
    PureState diff = a + b * Complex(-1.0);
    return std::sqrt(diff.norm2()) < tol;
}

}  // namespace

TEST_CASE("beam splitter splits a single photon") {
    auto bs = make_beamsplitter(m1, m2);
    PureState out = apply_mode_map(one(m1), bs);
    PureState expected = (one(m1) + one(m2)) * Complex(kInvSqrt2);
    CHECK(states_close(out, expected, 1e-14));
    CHECK(std::abs(out.norm2() - 1.0) < 1e-12);
}

TEST_CASE("coherent equal-phase input exits one port") {
    auto bs = make_beamsplitter(m1, m2);
    PureState in = (one(m1) + one(m2)) * Complex(kInvSqrt2);
    PureState out = apply_mode_map(in, bs);
    CHECK(states_close(out, one(m1), 1e-14));
}

TEST_CASE("Hong-Ou-Mandel bunching |1,1> -> (|2,0> - |0,2>)/sqrt2") {
    // Oracle: expand (a1+a2)(a1-a2)/2 = (a1^2 - a2^2)/2 by photon-wise
    // matrix application in an independent representation.
    oracle::Matrix u{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
    oracle::State in = oracle::create(oracle::create(oracle::vacuum(2), 0), 1);
    oracle::State expected = oracle::apply_matrix(in, u);
    REQUIRE(expected.size() == 2);
    CHECK(std::abs(expected[{2, 0}] - Complex(kInvSqrt2)) < 1e-14);
    CHECK(std::abs(expected[{0, 2}] - Complex(-kInvSqrt2)) < 1e-14);

    auto bs = make_beamsplitter(m1, m2);
    PureState out = apply_mode_map(apply_creation(one(m1), m2), bs);
    CHECK(std::abs(out.amplitude({{m1, 2}}) - expected[{2, 0}]) < 1e-13);
    CHECK(std::abs(out.amplitude({{m2, 2}}) - expected[{0, 2}]) < 1e-13);
    CHECK(std::abs(out.amplitude({{m1, 1}, {m2, 1}})) < 1e-13);
}

TEST_CASE("vacuum is invariant under any map") {
    auto bs = make_beamsplitter(m1, m2);
    PureState out = apply_mode_map(PureState::vacuum(), bs);
    CHECK(states_close(out, PureState::vacuum(), 1e-15));
}

TEST_CASE("half-wave plate rotations") {
    auto hw = make_halfwave(h, v);
    CHECK(states_close(apply_mode_map(one(h), hw), (one(h) + one(v)) * Complex(kInvSqrt2), 1e-14));
    CHECK(states_close(apply_mode_map(one(v), hw),
                       (one(h) + one(v) * Complex(-1.0)) * Complex(kInvSqrt2), 1e-14));
}

TEST_CASE("half-wave plate is an involution on <=2 photon states") {
    auto hw = make_halfwave(h, v);
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        PureState s = random_state({h, v}, 2, rng);
        PureState twice = apply_mode_map(apply_mode_map(s, hw), hw);
        CHECK(states_close(twice, s, 1e-12));
    }
}

TEST_CASE("polarization swap") {
    auto swap = make_polarization_swap(h, v);
    CHECK(states_close(apply_mode_map(one(h), swap), one(v), 1e-15));
    CHECK(states_close(apply_mode_map(one(v), swap), one(h), 1e-15));
    PureState hv = apply_creation(one(h), v);
    CHECK(states_close(apply_mode_map(hv, swap), hv, 1e-14));
}

TEST_CASE("PBS transmits horizontal and reflects vertical") {
    PolarizationPort in_a{photon_mode("a.h"), photon_mode("a.v")};
    PolarizationPort in_b{photon_mode("b.h"), photon_mode("b.v")};
    PolarizationPort out_t{photon_mode("t.h"), photon_mode("t.v")};
    PolarizationPort out_r{photon_mode("r.h"), photon_mode("r.v")};
    auto pbs = make_pbs(in_a, in_b, out_t, out_r);

    CHECK(states_close(apply_mode_map(one(in_a.h), pbs), one(out_t.h), 1e-15));
    CHECK(states_close(apply_mode_map(one(in_a.v), pbs), one(out_r.v), 1e-15));
    PureState both = apply_creation(one(in_a.h), in_b.v);
    PureState routed = apply_creation(one(out_t.h), out_t.v);
    CHECK(states_close(apply_mode_map(both, pbs), routed, 1e-14));

    CHECK_THROWS_AS(make_pbs(in_a, in_a, out_t, out_r), FockError);
}

TEST_CASE("Bell analyzer single-photon conventions") {
    PolarizationPort anti{photon_mode("as.h"), photon_mode("as.v")};
    PolarizationPort in{photon_mode("in.h"), photon_mode("in.v")};
    auto analyzer = make_bell_analyzer(anti, in);

    ModeLabel dhu = analyzer_detector('h', 'u'), dvu = analyzer_detector('v', 'u');
    ModeLabel dhd = analyzer_detector('h', 'd'), dvd = analyzer_detector('v', 'd');

    CHECK(states_close(apply_mode_map(one(anti.v), analyzer),
                       (one(dhd) + one(dvd) * Complex(-1.0)) * Complex(kInvSqrt2), 1e-14));
    CHECK(states_close(apply_mode_map(one(anti.h), analyzer),
                       (one(dhu) + one(dvu)) * Complex(kInvSqrt2), 1e-14));
    CHECK(states_close(apply_mode_map(one(in.h), analyzer),
                       (one(dhd) + one(dvd)) * Complex(kInvSqrt2), 1e-14));
    CHECK(states_close(apply_mode_map(one(in.v), analyzer),
                       (one(dhu) + one(dvu) * Complex(-1.0)) * Complex(kInvSqrt2), 1e-14));
}

TEST_CASE("PBS plus half-wave plates reproduces the Bell analyzer") {
    PolarizationPort anti{photon_mode("as.h"), photon_mode("as.v")};
    PolarizationPort in{photon_mode("in.h"), photon_mode("in.v")};
    // Physical layout: anti-Stokes and input ports hit the PBS; the d arm
    // takes transmitted-from-input / reflected-from-anti-Stokes, then a
    // half-wave plate sits in front of each detector pair.
    ModeLabel dhu = analyzer_detector('h', 'u'), dvu = analyzer_detector('v', 'u');
    ModeLabel dhd = analyzer_detector('h', 'd'), dvd = analyzer_detector('v', 'd');
    auto pbs = make_pbs(in, anti, {dhd, dvd}, {dhu, dvu});
    auto composite = pbs.then(make_halfwave(dhd, dvd)).then(make_halfwave(dhu, dvu));

    auto analyzer = make_bell_analyzer(anti, in);
    for (const auto& [input, rule] : analyzer.rules()) {
        REQUIRE(composite.transforms(input));
        std::map<ModeLabel, Complex> got;
        for (const auto& [out, c] : composite.rules().at(input)) got[out] = c;
        for (const auto& [out, c] : rule) {
            CHECK(std::abs(got[out] - c) < 1e-12);
            got.erase(out);
        }
        for (const auto& [out, c] : got) CHECK(std::abs(c) < 1e-12);
    }
}

TEST_CASE("non-unitary coefficient sets are rejected") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        LinearModeMap::Rules rules{
            {m1, {{m1, kInvSqrt2}, {m2, kInvSqrt2}}},
            {m2, {{m1, kInvSqrt2}, {m2, -kInvSqrt2}}},
        };
        auto& rule = trial % 2 ? rules[m1] : rules[m2];
        rule[rng.next_u64() % 2].second += Complex(1e-6, 0.0);
        CHECK_THROWS_AS(LinearModeMap::from_rules(std::move(rules)), NonUnitaryMap);
    }
}

TEST_CASE("unitarity transport: inner products are preserved") {
    PolarizationPort anti{photon_mode("as.h"), photon_mode("as.v")};
    PolarizationPort in{photon_mode("in.h"), photon_mode("in.v")};
    std::vector<LinearModeMap> maps{
        make_beamsplitter(photon_mode("as.h"), photon_mode("as.v")),
        make_halfwave(photon_mode("in.h"), photon_mode("in.v")),
        make_bell_analyzer(anti, in),
    };
    std::vector<ModeLabel> modes{anti.h, anti.v, in.h, in.v};
    Rng rng(123);
    for (const auto& map : maps) {
        for (int trial = 0; trial < 25; ++trial) {
            PureState a = random_state(modes, 3, rng);
            PureState b = random_state(modes, 3, rng);
            Complex before = inner_product(a, b);
            Complex after = inner_product(apply_mode_map(a, map), apply_mode_map(b, map));
            CHECK(std::abs(before - after) < 1e-12);
        }
    }
}

TEST_CASE("pass-through collision with an output mode is an error") {
    auto bs = make_beamsplitter(m1, m2);
    PureState stray = one(m2);
    // Occupying an output-only mode of a different map is the error case.
    auto partial = LinearModeMap::from_rules({{m1, {{m2, Complex(1.0)}}}});
    CHECK_THROWS_AS(apply_mode_map(stray, partial), FockError);
}

TEST_CASE("retrieve_excitation rewrites ensemble excitations") {
    ModeLabel s_a1 = ensemble_mode("S_A1");
    ModeLabel out = photon_mode("as.h");
    PureState excited = apply_creation(PureState::vacuum(), s_a1);

    MixedState full = retrieve_excitation(excited, s_a1, out, 1.0);
    REQUIRE(full.branches.size() == 1);
    CHECK(states_close(full.branches[0].second, one(out), 1e-14));

    MixedState vac = retrieve_excitation(PureState::vacuum(), s_a1, out, 0.5);
    double total = 0.0;
    for (const auto& [w, s] : vac.branches) {
        total += w;
        CHECK(s.is_vacuum_only());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(retrieve_excitation(one(out), s_a1, out, 1.0), FockError);
}

TEST_CASE("retrieval of a superposition preserves amplitudes") {
    ModeLabel a2 = ensemble_mode("S_A2"), b2 = ensemble_mode("S_B2");
    ModeLabel out1 = photon_mode("out1"), out2 = photon_mode("out2");
    Complex alpha(0.6, 0.0), beta(0.0, 0.8);
    PureState vacuum = PureState::vacuum();
    PureState stored = apply_creation(vacuum, a2) * alpha + apply_creation(vacuum, b2) * beta;

    MixedState step1 = retrieve_excitation(stored, a2, out1, 1.0);
    REQUIRE(step1.branches.size() == 1);
    MixedState step2 = retrieve_excitation(step1.branches[0].second, b2, out2, 1.0);
    REQUIRE(step2.branches.size() == 1);
    PureState expected = apply_creation(vacuum, out1) * alpha + apply_creation(vacuum, out2) * beta;
    CHECK(states_close(step2.branches[0].second, expected, 1e-14));
}
