#include <doctest.h>

#include <cmath>

#include "qmem/analysis.hpp"

using namespace qmem;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState photon_qubit(Complex alpha, Complex beta) {
    PureState vac = PureState::vacuum();
    return apply_creation(vac, photon_mode("h")) * alpha +
           apply_creation(vac, photon_mode("v")) * beta;
}

}  // namespace

TEST_CASE("fidelity basics") {
    PureState psi = photon_qubit(Complex(0.6), Complex(0.0, 0.8));
    CHECK(fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(psi, PureState::vacuum()) == doctest::Approx(0.0));

    MixedState half;
    half.branches.emplace_back(0.5, psi);
    half.branches.emplace_back(0.5, PureState::vacuum());
    CHECK(fidelity(psi, half) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(fidelity(psi * Complex(2.0), psi), FockError);
}

TEST_CASE("fidelity is invariant under global phases") {
    PureState psi = photon_qubit(Complex(kInvSqrt2), Complex(kInvSqrt2));
    PureState chi = photon_qubit(Complex(0.6), Complex(0.8));
    Complex phase = std::polar(1.0, 1.1);
    CHECK(fidelity(psi, chi) == doctest::Approx(fidelity(psi, chi * phase)).epsilon(1e-12));
    CHECK(fidelity(psi, chi) ==
          doctest::Approx(fidelity(normalize(psi * phase).first, chi)).epsilon(1e-12));
}

TEST_CASE("exact class probabilities: ideal resolving") {
    ProtocolConfig config;
    config.alpha = Complex(kInvSqrt2);
    config.beta = Complex(kInvSqrt2);
    auto probs = exact_success_probability(config);
    CHECK(probs[PatternClass::SuccessIdentity] == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(probs[PatternClass::SuccessPhaseFlip] == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(probs[PatternClass::Reject] == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("exact class probabilities: input independence") {
    ProtocolConfig base;
    base.alpha = Complex(kInvSqrt2);
    base.beta = Complex(kInvSqrt2);
    auto reference = exact_success_probability(base);

    ProtocolConfig polar = base;
    polar.alpha = Complex(1.0);
    polar.beta = Complex(0.0);
    auto probs = exact_success_probability(polar);
    for (const auto& [cls, p] : reference)
        CHECK(probs[cls] == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("exact class probabilities: ideal bucket accepts half") {
    ProtocolConfig config;
    config.alpha = Complex(kInvSqrt2);
    config.beta = Complex(kInvSqrt2);
    config.bell_detector = DetectorModel::bucket();
    auto probs = exact_success_probability(config);
    double accept =
        probs[PatternClass::SuccessIdentity] + probs[PatternClass::SuccessPhaseFlip];
    CHECK(accept == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("heralded provenance is rejected by exact enumeration") {
    ProtocolConfig config;
    config.provenance = MemoryProvenance::heralded;
    CHECK_THROWS_AS(exact_success_probability(config), FockError);
}

TEST_CASE("aggregate over synthetic records") {
    std::vector<TrialRecord> records;
    for (int k = 0; k < 100; ++k) {
        TrialRecord rec;
        rec.prep_attempts_a = 2;
        rec.prep_attempts_b = 4;
        if (k < 25) {
            rec.pattern_class =
                k % 2 ? PatternClass::SuccessIdentity : PatternClass::SuccessPhaseFlip;
            rec.readout_fidelity = 1.0;
        }
        records.push_back(rec);
    }
    RunStatistics stats = aggregate(records);
    CHECK(stats.trials == 100);
    CHECK(stats.accepts == 25);
    CHECK(stats.acceptance_rate == doctest::Approx(0.25));
    CHECK(stats.acceptance_lo <= 0.25);
    CHECK(stats.acceptance_hi >= 0.25);
    CHECK(stats.acceptance_lo >= 0.0);
    CHECK(stats.acceptance_hi <= 1.0);
    CHECK(stats.mean_fidelity_on_accept.value() == doctest::Approx(1.0));
    CHECK(stats.mean_prep_attempts == doctest::Approx(3.0));

    CHECK_THROWS_AS(aggregate({}), FockError);

    std::vector<TrialRecord> rejects(10);
    RunStatistics none = aggregate(rejects);
    CHECK(none.acceptance_rate == doctest::Approx(0.0));
    CHECK(!none.mean_fidelity_on_accept.has_value());
}

TEST_CASE("wilson interval sanity") {
    auto [lo, hi] = wilson_interval(25, 100);
    CHECK(lo > 0.17);
    CHECK(hi < 0.35);
    CHECK(lo < 0.25);
    CHECK(hi > 0.25);

    auto [zlo, zhi] = wilson_interval(0, 100);
    CHECK(zlo == doctest::Approx(0.0));
    CHECK(zhi > 0.0);
}

TEST_CASE("Monte Carlo frequencies match exact enumeration across the matrix") {
    // {resolving, bucket} x {ideal, c1=c2=0.05} x {dark 0, dark 1e-5}.
    const double q999[] = {10.828, 13.816, 16.266, 18.467, 20.515, 22.458};
    for (bool resolving : {true, false}) {
        for (bool noisy : {false, true}) {
            for (double dark : {0.0, 1e-5}) {
                ProtocolConfig config;
                config.alpha = Complex(kInvSqrt2);
                config.beta = Complex(kInvSqrt2);
                config.bell_detector =
                    resolving ? DetectorModel::resolving() : DetectorModel::bucket();
                config.bell_detector.dark_prob = dark;
                if (noisy) {
                    config.provenance = MemoryProvenance::noisy;
                    config.c1 = 0.05;
                    config.c2 = 0.05;
                }
                config.seed = 1000 + (resolving ? 1 : 0) + (noisy ? 2 : 0) + (dark > 0 ? 4 : 0);

                auto exact = exact_success_probability(config);
                const long trials = 10000;
                std::map<PatternClass, long> counts;
                for (long k = 0; k < trials; ++k) {
                    Rng rng = Rng::substream(config.seed, std::uint64_t(k));
                    counts[run_trial(config, rng).pattern_class] += 1;
                }
                double chi2 = 0.0;
                long df = -1;
                for (const auto& [cls, p] : exact) {
                    double expect = p * trials;
                    if (expect < 5.0) continue;
                    long observed = counts.count(cls) ? counts.at(cls) : 0;
                    chi2 += (observed - expect) * (observed - expect) / expect;
                    df += 1;
                }
                REQUIRE(df >= 1);
                CHECK(chi2 < q999[df - 1]);
            }
        }
    }
}

TEST_CASE("phase law across a grid") {
    const Complex qubits[][2] = {
        {Complex(kInvSqrt2), Complex(kInvSqrt2)},
        {Complex(0.6), Complex(0.8)},
        {Complex(0.8), Complex(0.0, 0.6)},
    };
    const double dphis[] = {0.0, M_PI / 4, M_PI / 2, 3 * M_PI / 4, M_PI};
    for (const auto& qubit : qubits) {
        for (double dphi : dphis) {
            ProtocolConfig config;
            config.alpha = qubit[0];
            config.beta = qubit[1];
            config.phi_a = 0.3;
            config.phi_b = 0.3 + dphi;
            config.seed = 555;

            double a2 = std::norm(config.alpha), b2 = std::norm(config.beta);
            double expected = a2 * a2 + b2 * b2 + 2.0 * a2 * b2 * std::cos(dphi);

            long accepts = 0;
            for (long k = 0; k < 400 && accepts < 10; ++k) {
                Rng rng = Rng::substream(config.seed, std::uint64_t(k));
                TrialRecord rec = run_trial(config, rng);
                if (rec.pattern_class == PatternClass::Reject) continue;
                ++accepts;
                CHECK(*rec.readout_fidelity == doctest::Approx(expected).epsilon(1e-10));
            }
            CHECK(accepts >= 10);
        }
    }
}

TEST_CASE("vacuum admixture needs post-selection but keeps fidelity") {
    ProtocolConfig config;
    config.alpha = Complex(kInvSqrt2);
    config.beta = Complex(kInvSqrt2);
    config.provenance = MemoryProvenance::noisy;
    config.c1 = 0.05;
    config.c2 = 0.05;

    auto probs = exact_success_probability(config);
    double accept = probs[PatternClass::SuccessIdentity] + probs[PatternClass::SuccessPhaseFlip];
    CHECK(accept < 0.25);
    CHECK(accept > 0.0);

    // Acceptance decreases monotonically in the admixture.
    ProtocolConfig more = config;
    more.c1 = 0.2;
    more.c2 = 0.2;
    auto worse = exact_success_probability(more);
    double accept2 =
        worse[PatternClass::SuccessIdentity] + worse[PatternClass::SuccessPhaseFlip];
    CHECK(accept2 < accept);

    // An accepted coincidence can still leave the ensembles in vacuum when
    // one pair started there (the anti-Stokes and input photons alone can
    // coincide across arms); post-selecting on a non-vacuum stored state
    // restores fidelity 1 exactly.
    MemoryState memory = build_memory_state(config.c1, config.c2, 0.0, 0.0);
    PureState vac = PureState::vacuum();
    PureState target = apply_creation(vac, memory_mode("S_A2")) * config.alpha +
                       apply_creation(vac, memory_mode("S_B2")) * config.beta;
    double vacuum_accept = 0.0;
    for (const auto& b :
         enumerate_store(memory, config.alpha, config.beta, DetectorModel::resolving())) {
        if (b.pattern_class == PatternClass::Reject) continue;
        if (b.stored.is_vacuum_only()) {
            vacuum_accept += b.probability;
            continue;
        }
        PureState corrected = apply_correction(b.stored, b.pattern_class);
        CHECK(fidelity(target, corrected) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(vacuum_accept > 0.0);
}
