#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "qkd3/bell.hpp"
#include "qkd3/protocol.hpp"
#include "support/oracles.hpp"

using namespace qkd3;

namespace {

// A random joint distribution over the 9 outcome pairs, reduced to the plain
// and squared correlators it induces. Squaring an outcome conjugates it, so
// the squared correlator is the conjugate of the plain one by construction.
struct SampledCorrelator {
    Cx plain;
    Cx squared;
};

SampledCorrelator random_correlator(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, 9> p{};
    double total = 0.0;
    for (double& x : p) total += (x = u(rng));
    SampledCorrelator c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double w = p[static_cast<std::size_t>(3 * i + j)] / total;
            c.plain += w * omega_pow(i) * omega_pow(j);
            c.squared += w * omega_pow(2 * i) * omega_pow(2 * j);
        }
    return c;
}

CorrelatorSet constant_chsh3_set(Cx value) {
    CorrelatorSet c;
    for (const char* a : {elem::kA1, elem::kA2})
        for (const char* b : {elem::kB1, elem::kB2}) c.set(a, b, value);
    return c;
}

const double kChsh3GhzFactor = (6.0 + 4.0 * std::sqrt(3.0)) / 9.0;
const double kChsh3NmeFactor = (1.0 + std::sqrt(11.0 / 3.0)) / 2.0;
// No closed form known for this one; frozen from the exact evaluation of the
// optimal configuration (regression guard, tolerance 1e-9).
const double kHchsh3GhzFactor = 1.6930671452260029;

}  // namespace

TEST_CASE("correlator_exact") {
    const BellConfiguration cfg = chsh3_optimal_configuration();

    // maximally mixed: all correlators vanish
    const TwoQutritDensity iso = mix_noise(ghz(), 1.0);
    CHECK(approx_equal(correlator_exact(iso, cfg.alice_settings[0], cfg.bob_settings[0]),
                       Cx{}, 1e-12));

    // trivial-phase settings on the maximally entangled state: the joint
    // outcomes always multiply to one
    const TwoQutritDensity rho = mix_noise(ghz(), 0.0);
    const MeasurementSetting a0{PhaseTriple::powers(Cx{1.0}), DetectorKind::StandardZ, "A0"};
    const MeasurementSetting b0{PhaseTriple::powers(Cx{1.0}), DetectorKind::StandardZ, "B0"};
    CHECK(approx_equal(correlator_exact(rho, a0, b0), Cx{1.0, 0.0}, 1e-12));

    // probability-weighted definition agrees with the trace formula
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        const TwoQutritDensity r{test::random_density(rng)};
        const MeasurementSetting a{test::random_phase_triple(rng),
                                   trial % 2 ? DetectorKind::ConjugateZ
                                             : DetectorKind::StandardZ,
                                   ""};
        const MeasurementSetting b{test::random_phase_triple(rng), DetectorKind::StandardZ, ""};
        const Cx via_probs = correlator_exact(r, a, b);
        const Cx via_trace =
            test::expectation_oracle(r.rho(), tensor(observable(a), observable(b)));
        CHECK(approx_equal(via_probs, via_trace, 1e-10));
    }
}

TEST_CASE("correlator_estimate") {
    std::vector<std::pair<Cx, Cx>> one = {{Cx{1.0}, Cx{1.0}}};
    CHECK(approx_equal(correlator_estimate(one), Cx{1.0, 0.0}));

    std::vector<std::pair<Cx, Cx>> paired = {{omega_pow(1), omega_pow(2)},
                                             {omega_pow(2), omega_pow(1)}};
    CHECK(approx_equal(correlator_estimate(paired), Cx{1.0, 0.0}, 1e-12));

    std::vector<std::pair<Cx, Cx>> empty;
    CHECK_THROWS_AS(correlator_estimate(empty), std::invalid_argument);
}

TEST_CASE("correlator_estimate converges to correlator_exact") {
    // seeded Born-rule sampling on one cell of the optimal configuration;
    // each real component of the mean has sigma <= 1/sqrt(N)
    const BellConfiguration cfg = chsh3_optimal_configuration();
    const TwoQutritDensity rho = mix_noise(ghz(), 0.0);
    const MeasurementSetting& a = cfg.alice_settings[0];
    const MeasurementSetting& b = cfg.bob_settings[0];
    const Cx exact = correlator_exact(rho, a, b);

    Rng rng(424242);
    for (std::size_t n : {std::size_t{10000}, std::size_t{1000000}}) {
        std::vector<std::pair<Cx, Cx>> samples;
        samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i) samples.push_back(measure_round(rho, a, b, rng));
        const Cx est = correlator_estimate(samples);
        const double bound = 5.0 / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(est.real() - exact.real()) <= bound);
        CHECK(std::abs(est.imag() - exact.imag()) <= bound);
    }
}

TEST_CASE("chsh3_S") {
    // deterministic local model saturating the bound
    CHECK(chsh3_S(constant_chsh3_set(Cx{1.0})) == doctest::Approx(2.0).epsilon(1e-12));

    const BellConfiguration cfg = chsh3_optimal_configuration();
    const double s_ghz = chsh3_S(chsh3_correlators(mix_noise(ghz(), 0.0), cfg));
    CHECK(std::abs(s_ghz - 2.0 * kChsh3GhzFactor) <= 1e-9);

    const double s_nme = chsh3_S(chsh3_correlators(mix_noise(nme(kNmeGamma), 0.0), cfg));
    CHECK(std::abs(s_nme - 2.0 * kChsh3NmeFactor) <= 1e-9);

    CorrelatorSet missing;
    missing.set(elem::kA1, elem::kB1, Cx{1.0});
    CHECK_THROWS_AS(chsh3_S(missing), std::out_of_range);
}

TEST_CASE("chsh3_T saturation and the S identity") {
    // all squared correlators equal to one: T = 3(w + w^2 - 2) = -9
    CorrelatorSet ones;
    for (const char* a : {elem::kA1Sq, elem::kA2Sq})
        for (const char* b : {elem::kB1Sq, elem::kB2Sq}) ones.set(a, b, Cx{1.0});
    CHECK(approx_equal(chsh3_T(ones), Cx{-9.0, 0.0}, 1e-12));

    // S = -(2/9) Re(T) for correlators of any joint outcome distribution,
    // checked through the U/V intermediates as well
    std::mt19937_64 rng(67);
    const Cx w = omega_pow(1);
    for (int trial = 0; trial < 1000; ++trial) {
        CorrelatorSet c;
        const SampledCorrelator e11 = random_correlator(rng);
        const SampledCorrelator e12 = random_correlator(rng);
        const SampledCorrelator e21 = random_correlator(rng);
        const SampledCorrelator e22 = random_correlator(rng);
        c.set(elem::kA1, elem::kB1, e11.plain);
        c.set(elem::kA1, elem::kB2, e12.plain);
        c.set(elem::kA2, elem::kB1, e21.plain);
        c.set(elem::kA2, elem::kB2, e22.plain);
        c.set(elem::kA1Sq, elem::kB1Sq, e11.squared);
        c.set(elem::kA1Sq, elem::kB2Sq, e12.squared);
        c.set(elem::kA2Sq, elem::kB1Sq, e21.squared);
        c.set(elem::kA2Sq, elem::kB2Sq, e22.squared);

        // squaring a cube-root outcome conjugates it
        CHECK(approx_equal(c.at(elem::kA1Sq, elem::kB1Sq),
                           std::conj(c.at(elem::kA1, elem::kB1)), 1e-12));

        const Cx t = chsh3_T(c);
        CHECK(std::abs(chsh3_S(c) + (2.0 / 9.0) * t.real()) <= 1e-12);
        // squaring conjugates every correlator, so T is the conjugate of the
        // U/V combination (their real parts agree, which is all S needs)
        CHECK(approx_equal(std::conj(t),
                           3.0 * ((w - 1.0) * c.chsh3_u() + (w * w - 1.0) * c.chsh3_v()),
                           1e-12));
    }

    // with_squared_elements derives the squared entries from the plain ones
    const BellConfiguration cfg = chsh3_optimal_configuration();
    const CorrelatorSet ghz_c =
        with_squared_elements(chsh3_correlators(mix_noise(ghz(), 0.0), cfg));
    CHECK(std::abs(-chsh3_T(ghz_c).real() - 4.5 * chsh3_S(ghz_c)) <= 1e-12);
    CHECK(std::abs(-chsh3_T(ghz_c).real() - 9.0 * kChsh3GhzFactor) <= 1e-9);
}

TEST_CASE("hchsh3_T1") {
    // independent symbolic sum of the nine coefficients: with every
    // correlator equal to one, T1 = 9w and the statistic saturates at 9
    const Cx w = omega_pow(1);
    const Cx coeff_sum = (4.0 * w + 2.0) + (w - 1.0) + (4.0 * w - 1.0) - (2.0 * w + 1.0) +
                         (w - 1.0) + (w + 2.0) + (w + 5.0) + (w - 1.0) - (2.0 * w + 4.0);
    CHECK(approx_equal(coeff_sum, 9.0 * w, 1e-12));

    CorrelatorSet ones;
    for (const char* a : {elem::kA1Sq, elem::kA1A2, elem::kA2Sq})
        for (const char* b : {elem::kB1Sq, elem::kB1B2, elem::kB2Sq}) ones.set(a, b, Cx{1.0});
    CHECK(approx_equal(hchsh3_T1(ones), 9.0 * w, 1e-12));
    CHECK(-2.0 * hchsh3_T1(ones).real() == doctest::Approx(9.0).epsilon(1e-12));

    // maximally mixed state: everything vanishes
    const BellConfiguration cfg = hchsh3_optimal_configuration();
    const CorrelatorSet mixed = hchsh3_correlators(mix_noise(ghz(), 1.0), cfg);
    CHECK(std::abs(hchsh3_T1(mixed)) <= 1e-12);

    // the violation the optimal configuration reaches on the entangled state
    const InequalityReport rep = evaluate_hchsh3(mix_noise(ghz(), 0.0), cfg);
    CHECK(std::abs(rep.violation_factor - 1.693) <= 5e-4);
    CHECK(std::abs(rep.violation_factor - kHchsh3GhzFactor) <= 1e-9);
}

TEST_CASE("violation_report") {
    const InequalityReport ghz3 =
        violation_report(Inequality::CHSH3, 2.0 * kChsh3GhzFactor, 2.0);
    CHECK(std::abs(ghz3.noise_threshold - (11.0 - 6.0 * std::sqrt(3.0)) / 2.0) <= 1e-12);

    const InequalityReport h = violation_report(Inequality::HCHSH3, 9.0 * 1.693, 9.0);
    CHECK(std::abs(h.noise_threshold - 0.409) <= 1e-3);

    const InequalityReport flat = violation_report(Inequality::CHSH3, 2.0, 2.0);
    CHECK(flat.violation_factor == doctest::Approx(1.0));
    CHECK(flat.noise_threshold == doctest::Approx(0.0));

    // no violation, no meaningful threshold
    CHECK(violation_report(Inequality::CHSH3, 0.0, 2.0).noise_threshold == 0.0);
    CHECK(violation_report(Inequality::CHSH3, -0.4, 2.0).noise_threshold == 0.0);

    CHECK_THROWS_AS(violation_report(Inequality::CHSH3, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("chsh3 optimal configuration") {
    const BellConfiguration cfg = chsh3_optimal_configuration();
    const InequalityReport rep = evaluate_chsh3(mix_noise(ghz(), 0.0), cfg);
    CHECK(std::abs(rep.violation_factor - kChsh3GhzFactor) <= 1e-9);

    for (const auto& s : cfg.alice_settings) {
        CHECK(is_unitary(observable(s), 1e-11));
        CHECK(approx_equal(test::matrix_power_oracle(observable(s), 3),
                           Matrix<3>::identity(), 1e-11));
    }
}

TEST_CASE("replacing B2 by (1,z^3,z^6) only relabels detectors") {
    const BellConfiguration cfg = chsh3_optimal_configuration();
    const MeasurementSetting b2_alt{PhaseTriple::powers(zeta_pow(3)), DetectorKind::StandardZ,
                                    "B2'"};

    // the alternative basis measures the same observable with outcomes
    // cycled by omega^2
    CHECK(approx_equal(observable(b2_alt),
                       observable(cfg.bob_settings[1]) * omega_pow(2), 1e-12));

    const TwoQutritDensity rho = mix_noise(ghz(), 0.0);
    CorrelatorSet relabeled;
    for (const char* a : {elem::kA1, elem::kA2}) {
        const auto& sa = cfg.alice_settings[cfg.element_map.at(a)];
        relabeled.set(a, elem::kB1, correlator_exact(rho, sa, cfg.bob_settings[0]));
        // undo the cyclic relabel by multiplying Bob's outcomes with omega
        relabeled.set(a, elem::kB2, omega_pow(1) * correlator_exact(rho, sa, b2_alt));
    }
    const double s_orig = chsh3_S(chsh3_correlators(rho, cfg));
    CHECK(std::abs(chsh3_S(relabeled) - s_orig) <= 1e-12);

    // and the raw correlator magnitudes are unchanged
    for (const char* a : {elem::kA1, elem::kA2}) {
        const auto& sa = cfg.alice_settings[cfg.element_map.at(a)];
        CHECK(std::abs(std::abs(correlator_exact(rho, sa, b2_alt)) -
                       std::abs(correlator_exact(rho, sa, cfg.bob_settings[1]))) <= 1e-12);
    }
}

TEST_CASE("hchsh3 optimal configuration is built from operator products") {
    const BellConfiguration cfg = hchsh3_optimal_configuration();
    const auto std_obs = [](Cx t) {
        return observable({PhaseTriple::powers(t), DetectorKind::StandardZ, ""});
    };
    const Matrix<3> a1 = std_obs(zeta_pow(0)), a2 = std_obs(zeta_pow(2));
    const Matrix<3> b1 = std_obs(zeta_pow(1)), b2 = std_obs(zeta_pow(-1));

    CHECK(approx_equal(observable(cfg.alice_settings[cfg.element_map.at(elem::kA1Sq)]), a1 * a1,
                       1e-12));
    CHECK(approx_equal(observable(cfg.alice_settings[cfg.element_map.at(elem::kA1A2)]), a1 * a2,
                       1e-12));
    CHECK(approx_equal(observable(cfg.alice_settings[cfg.element_map.at(elem::kA2Sq)]), a2 * a2,
                       1e-12));
    CHECK(approx_equal(observable(cfg.bob_settings[cfg.element_map.at(elem::kB1Sq)]), b1 * b1,
                       1e-12));
    CHECK(approx_equal(observable(cfg.bob_settings[cfg.element_map.at(elem::kB1B2)]), b1 * b2,
                       1e-12));
    CHECK(approx_equal(observable(cfg.bob_settings[cfg.element_map.at(elem::kB2Sq)]), b2 * b2,
                       1e-12));

    // every concrete measurement uses the permuted detectors
    for (const auto& s : cfg.alice_settings) CHECK(s.detector == DetectorKind::ConjugateZ);
    for (const auto& s : cfg.bob_settings) CHECK(s.detector == DetectorKind::ConjugateZ);
}

TEST_CASE("noise scales both inequalities linearly") {
    const BellConfiguration c3 = chsh3_optimal_configuration();
    const BellConfiguration ch = hchsh3_optimal_configuration();
    const double s0 = evaluate_chsh3(mix_noise(ghz(), 0.0), c3).value;
    const double h0 = evaluate_hchsh3(mix_noise(ghz(), 0.0), ch).value;
    for (double f : {0.1, 0.5}) {
        CHECK(std::abs(evaluate_chsh3(mix_noise(ghz(), f), c3).value - (1.0 - f) * s0) <=
              1e-12);
        CHECK(std::abs(evaluate_hchsh3(mix_noise(ghz(), f), ch).value - (1.0 - f) * h0) <=
              1e-12);
    }
}

TEST_CASE("deterministic local models never beat the bounds") {
    // CHSH-3 over all 81 outcome assignments
    double best_s = -1e9;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int a2 = 0; a2 < 3; ++a2)
            for (int b1 = 0; b1 < 3; ++b1)
                for (int b2 = 0; b2 < 3; ++b2) {
                    CorrelatorSet c;
                    c.set(elem::kA1, elem::kB1, omega_pow(a1 + b1));
                    c.set(elem::kA1, elem::kB2, omega_pow(a1 + b2));
                    c.set(elem::kA2, elem::kB1, omega_pow(a2 + b1));
                    c.set(elem::kA2, elem::kB2, omega_pow(a2 + b2));
                    const double s = chsh3_S(c);
                    CHECK(s <= 2.0 + 1e-12);
                    best_s = std::max(best_s, s);
                }
    CHECK(best_s == doctest::Approx(2.0).epsilon(1e-12));

    // hCHSH-3 over all 729 element assignments, keeping only the ones where
    // the mixed element is the product of the underlying outcomes
    double best_t = -1e9;
    int consistent = 0;
    for (int x1 = 0; x1 < 3; ++x1)
        for (int x2 = 0; x2 < 3; ++x2)
            for (int x3 = 0; x3 < 3; ++x3)
                for (int y1 = 0; y1 < 3; ++y1)
                    for (int y2 = 0; y2 < 3; ++y2)
                        for (int y3 = 0; y3 < 3; ++y3) {
                            if ((2 * x2) % 3 != (x1 + x3) % 3) continue;
                            if ((2 * y2) % 3 != (y1 + y3) % 3) continue;
                            ++consistent;
                            CorrelatorSet c;
                            const std::array<int, 3> xs{x1, x2, x3}, ys{y1, y2, y3};
                            const std::array<const char*, 3> as{elem::kA1Sq, elem::kA1A2,
                                                                elem::kA2Sq};
                            const std::array<const char*, 3> bs{elem::kB1Sq, elem::kB1B2,
                                                                elem::kB2Sq};
                            for (int m = 0; m < 3; ++m)
                                for (int n = 0; n < 3; ++n)
                                    c.set(as[static_cast<std::size_t>(m)],
                                          bs[static_cast<std::size_t>(n)],
                                          omega_pow(xs[static_cast<std::size_t>(m)] +
                                                    ys[static_cast<std::size_t>(n)]));
                            const double v = -2.0 * hchsh3_T1(c).real();
                            CHECK(v <= 9.0 + 1e-12);
                            best_t = std::max(best_t, v);
                        }
    CHECK(consistent == 81);
    CHECK(best_t == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("correlator set rejects out-of-range values and missing keys") {
    CorrelatorSet c;
    CHECK_THROWS_AS(c.set(elem::kA1, elem::kB1, Cx{1.5, 0.0}), std::invalid_argument);
    c.set(elem::kA1, elem::kB1, Cx{0.5, 0.1});
    CHECK(c.contains(elem::kA1, elem::kB1));
    CHECK_FALSE(c.contains(elem::kA1, elem::kB2));
    CHECK_THROWS_AS(c.at(elem::kA1, elem::kB2), std::out_of_range);
}
