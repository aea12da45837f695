#include "qkd3/protocol.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <stdexcept>

namespace qkd3 {

namespace {

const std::array<std::string, 6> kH3debPairs = {"00", "02", "22", "11", "13", "33"};

int h3deb_pair_index(std::string_view pair) {
    for (std::size_t i = 0; i < kH3debPairs.size(); ++i)
        if (kH3debPairs[i] == pair) return static_cast<int>(i);
    throw std::invalid_argument("h3DEB: pair '" + std::string(pair) +
                                "' is not in {00,02,22,11,13,33}");
}

SiftClass sift_h3deb_index(int i, int j) {
    if (i == j) return SiftClass::Key;
    if (i < 3 && j >= 3) return SiftClass::Check1;
    if (i >= 3 && j < 3) return SiftClass::Check2;
    return SiftClass::Discard;
}

std::array<std::uint8_t, 3> detector_exponents(const MeasurementSetting& s) {
    std::array<std::uint8_t, 3> e{};
    for (int k = 0; k < 3; ++k)
        e[static_cast<std::size_t>(k)] =
            static_cast<std::uint8_t>(s.detector == DetectorKind::ConjugateZ ? (3 - k) % 3 : k);
    return e;
}

int outcome_exponent(Cx outcome) {
    for (int m = 0; m < 3; ++m)
        if (std::abs(outcome - omega_pow(m)) <= 1e-9) return m;
    throw std::invalid_argument("outcome is not a cube root of unity");
}

}  // namespace

std::span<const std::string> h3deb_pairs() { return kH3debPairs; }

MeasurementSetting alice_setting_3deb(int a) {
    if (a < 0 || a > 3) throw std::invalid_argument("alice_setting_3deb: index must be in 0..3");
    return {PhaseTriple::powers(zeta_pow(a)), DetectorKind::StandardZ,
            "A" + std::to_string(a)};
}

MeasurementSetting bob_setting_3deb(int b) {
    if (b < 0 || b > 3) throw std::invalid_argument("bob_setting_3deb: index must be in 0..3");
    return {PhaseTriple::powers(zeta_pow(-b)), DetectorKind::StandardZ,
            "B" + std::to_string(b)};
}

MeasurementSetting setting_h3deb(Party party, std::string_view pair) {
    h3deb_pair_index(pair);  // validates membership
    const int i = pair[0] - '0';
    const int j = pair[1] - '0';
    const int sign = party == Party::Alice ? 1 : -1;
    MeasurementSetting s = product_setting(PhaseTriple::powers(zeta_pow(sign * i)),
                                           PhaseTriple::powers(zeta_pow(sign * j)));
    s.label = (party == Party::Alice ? "A" : "B") + std::string(pair);
    return s;
}

const std::vector<MeasurementSetting>& protocol_settings(ProtocolVariant variant, Party party) {
    static const std::vector<MeasurementSetting> a3 = {
        alice_setting_3deb(0), alice_setting_3deb(1), alice_setting_3deb(2),
        alice_setting_3deb(3)};
    static const std::vector<MeasurementSetting> b3 = {
        bob_setting_3deb(0), bob_setting_3deb(1), bob_setting_3deb(2), bob_setting_3deb(3)};
    static const std::vector<MeasurementSetting> ah = [] {
        std::vector<MeasurementSetting> v;
        for (const auto& p : kH3debPairs) v.push_back(setting_h3deb(Party::Alice, p));
        return v;
    }();
    static const std::vector<MeasurementSetting> bh = [] {
        std::vector<MeasurementSetting> v;
        for (const auto& p : kH3debPairs) v.push_back(setting_h3deb(Party::Bob, p));
        return v;
    }();
    if (variant == ProtocolVariant::ThreeDEB) return party == Party::Alice ? a3 : b3;
    return party == Party::Alice ? ah : bh;
}

SiftClass sift_3deb(int a, int b) {
    if (a < 0 || a > 3 || b < 0 || b > 3)
        throw std::invalid_argument("sift_3deb: indices must be in 0..3");
    if (a == b) return SiftClass::Key;
    const bool a_even = a % 2 == 0;
    const bool b_even = b % 2 == 0;
    if (a_even && !b_even) return SiftClass::Check1;  // (0,1),(0,3),(2,1),(2,3)
    if (!a_even && b_even) return SiftClass::Check2;  // (1,0),(1,2),(3,0),(3,2)
    return SiftClass::Discard;
}

SiftClass sift_h3deb(std::string_view ij, std::string_view kl) {
    return sift_h3deb_index(h3deb_pair_index(ij), h3deb_pair_index(kl));
}

std::pair<Cx, Cx> measure_round(const TwoQutritDensity& rho, const MeasurementSetting& a,
                                const MeasurementSetting& b, Rng& rng) {
    const MeasurementContext ca = measurement_context(a);
    const MeasurementContext cb = measurement_context(b);
    const std::array<double, 9> p = joint_distribution(rho, ca, cb);
    const double u = rng.uniform01();
    double acc = 0.0;
    int cell = 8;
    for (int i = 0; i < 9; ++i) {
        acc += p[static_cast<std::size_t>(i)];
        if (u < acc) {
            cell = i;
            break;
        }
    }
    return {ca.outcomes[static_cast<std::size_t>(cell / 3)],
            cb.outcomes[static_cast<std::size_t>(cell % 3)]};
}

int key_trit(Cx outcome, Party party) {
    const int m = outcome_exponent(outcome);
    return party == Party::Alice ? m : (3 - m) % 3;
}

const CheckElementMap& check_element_map(ProtocolVariant variant, CheckClass which) {
    using E = CheckElementMap::Entry;
    // 3DEB check1: Bob's settings 3 and 1 play B1 and B2; setting 3 measures
    // the B1 basis with detectors cycled by one step, so its outcomes are
    // relabeled by omega^2.
    static const CheckElementMap deb1{
        {E{0, elem::kA1, 0}, E{2, elem::kA2, 0}},
        {E{3, elem::kB1, 2}, E{1, elem::kB2, 0}},
        false,
        true};
    // 3DEB check2 needs no relabeling at all.
    static const CheckElementMap deb2{
        {E{1, elem::kA1, 0}, E{3, elem::kA2, 0}},
        {E{0, elem::kB1, 0}, E{2, elem::kB2, 0}},
        false,
        true};
    // h3DEB setting indices follow kH3debPairs: 0..2 = {00,02,22},
    // 3..5 = {11,13,33}. Check1 is the conjugate mirror of check2: Bob's
    // data feeds the A side and both parties conjugate their outcomes.
    static const CheckElementMap hdeb1{
        {E{0, elem::kB1Sq, 0}, E{1, elem::kB1B2, 0}, E{2, elem::kB2Sq, 0}},
        {E{3, elem::kA1Sq, 0}, E{4, elem::kA1A2, 0}, E{5, elem::kA2Sq, 0}},
        true,
        false};
    static const CheckElementMap hdeb2{
        {E{3, elem::kA1Sq, 0}, E{4, elem::kA1A2, 0}, E{5, elem::kA2Sq, 0}},
        {E{0, elem::kB1Sq, 0}, E{1, elem::kB1B2, 0}, E{2, elem::kB2Sq, 0}},
        false,
        true};
    if (variant == ProtocolVariant::ThreeDEB)
        return which == CheckClass::Check1 ? deb1 : deb2;
    return which == CheckClass::Check1 ? hdeb1 : hdeb2;
}

namespace {

double evaluate_check_statistic(ProtocolVariant variant, const CorrelatorSet& c,
                                Inequality* name, double* bound) {
    if (variant == ProtocolVariant::ThreeDEB) {
        *name = Inequality::CHSH3;
        *bound = kChsh3Bound;
        return chsh3_S(c);
    }
    *name = Inequality::HCHSH3;
    *bound = kHchsh3Bound;
    return -2.0 * hchsh3_T1(c).real();
}

}  // namespace

CheckResult estimate_violation(std::span<const RoundRecord> check_rounds,
                               ProtocolVariant variant, CheckClass which,
                               double abort_margin) {
    const CheckElementMap& map = check_element_map(variant, which);
    const SiftClass wanted = which == CheckClass::Check1 ? SiftClass::Check1 : SiftClass::Check2;
    const std::size_t na = map.alice.size();
    const std::size_t nb = map.bob.size();

    auto entry_index = [](const std::vector<CheckElementMap::Entry>& entries,
                          std::uint8_t setting) -> std::size_t {
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].setting == setting) return i;
        throw std::invalid_argument("estimate_violation: record is not in the requested class");
    };

    std::vector<std::vector<std::pair<Cx, Cx>>> cells(na * nb);
    for (const RoundRecord& r : check_rounds) {
        if (r.sift != wanted)
            throw std::invalid_argument("estimate_violation: record is not in the requested class");
        const std::size_t ia = entry_index(map.alice, r.alice_setting);
        const std::size_t ib = entry_index(map.bob, r.bob_setting);
        int ae = detail::mod3(r.alice_outcome_exp + map.alice[ia].phase_pow);
        int be = detail::mod3(r.bob_outcome_exp + map.bob[ib].phase_pow);
        if (map.conjugate_outcomes) {
            ae = detail::mod3(-ae);
            be = detail::mod3(-be);
        }
        cells[ia * nb + ib].emplace_back(omega_pow(ae), omega_pow(be));
    }

    CheckResult result;
    result.which = which;
    result.rounds_used = check_rounds.size();
    CorrelatorSet c;
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t ib = 0; ib < nb; ++ib) {
            const auto& samples = cells[ia * nb + ib];
            const char* ea = map.alice[ia].element;
            const char* eb = map.bob[ib].element;
            const auto key = map.alice_feeds_a_side ? std::pair<std::string, std::string>{ea, eb}
                                                    : std::pair<std::string, std::string>{eb, ea};
            if (samples.empty())
                throw std::runtime_error("estimate_violation: no samples for E(" + key.first +
                                         ", " + key.second + ")");
            c.set(key.first, key.second, correlator_estimate(samples));
            result.cell_counts[key] = samples.size();
        }
    }

    Inequality name{};
    double bound = 0.0;
    const double value = evaluate_check_statistic(variant, c, &name, &bound);
    result.report = violation_report(name, value, bound);
    result.abort = value <= bound * (1.0 + abort_margin);
    return result;
}

ProtocolOutcome run_protocol(const ProtocolConfig& config) {
    if (!(config.noise_fraction >= 0.0 && config.noise_fraction <= 1.0))
        throw std::invalid_argument("run_protocol: noise fraction must lie in [0, 1]");
    if (!(config.abort_margin >= 0.0))
        throw std::invalid_argument("run_protocol: abort margin must be nonnegative");

    const auto& alice_settings = protocol_settings(config.variant, Party::Alice);
    const auto& bob_settings = protocol_settings(config.variant, Party::Bob);
    const std::uint32_t na = static_cast<std::uint32_t>(alice_settings.size());
    const std::uint32_t nb = static_cast<std::uint32_t>(bob_settings.size());
    const TwoQutritDensity rho = mix_noise(ghz(), config.noise_fraction);

    // Every round samples an identical, independent copy of rho, so the
    // per-pair joint distributions can be tabulated once.
    std::vector<MeasurementContext> alice_ctx, bob_ctx;
    std::vector<std::array<std::uint8_t, 3>> alice_exp, bob_exp;
    for (const auto& s : alice_settings) {
        alice_ctx.push_back(measurement_context(s));
        alice_exp.push_back(detector_exponents(s));
    }
    for (const auto& s : bob_settings) {
        bob_ctx.push_back(measurement_context(s));
        bob_exp.push_back(detector_exponents(s));
    }
    std::vector<std::array<double, 9>> cumulative(na * nb);
    for (std::uint32_t i = 0; i < na; ++i) {
        for (std::uint32_t j = 0; j < nb; ++j) {
            const auto p = joint_distribution(rho, alice_ctx[i], bob_ctx[j]);
            auto& cum = cumulative[i * nb + j];
            double acc = 0.0;
            for (int cell = 0; cell < 9; ++cell) {
                acc += p[static_cast<std::size_t>(cell)];
                cum[static_cast<std::size_t>(cell)] = acc;
            }
        }
    }

    Rng alice_rng = Rng::substream(config.rng_seed, 0);
    Rng bob_rng = Rng::substream(config.rng_seed, 1);
    Rng measure_rng = Rng::substream(config.rng_seed, 2);

    ProtocolOutcome out;
    std::size_t key_count = 0, check1_count = 0, check2_count = 0;
    auto finished = [&] {
        return key_count >= config.target_key_length &&
               check1_count >= config.min_check_rounds &&
               check2_count >= config.min_check_rounds;
    };

    while (!finished()) {
        const std::uint32_t i = alice_rng.uniform_below(na);
        const std::uint32_t j = bob_rng.uniform_below(nb);
        const double u = measure_rng.uniform01();
        const auto& cum = cumulative[i * nb + j];
        int cell = 0;
        while (cell < 8 && u >= cum[static_cast<std::size_t>(cell)]) ++cell;

        RoundRecord rec;
        rec.alice_setting = static_cast<std::uint8_t>(i);
        rec.bob_setting = static_cast<std::uint8_t>(j);
        rec.alice_outcome_exp = alice_exp[i][static_cast<std::size_t>(cell / 3)];
        rec.bob_outcome_exp = bob_exp[j][static_cast<std::size_t>(cell % 3)];
        rec.sift = config.variant == ProtocolVariant::ThreeDEB
                       ? sift_3deb(static_cast<int>(i), static_cast<int>(j))
                       : sift_h3deb_index(static_cast<int>(i), static_cast<int>(j));
        switch (rec.sift) {
            case SiftClass::Key:
                ++key_count;
                out.key_trits.push_back(rec.alice_outcome_exp);
                break;
            case SiftClass::Check1: ++check1_count; break;
            case SiftClass::Check2: ++check2_count; break;
            case SiftClass::Discard: break;
        }
        out.rounds.push_back(rec);
    }

    if (config.min_check_rounds > 0) {
        std::vector<RoundRecord> c1, c2;
        c1.reserve(check1_count);
        c2.reserve(check2_count);
        for (const RoundRecord& r : out.rounds) {
            if (r.sift == SiftClass::Check1) c1.push_back(r);
            if (r.sift == SiftClass::Check2) c2.push_back(r);
        }
        out.check_reports.push_back(
            estimate_violation(c1, config.variant, CheckClass::Check1, config.abort_margin));
        out.check_reports.push_back(
            estimate_violation(c2, config.variant, CheckClass::Check2, config.abort_margin));
        out.aborted = out.check_reports[0].abort || out.check_reports[1].abort;
    }
    if (out.aborted) out.key_trits.clear();
    return out;
}

double exact_check_value(ProtocolVariant variant, CheckClass which,
                         const TwoQutritDensity& rho) {
    const CheckElementMap& map = check_element_map(variant, which);
    const auto& alice_settings = protocol_settings(variant, Party::Alice);
    const auto& bob_settings = protocol_settings(variant, Party::Bob);

    auto element_observable = [&](const CheckElementMap::Entry& e,
                                  const std::vector<MeasurementSetting>& settings) {
        Matrix<3> o = observable(settings[e.setting]) * omega_pow(e.phase_pow);
        return map.conjugate_outcomes ? dagger(o) : o;
    };

    CorrelatorSet c;
    for (const auto& ea : map.alice) {
        for (const auto& eb : map.bob) {
            const Cx e = expectation(rho.rho(), tensor(element_observable(ea, alice_settings),
                                                       element_observable(eb, bob_settings)));
            if (map.alice_feeds_a_side)
                c.set(ea.element, eb.element, e);
            else
                c.set(eb.element, ea.element, e);
        }
    }
    Inequality name{};
    double bound = 0.0;
    return evaluate_check_statistic(variant, c, &name, &bound);
}

void write_transcript(std::ostream& out, const ProtocolOutcome& outcome,
                      ProtocolVariant variant) {
    const auto& alice_settings = protocol_settings(variant, Party::Alice);
    const auto& bob_settings = protocol_settings(variant, Party::Bob);
    out << "round_index,alice_setting,bob_setting,alice_outcome_exponent,"
           "bob_outcome_exponent,sift_class\n";
    for (std::size_t i = 0; i < outcome.rounds.size(); ++i) {
        const RoundRecord& r = outcome.rounds[i];
        out << i << ',' << alice_settings[r.alice_setting].label << ','
            << bob_settings[r.bob_setting].label << ','
            << static_cast<int>(r.alice_outcome_exp) << ','
            << static_cast<int>(r.bob_outcome_exp) << ',' << to_string(r.sift) << '\n';
    }
}

std::string_view to_string(SiftClass c) {
    switch (c) {
        case SiftClass::Key: return "key";
        case SiftClass::Check1: return "check1";
        case SiftClass::Check2: return "check2";
        case SiftClass::Discard: return "discard";
    }
    return "?";
}

std::string_view to_string(ProtocolVariant v) {
    return v == ProtocolVariant::ThreeDEB ? "3deb" : "h3deb";
}

}  // namespace qkd3
