// Round-by-round execution of the two entanglement-based key distribution
// protocols. 3DEB: four single-tritter settings per party, CHSH-3 checks.
// h3DEB: six product-observable settings per party (pairs from the set
// {00,02,22,11,13,33}), hCHSH-3 checks. Rounds sift into key, two check
// classes, or discard, purely from the announced setting labels.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkd3/bell.hpp"
#include "qkd3/rng.hpp"

namespace qkd3 {

enum class ProtocolVariant { ThreeDEB, HThreeDEB };
enum class Party { Alice, Bob };
enum class SiftClass { Key, Check1, Check2, Discard };
enum class CheckClass { Check1, Check2 };

/// The six index pairs of the h3DEB setting set, in canonical order.
std::span<const std::string> h3deb_pairs();

/// Alice's 3DEB setting a in {0..3}: phases (1, z^a, z^{2a}), standard
/// detectors, label "Aa".
MeasurementSetting alice_setting_3deb(int a);

/// Bob's 3DEB setting b in {0..3}: phases (1, z^-b, z^-2b) -- the entrywise
/// conjugate of Alice's -- standard detectors, label "Bb".
MeasurementSetting bob_setting_3deb(int b);

/// h3DEB product setting for pair ij in {00,02,22,11,13,33}: the single
/// tritter measuring the operator product of the party's settings i and j,
/// ConjugateZ detectors. Labels "Aij" / "Bij".
MeasurementSetting setting_h3deb(Party party, std::string_view pair);

/// The variant's full setting list for one party; RoundRecord setting
/// indices refer to this order.
const std::vector<MeasurementSetting>& protocol_settings(ProtocolVariant variant, Party party);

SiftClass sift_3deb(int a, int b);
SiftClass sift_h3deb(std::string_view ij, std::string_view kl);

struct ProtocolConfig {
    ProtocolVariant variant = ProtocolVariant::HThreeDEB;
    double noise_fraction = 0.0;
    std::size_t target_key_length = 0;
    std::size_t min_check_rounds = 10'000;  // per check class
    double abort_margin = 0.0;
    std::uint64_t rng_seed = 1;
};

/// One protocol round. Outcomes are stored as exponents e with outcome =
/// omega^e, which keeps sifting and key extraction exact.
struct RoundRecord {
    std::uint8_t alice_setting = 0;  // index into protocol_settings
    std::uint8_t bob_setting = 0;
    std::uint8_t alice_outcome_exp = 0;
    std::uint8_t bob_outcome_exp = 0;
    SiftClass sift = SiftClass::Discard;

    Cx alice_outcome() const { return omega_pow(alice_outcome_exp); }
    Cx bob_outcome() const { return omega_pow(bob_outcome_exp); }
};

struct CheckResult {
    CheckClass which = CheckClass::Check1;
    InequalityReport report;
    bool abort = false;
    std::size_t rounds_used = 0;
    /// Sample count per correlator cell, keyed like the CorrelatorSet.
    std::map<std::pair<std::string, std::string>, std::size_t> cell_counts;
};

struct ProtocolOutcome {
    std::vector<int> key_trits;  // Alice's trits; withheld (empty) on abort
    std::vector<RoundRecord> rounds;
    std::vector<CheckResult> check_reports;
    bool aborted = false;
};

/// Samples one joint measurement of rho with settings a and b from the
/// Born-rule distribution; returns the two detector outcomes.
std::pair<Cx, Cx> measure_round(const TwoQutritDensity& rho, const MeasurementSetting& a,
                                const MeasurementSetting& b, Rng& rng);

/// Key extraction from an outcome omega^m: Alice keeps m, Bob maps to
/// (3 - m) mod 3. The two agree on every noiseless key round of either
/// variant (the post-tritter joint state is supported on |00>,|12>,|21>).
int key_trit(Cx outcome, Party party);

/// Estimates the check statistic from all rounds of one check class, via the
/// variant's validated element map (see check_element_map below). Abort is
/// declared when value <= bound * (1 + abort_margin). Throws if a record is
/// not of the requested class or a correlator cell has no samples.
CheckResult estimate_violation(std::span<const RoundRecord> check_rounds,
                               ProtocolVariant variant, CheckClass which,
                               double abort_margin);

/// Runs rounds until the key target and both per-class check-round minimums
/// are met, then evaluates both checks. Identical configs produce bit
/// identical transcripts.
ProtocolOutcome run_protocol(const ProtocolConfig& config);

/// How the rounds of one check class feed the inequality. Each party's
/// settings map to inequality elements with an outcome relabel
/// (outcome' = omega^phase_pow * outcome, then complex conjugation if
/// conjugate_outcomes). The maps below are frozen after exact validation:
/// with them, the noiseless check statistic equals the configuration
/// maximum (2 * 1.436467 for CHSH-3, 9 * 1.693067 for hCHSH-3), which
/// exact_check_value recomputes and the tests assert.
///
/// All relabels are induced by relabeling the party's underlying
/// observables, so the local-realistic bound is unchanged.
struct CheckElementMap {
    struct Entry {
        std::uint8_t setting;  // index into protocol_settings
        const char* element;
        int phase_pow;
    };
    std::vector<Entry> alice;
    std::vector<Entry> bob;
    bool conjugate_outcomes = false;
    /// Whether Alice's entries carry the inequality's A-side elements. In
    /// h3DEB check1 they do not: Bob's data feeds the A side (the class is
    /// the conjugate mirror of check2).
    bool alice_feeds_a_side = true;
};

const CheckElementMap& check_element_map(ProtocolVariant variant, CheckClass which);

/// Exact inequality value of a check class under rho, computed through the
/// same element map the estimator uses.
double exact_check_value(ProtocolVariant variant, CheckClass which,
                         const TwoQutritDensity& rho);

/// One CSV row per round: round_index, setting labels, outcome exponents,
/// sift class.
void write_transcript(std::ostream& out, const ProtocolOutcome& outcome,
                      ProtocolVariant variant);

std::string_view to_string(SiftClass c);
std::string_view to_string(ProtocolVariant v);

}  // namespace qkd3
