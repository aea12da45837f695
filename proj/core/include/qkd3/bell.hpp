// Correlation functions and the two Bell inequalities the protocols test:
// CHSH-3 (classical bound 2) and its homogeneous relative hCHSH-3 (classical
// bound 9, elements are products of two observables per party). Also the
// canonical measurement configurations that maximize each violation.

#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qkd3/states.hpp"
#include "qkd3/tritter.hpp"

namespace qkd3 {

/// Central registry of inequality element labels. The hCHSH-3 coefficient
/// table is keyed on these, so every producer of correlators must use them.
namespace elem {
inline constexpr const char* kA1 = "A1";
inline constexpr const char* kA2 = "A2";
inline constexpr const char* kB1 = "B1";
inline constexpr const char* kB2 = "B2";
inline constexpr const char* kA1Sq = "A1^2";
inline constexpr const char* kA1A2 = "A1A2";
inline constexpr const char* kA2Sq = "A2^2";
inline constexpr const char* kB1Sq = "B1^2";
inline constexpr const char* kB1B2 = "B1B2";
inline constexpr const char* kB2Sq = "B2^2";
}  // namespace elem

enum class Inequality { CHSH3, HCHSH3 };

inline constexpr double kChsh3Bound = 2.0;
inline constexpr double kHchsh3Bound = 9.0;

/// Map from (A-side element, B-side element) to a complex correlation value.
/// Outcomes have unit modulus, so every honest correlator has modulus <= 1.
class CorrelatorSet {
  public:
    using Key = std::pair<std::string, std::string>;

    void set(std::string a_element, std::string b_element, Cx value);
    Cx at(const std::string& a_element, const std::string& b_element) const;
    bool contains(const std::string& a_element, const std::string& b_element) const;
    std::size_t size() const { return entries_.size(); }

    /// E(A1B1) - E(A2B1) + E(A2B2); intermediate of the identity relating
    /// chsh3_S to chsh3_T (see the bell tests).
    Cx chsh3_u() const;
    /// E(A1B2), the companion intermediate.
    Cx chsh3_v() const;

  private:
    std::map<Key, Cx> entries_;
};

/// Adds ("Ai^2","Bj^2") = conj of ("Ai","Bj") for i,j in {1,2}. Valid because
/// outcomes are cube roots of unity, where x^2 = conj(x).
CorrelatorSet with_squared_elements(CorrelatorSet c);

struct InequalityReport {
    Inequality name = Inequality::CHSH3;
    double value = 0.0;
    double classical_bound = 0.0;
    double violation_factor = 0.0;
    double noise_threshold = 0.0;
};

/// Named measurement settings for both parties plus the assignment of
/// inequality elements to setting indices.
struct BellConfiguration {
    std::vector<MeasurementSetting> alice_settings;
    std::vector<MeasurementSetting> bob_settings;
    std::map<std::string, std::size_t> element_map;
};

/// Born-rule joint outcome distribution over the 9 detector pairs,
/// p[3k+l] = Tr(rho (P_k (x) Q_l)). Throws if a probability is negative
/// beyond tolerance.
std::array<double, 9> joint_distribution(const TwoQutritDensity& rho,
                                         const MeasurementContext& alice,
                                         const MeasurementContext& bob);

/// E(ab) = sum_kl p_kl outcome_k outcome_l over the two measurement
/// contexts; equals Tr(rho (A (x) B)).
Cx correlator_exact(const TwoQutritDensity& rho, const MeasurementSetting& a,
                    const MeasurementSetting& b);

/// Arithmetic mean of a_outcome * b_outcome over a non-empty sample list.
Cx correlator_estimate(std::span<const std::pair<Cx, Cx>> samples);

/// S = Re(E11 + E12 - E21 + E22) + (1/sqrt3) Im(E11 - E12 - E21 + E22),
/// from the four E(Ai,Bj) entries. Local-realistic bound is 2.
double chsh3_S(const CorrelatorSet& c);

/// T-form of the same inequality, from the four E(Ai^2,Bj^2) entries:
/// T = 3[(w^2-1)E(A1^2B1^2) + (w-1)E(A1^2B2^2) + (1-w^2)E(A2^2B1^2)
///       + (w^2-1)E(A2^2B2^2)], with Re(-T) <= 9 and S = -(2/9)Re(T).
Cx chsh3_T(const CorrelatorSet& c);

/// Homogeneous inequality polynomial over the nine product-element
/// correlators {A1^2,A1A2,A2^2} x {B1^2,B1B2,B2^2}. The tested statistic is
/// -2 Re(T1) with local-realistic bound 9.
Cx hchsh3_T1(const CorrelatorSet& c);

/// Fills violation_factor = value/bound and
/// noise_threshold = max(0, 1 - 1/violation_factor).
InequalityReport violation_report(Inequality name, double value, double classical_bound);

/// The four optimal bases: A1 (1,1,1), A2 (1,z^2,z^4), B1 (1,z,z^2),
/// B2 (1,z^-1,z^-2) with z = e^{2 pi i/12}, standard detectors.
BellConfiguration chsh3_optimal_configuration();

/// Product-observable configuration maximizing hCHSH-3: each element is a
/// single tritter measurement with ConjugateZ detectors, built as
/// product_setting of the corresponding CHSH-3 optimal triples.
BellConfiguration hchsh3_optimal_configuration();

/// Exact correlators of a configuration under rho, keyed by element label.
CorrelatorSet chsh3_correlators(const TwoQutritDensity& rho, const BellConfiguration& cfg);
CorrelatorSet hchsh3_correlators(const TwoQutritDensity& rho, const BellConfiguration& cfg);

InequalityReport evaluate_chsh3(const TwoQutritDensity& rho, const BellConfiguration& cfg);
InequalityReport evaluate_hchsh3(const TwoQutritDensity& rho, const BellConfiguration& cfg);

}  // namespace qkd3
