#include "qkd3/bell.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qkd3 {

namespace {

const Cx kOmega = omega_pow(1);
const Cx kOmega2 = omega_pow(2);

// Coefficient of E(row, col) in T1; rows {A1^2, A1A2, A2^2},
// cols {B1^2, B1B2, B2^2}.
const std::array<std::array<Cx, 3>, 3> kT1Coefficients = {{
    {4.0 * kOmega + 2.0, kOmega - 1.0, 4.0 * kOmega - 1.0},
    {-(2.0 * kOmega + 1.0), kOmega - 1.0, kOmega + 2.0},
    {kOmega + 5.0, kOmega - 1.0, -(2.0 * kOmega + 4.0)},
}};

const std::array<const char*, 3> kASide = {elem::kA1Sq, elem::kA1A2, elem::kA2Sq};
const std::array<const char*, 3> kBSide = {elem::kB1Sq, elem::kB1B2, elem::kB2Sq};

[[noreturn]] void throw_missing(const std::string& a, const std::string& b) {
    throw std::out_of_range("CorrelatorSet: missing entry E(" + a + ", " + b + ")");
}

}  // namespace

void CorrelatorSet::set(std::string a_element, std::string b_element, Cx value) {
    if (std::abs(value) > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "CorrelatorSet: |E(" << a_element << ", " << b_element << ")| = "
            << std::abs(value) << " exceeds 1";
        throw std::invalid_argument(msg.str());
    }
    entries_[Key{std::move(a_element), std::move(b_element)}] = value;
}

Cx CorrelatorSet::at(const std::string& a_element, const std::string& b_element) const {
    auto it = entries_.find(Key{a_element, b_element});
    if (it == entries_.end()) throw_missing(a_element, b_element);
    return it->second;
}

bool CorrelatorSet::contains(const std::string& a_element, const std::string& b_element) const {
    return entries_.count(Key{a_element, b_element}) != 0;
}

Cx CorrelatorSet::chsh3_u() const {
    return at(elem::kA1, elem::kB1) - at(elem::kA2, elem::kB1) + at(elem::kA2, elem::kB2);
}

Cx CorrelatorSet::chsh3_v() const { return at(elem::kA1, elem::kB2); }

CorrelatorSet with_squared_elements(CorrelatorSet c) {
    c.set(elem::kA1Sq, elem::kB1Sq, std::conj(c.at(elem::kA1, elem::kB1)));
    c.set(elem::kA1Sq, elem::kB2Sq, std::conj(c.at(elem::kA1, elem::kB2)));
    c.set(elem::kA2Sq, elem::kB1Sq, std::conj(c.at(elem::kA2, elem::kB1)));
    c.set(elem::kA2Sq, elem::kB2Sq, std::conj(c.at(elem::kA2, elem::kB2)));
    return c;
}

std::array<double, 9> joint_distribution(const TwoQutritDensity& rho,
                                         const MeasurementContext& alice,
                                         const MeasurementContext& bob) {
    std::array<double, 9> p{};
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            const Cx v = expectation(
                rho.rho(), tensor(alice.projectors[static_cast<std::size_t>(k)],
                                  bob.projectors[static_cast<std::size_t>(l)]));
            double prob = v.real();
            if (prob < -kDefaultTol)
                throw std::runtime_error("joint_distribution: negative probability");
            if (prob < 0.0) prob = 0.0;
            p[static_cast<std::size_t>(3 * k + l)] = prob;
            sum += prob;
        }
    }
    // Renormalize away the last few ulps so cumulative sampling hits 1.
    for (double& q : p) q /= sum;
    return p;
}

Cx correlator_exact(const TwoQutritDensity& rho, const MeasurementSetting& a,
                    const MeasurementSetting& b) {
    const MeasurementContext ca = measurement_context(a);
    const MeasurementContext cb = measurement_context(b);
    const std::array<double, 9> p = joint_distribution(rho, ca, cb);
    Cx e{};
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            e += p[static_cast<std::size_t>(3 * k + l)] *
                 ca.outcomes[static_cast<std::size_t>(k)] *
                 cb.outcomes[static_cast<std::size_t>(l)];
    return e;
}

Cx correlator_estimate(std::span<const std::pair<Cx, Cx>> samples) {
    if (samples.empty())
        throw std::invalid_argument("correlator_estimate: empty sample list");
    Cx sum{};
    for (const auto& [a, b] : samples) sum += a * b;
    return sum / static_cast<double>(samples.size());
}

double chsh3_S(const CorrelatorSet& c) {
    const Cx e11 = c.at(elem::kA1, elem::kB1);
    const Cx e12 = c.at(elem::kA1, elem::kB2);
    const Cx e21 = c.at(elem::kA2, elem::kB1);
    const Cx e22 = c.at(elem::kA2, elem::kB2);
    return (e11 + e12 - e21 + e22).real() +
           (e11 - e12 - e21 + e22).imag() / std::sqrt(3.0);
}

Cx chsh3_T(const CorrelatorSet& c) {
    return 3.0 * ((kOmega2 - 1.0) * c.at(elem::kA1Sq, elem::kB1Sq) +
                  (kOmega - 1.0) * c.at(elem::kA1Sq, elem::kB2Sq) +
                  (1.0 - kOmega2) * c.at(elem::kA2Sq, elem::kB1Sq) +
                  (kOmega2 - 1.0) * c.at(elem::kA2Sq, elem::kB2Sq));
}

Cx hchsh3_T1(const CorrelatorSet& c) {
    Cx t{};
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            t += kT1Coefficients[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] *
                 c.at(kASide[static_cast<std::size_t>(m)], kBSide[static_cast<std::size_t>(n)]);
    return t;
}

InequalityReport violation_report(Inequality name, double value, double classical_bound) {
    if (!(classical_bound > 0.0))
        throw std::invalid_argument("violation_report: classical bound must be positive");
    InequalityReport r;
    r.name = name;
    r.value = value;
    r.classical_bound = classical_bound;
    r.violation_factor = value / classical_bound;
    r.noise_threshold =
        r.violation_factor > 0.0 ? std::max(0.0, 1.0 - 1.0 / r.violation_factor) : 0.0;
    return r;
}

BellConfiguration chsh3_optimal_configuration() {
    BellConfiguration cfg;
    cfg.alice_settings = {
        {PhaseTriple::powers(zeta_pow(0)), DetectorKind::StandardZ, elem::kA1},
        {PhaseTriple::powers(zeta_pow(2)), DetectorKind::StandardZ, elem::kA2},
    };
    cfg.bob_settings = {
        {PhaseTriple::powers(zeta_pow(1)), DetectorKind::StandardZ, elem::kB1},
        {PhaseTriple::powers(zeta_pow(-1)), DetectorKind::StandardZ, elem::kB2},
    };
    cfg.element_map = {{elem::kA1, 0}, {elem::kA2, 1}, {elem::kB1, 0}, {elem::kB2, 1}};
    return cfg;
}

BellConfiguration hchsh3_optimal_configuration() {
    const PhaseTriple theta_a = PhaseTriple::powers(zeta_pow(0));
    const PhaseTriple lambda_a = PhaseTriple::powers(zeta_pow(2));
    const PhaseTriple theta_b = PhaseTriple::powers(zeta_pow(1));
    const PhaseTriple lambda_b = PhaseTriple::powers(zeta_pow(-1));
    BellConfiguration cfg;
    cfg.alice_settings = {
        product_setting(theta_a, theta_a, elem::kA1Sq),
        product_setting(theta_a, lambda_a, elem::kA1A2),
        product_setting(lambda_a, lambda_a, elem::kA2Sq),
    };
    cfg.bob_settings = {
        product_setting(theta_b, theta_b, elem::kB1Sq),
        product_setting(theta_b, lambda_b, elem::kB1B2),
        product_setting(lambda_b, lambda_b, elem::kB2Sq),
    };
    cfg.element_map = {{elem::kA1Sq, 0}, {elem::kA1A2, 1}, {elem::kA2Sq, 2},
                       {elem::kB1Sq, 0}, {elem::kB1B2, 1}, {elem::kB2Sq, 2}};
    return cfg;
}

CorrelatorSet chsh3_correlators(const TwoQutritDensity& rho, const BellConfiguration& cfg) {
    CorrelatorSet c;
    const std::array<const char*, 2> as = {elem::kA1, elem::kA2};
    const std::array<const char*, 2> bs = {elem::kB1, elem::kB2};
    for (const char* a : as)
        for (const char* b : bs)
            c.set(a, b,
                  correlator_exact(rho, cfg.alice_settings[cfg.element_map.at(a)],
                                   cfg.bob_settings[cfg.element_map.at(b)]));
    return c;
}

CorrelatorSet hchsh3_correlators(const TwoQutritDensity& rho, const BellConfiguration& cfg) {
    CorrelatorSet c;
    for (const char* a : kASide)
        for (const char* b : kBSide)
            c.set(a, b,
                  correlator_exact(rho, cfg.alice_settings[cfg.element_map.at(a)],
                                   cfg.bob_settings[cfg.element_map.at(b)]));
    return c;
}

InequalityReport evaluate_chsh3(const TwoQutritDensity& rho, const BellConfiguration& cfg) {
    return violation_report(Inequality::CHSH3, chsh3_S(chsh3_correlators(rho, cfg)),
                            kChsh3Bound);
}

InequalityReport evaluate_hchsh3(const TwoQutritDensity& rho, const BellConfiguration& cfg) {
    const Cx t1 = hchsh3_T1(hchsh3_correlators(rho, cfg));
    return violation_report(Inequality::HCHSH3, -2.0 * t1.real(), kHchsh3Bound);
}

}  // namespace qkd3
