#include "qkd3/tritter.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qkd3 {

PhaseTriple::PhaseTriple(Cx t0, Cx t1, Cx t2) : theta_{t0, t1, t2} {
    for (const Cx& t : theta_) {
        if (std::abs(std::abs(t) - 1.0) > 1e-9)
            throw std::invalid_argument("PhaseTriple: phases must have unit modulus");
    }
}

Matrix<3> fourier_unitary() {
    Matrix<3> f;
    const double inv_rt3 = 1.0 / std::sqrt(3.0);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) f(k, l) = omega_pow(k * l) * inv_rt3;
    return f;
}

Matrix<3> clock_observable() {
    Matrix<3> z;
    for (int k = 0; k < 3; ++k) z(k, k) = omega_pow(k);
    return z;
}

Matrix<3> tritter_unitary(const PhaseTriple& phases) {
    Matrix<3> u = fourier_unitary();
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) u(k, l) *= phases[l];
    return u;
}

Matrix<3> observable(const MeasurementSetting& setting) {
    // Conjugating Z by the tritter unitary collapses to phase ratios on the
    // three cyclic entries; building them directly keeps the matrix exact.
    const PhaseTriple& t = setting.phases;
    Matrix<3> z;
    z(1, 0) = t[0] * std::conj(t[1]);
    z(2, 1) = t[1] * std::conj(t[2]);
    z(0, 2) = t[2] * std::conj(t[0]);
    return setting.detector == DetectorKind::ConjugateZ ? dagger(z) : z;
}

MeasurementSetting product_setting(const PhaseTriple& first, const PhaseTriple& second,
                                   std::string label) {
    PhaseTriple gamma{std::conj(first[2]) * std::conj(second[1]),
                      std::conj(first[0]) * std::conj(second[2]),
                      std::conj(first[1]) * std::conj(second[0])};
    return {gamma, DetectorKind::ConjugateZ, std::move(label)};
}

MeasurementContext measurement_context(const MeasurementSetting& setting) {
    const Matrix<3> udag = dagger(tritter_unitary(setting.phases));
    MeasurementContext ctx;
    for (int k = 0; k < 3; ++k) {
        Ket<3> v;
        for (int l = 0; l < 3; ++l) v[l] = udag(l, k);
        ctx.projectors[static_cast<std::size_t>(k)] = outer(v, v);
        ctx.outcomes[static_cast<std::size_t>(k)] =
            setting.detector == DetectorKind::ConjugateZ ? omega_pow(-k) : omega_pow(k);
    }
    return ctx;
}

}  // namespace qkd3
