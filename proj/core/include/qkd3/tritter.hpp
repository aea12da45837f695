// Tritter (three-port beam splitter) measurements. A tritter is the unitary
// F * diag(theta0, theta1, theta2) with F the unitary Fourier matrix on three
// modes; followed by three detectors it measures a trichotomic observable
// whose outcomes are the cube roots of unity. Products of two such
// observables are again tritter observables, up to swapping the detector
// labeling from Z to Z^dagger (a permutation of the detectors).

#pragma once

#include <array>
#include <string>

#include "qkd3/linalg.hpp"

namespace qkd3 {

/// Three unit-modulus phases (theta0, theta1, theta2).
class PhaseTriple {
  public:
    PhaseTriple(Cx t0, Cx t1, Cx t2);

    /// (1, t, t^2), the single-parameter family used by the protocols.
    static PhaseTriple powers(Cx t) { return {Cx{1.0}, t, t * t}; }

    const Cx& operator[](int j) const { return theta_[static_cast<std::size_t>(j)]; }

    PhaseTriple conjugated() const {
        return {std::conj(theta_[0]), std::conj(theta_[1]), std::conj(theta_[2])};
    }

  private:
    std::array<Cx, 3> theta_;
};

/// StandardZ assigns outcome omega^k to detector k, ConjugateZ assigns
/// omega^{-k}. ConjugateZ is physically a permutation of detectors 1 and 2.
enum class DetectorKind { StandardZ, ConjugateZ };

/// A phase triple plus a detector labeling; fully determines one
/// three-outcome measurement with outcomes in {1, omega, omega^2}.
struct MeasurementSetting {
    PhaseTriple phases;
    DetectorKind detector = DetectorKind::StandardZ;
    std::string label;
};

/// Spectral form of a setting's observable: rank-1 projectors onto the
/// measurement basis plus the outcome attached to each detector.
struct MeasurementContext {
    std::array<Matrix<3>, 3> projectors;
    std::array<Cx, 3> outcomes;
};

/// Unitary Fourier matrix (omega^{kl} / sqrt(3)).
Matrix<3> fourier_unitary();

/// diag(1, omega, omega^2) -- the detector observable behind a bare tritter.
Matrix<3> clock_observable();

/// fourier_unitary() * diag(theta0, theta1, theta2); always unitary.
Matrix<3> tritter_unitary(const PhaseTriple& phases);

/// The observable measured by the tritter-plus-detectors combination:
/// U^dagger Z U for StandardZ, U^dagger Z^dagger U for ConjugateZ. Unitary,
/// traceless, cubes to the identity.
Matrix<3> observable(const MeasurementSetting& setting);

/// Single setting that measures the operator product
/// observable(first) * observable(second): phases
/// (f2* s1*, f0* s2*, f1* s0*) with ConjugateZ detectors.
MeasurementSetting product_setting(const PhaseTriple& first, const PhaseTriple& second,
                                   std::string label = {});

/// Constructive eigendecomposition: projector k projects onto
/// dagger(tritter_unitary)|k>, no general eigensolver involved.
MeasurementContext measurement_context(const MeasurementSetting& setting);

}  // namespace qkd3
