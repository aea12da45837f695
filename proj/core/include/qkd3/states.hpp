// Two-qutrit resource states and the depolarizing noise channel. Basis order
// is |00>, |01>, ..., |22> with the Alice index slow: |ab> sits at 3a+b.

#pragma once

#include "qkd3/linalg.hpp"

namespace qkd3 {

/// Flat index of |alice bob> in the 9-dimensional joint basis.
constexpr int basis_index(int alice, int bob) { return 3 * alice + bob; }

/// Pure two-qutrit state; unit norm enforced on construction.
class TwoQutritPure {
  public:
    explicit TwoQutritPure(Ket<9> ket);

    const Ket<9>& ket() const { return ket_; }
    Matrix<9> projector() const { return outer(ket_, ket_); }

  private:
    Ket<9> ket_;
};

/// Two-qutrit density matrix; Hermiticity, unit trace and positivity
/// enforced on construction.
class TwoQutritDensity {
  public:
    explicit TwoQutritDensity(Matrix<9> rho);

    const Matrix<9>& rho() const { return rho_; }

  private:
    Matrix<9> rho_;
};

/// (|00> + |11> + |22>) / sqrt(3).
TwoQutritPure ghz();

/// (|00> + gamma|11> + |22>) / sqrt(2 + gamma^2); gamma must be positive.
/// ghz() is the gamma = 1 special case.
TwoQutritPure nme(double gamma);

/// Largest CHSH-3 violation among this family is reached at this gamma.
inline const double kNmeGamma = (std::sqrt(11.0) - std::sqrt(3.0)) / 2.0;

/// Depolarized mixture F * I/9 + (1-F) |psi><psi| for F in [0, 1].
TwoQutritDensity mix_noise(const TwoQutritPure& pure, double noise_fraction);

}  // namespace qkd3
