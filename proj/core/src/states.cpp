#include "qkd3/states.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qkd3 {

TwoQutritPure::TwoQutritPure(Ket<9> ket) : ket_(std::move(ket)) {
    if (std::abs(norm(ket_) - 1.0) > 1e-9)
        throw std::invalid_argument("TwoQutritPure: state vector must have unit norm");
}

TwoQutritDensity::TwoQutritDensity(Matrix<9> rho) : rho_(std::move(rho)) {
    if (!is_density(rho_))
        throw std::invalid_argument(
            "TwoQutritDensity: matrix is not Hermitian, trace-one and positive");
}

TwoQutritPure ghz() {
    Ket<9> k;
    const double a = 1.0 / std::sqrt(3.0);
    k[basis_index(0, 0)] = a;
    k[basis_index(1, 1)] = a;
    k[basis_index(2, 2)] = a;
    return TwoQutritPure(k);
}

TwoQutritPure nme(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("nme: gamma must be positive");
    Ket<9> k;
    const double n = 1.0 / std::sqrt(2.0 + gamma * gamma);
    k[basis_index(0, 0)] = n;
    k[basis_index(1, 1)] = gamma * n;
    k[basis_index(2, 2)] = n;
    return TwoQutritPure(k);
}

TwoQutritDensity mix_noise(const TwoQutritPure& pure, double noise_fraction) {
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0))
        throw std::invalid_argument("mix_noise: noise fraction must lie in [0, 1]");
    Matrix<9> rho = pure.projector() * Cx{1.0 - noise_fraction};
    const double iso = noise_fraction / 9.0;
    for (int i = 0; i < 9; ++i) rho(i, i) += iso;
    return TwoQutritDensity(rho);
}

}  // namespace qkd3
