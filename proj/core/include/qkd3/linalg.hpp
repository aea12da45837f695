// Dense complex linear algebra at the two fixed dimensions the simulator
// needs: 3 (one qutrit) and 9 (two qutrits). Everything is a plain loop over
// a std::array, small enough that tests can brute-force every identity.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace qkd3 {

using Cx = std::complex<double>;

/// Absolute tolerance for algebraic identity checks.
inline constexpr double kDefaultTol = 1e-12;

namespace detail {
inline constexpr int mod3(int k) { return ((k % 3) + 3) % 3; }
inline constexpr int mod12(int k) { return ((k % 12) + 12) % 12; }
}  // namespace detail

/// e^{2*pi*i*k/12}. All twelve values are exact combinations of
/// {0, 1/2, sqrt(3)/2, 1}, so repeated products stay clean.
constexpr Cx zeta_pow(int k) noexcept {
    constexpr double h = 0.5;
    constexpr double s = 0.86602540378443864676;  // sqrt(3)/2
    switch (detail::mod12(k)) {
        case 0:  return {1.0, 0.0};
        case 1:  return {s, h};
        case 2:  return {h, s};
        case 3:  return {0.0, 1.0};
        case 4:  return {-h, s};
        case 5:  return {-s, h};
        case 6:  return {-1.0, 0.0};
        case 7:  return {-s, -h};
        case 8:  return {-h, -s};
        case 9:  return {0.0, -1.0};
        case 10: return {h, -s};
        default: return {s, -h};
    }
}

/// e^{2*pi*i*k/3}, the three outcome values of a trichotomic measurement.
constexpr Cx omega_pow(int k) noexcept { return zeta_pow(4 * detail::mod3(k)); }

inline bool approx_equal(Cx a, Cx b, double tol = kDefaultTol) {
    return std::abs(a - b) <= tol;
}

template <int N>
struct Matrix {
    static_assert(N == 3 || N == 9, "only qutrit (3) and two-qutrit (9) matrices");
    static constexpr int dim = N;

    std::array<Cx, static_cast<std::size_t>(N) * N> e{};

    Cx& operator()(int r, int c) { return e[static_cast<std::size_t>(r) * N + c]; }
    const Cx& operator()(int r, int c) const { return e[static_cast<std::size_t>(r) * N + c]; }

    static Matrix zero() { return Matrix{}; }
    static Matrix identity() {
        Matrix m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.e[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] -= o.e[i];
        return *this;
    }
    Matrix& operator*=(Cx s) {
        for (auto& x : e) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Cx s, Matrix m) { return m *= s; }
    friend Matrix operator*(Matrix m, Cx s) { return m *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix p;
        for (int r = 0; r < N; ++r)
            for (int k = 0; k < N; ++k) {
                const Cx ark = a(r, k);
                if (ark == Cx{}) continue;
                for (int c = 0; c < N; ++c) p(r, c) += ark * b(k, c);
            }
        return p;
    }
};

template <int N>
struct Ket {
    static_assert(N == 3 || N == 9, "only qutrit (3) and two-qutrit (9) kets");
    static constexpr int dim = N;

    std::array<Cx, N> a{};

    Cx& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    const Cx& operator[](int i) const { return a[static_cast<std::size_t>(i)]; }

    static Ket basis(int k) {
        Ket v;
        v[k] = 1.0;
        return v;
    }
};

template <int N>
Matrix<N> dagger(const Matrix<N>& m) {
    Matrix<N> d;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) d(r, c) = std::conj(m(c, r));
    return d;
}

template <int N>
Cx trace(const Matrix<N>& m) {
    Cx t{};
    for (int i = 0; i < N; ++i) t += m(i, i);
    return t;
}

/// Kronecker product with the left factor as the slow index:
/// (A (x) B)(3r+s, 3c+d) = A(r,c) * B(s,d).
inline Matrix<9> tensor(const Matrix<3>& a, const Matrix<3>& b) {
    Matrix<9> t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (int s = 0; s < 3; ++s)
                for (int d = 0; d < 3; ++d)
                    t(3 * r + s, 3 * c + d) = a(r, c) * b(s, d);
    return t;
}

inline Ket<9> tensor(const Ket<3>& x, const Ket<3>& y) {
    Ket<9> t;
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) t[3 * r + s] = x[r] * y[s];
    return t;
}

template <int N>
Ket<N> operator*(const Matrix<N>& m, const Ket<N>& v) {
    Ket<N> out;
    for (int r = 0; r < N; ++r) {
        Cx s{};
        for (int c = 0; c < N; ++c) s += m(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

/// <x|y>
template <int N>
Cx inner(const Ket<N>& x, const Ket<N>& y) {
    Cx s{};
    for (int i = 0; i < N; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

template <int N>
double norm(const Ket<N>& x) {
    return std::sqrt(inner(x, x).real());
}

/// |x><y|
template <int N>
Matrix<N> outer(const Ket<N>& x, const Ket<N>& y) {
    Matrix<N> m;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) m(r, c) = x[r] * std::conj(y[c]);
    return m;
}

template <int N>
bool approx_equal(const Matrix<N>& a, const Matrix<N>& b, double tol = kDefaultTol) {
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (std::abs(a.e[i] - b.e[i]) > tol) return false;
    return true;
}

template <int N>
bool approx_equal(const Ket<N>& a, const Ket<N>& b, double tol = kDefaultTol) {
    for (int i = 0; i < N; ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

template <int N>
bool is_hermitian(const Matrix<N>& m, double tol = kDefaultTol) {
    return approx_equal(m, dagger(m), tol);
}

template <int N>
bool is_unitary(const Matrix<N>& m, double tol = kDefaultTol) {
    return approx_equal(dagger(m) * m, Matrix<N>::identity(), tol);
}

/// Cholesky-based PSD test: accepts eigenvalues down to -tol. The shifted
/// factorization succeeds iff lambda_min >= -shift for the scaled shift used.
template <int N>
bool is_positive_semidefinite(const Matrix<N>& m, double tol = kDefaultTol) {
    Matrix<N> a = m;
    const double shift = tol * (1.0 + std::abs(trace(m).real()));
    for (int i = 0; i < N; ++i) a(i, i) += shift;
    for (int j = 0; j < N; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(a(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (int i = j + 1; i < N; ++i) {
            Cx s = a(i, j);
            for (int k = 0; k < j; ++k) s -= a(i, k) * std::conj(a(j, k));
            a(i, j) = s / ljj;
        }
    }
    return true;
}

template <int N>
bool is_density(const Matrix<N>& m, double tol = 1e-9) {
    return is_hermitian(m, tol) && std::abs(trace(m) - Cx{1.0}) <= tol &&
           is_positive_semidefinite(m, tol);
}

/// Tr(rho * obs). With validate set, rejects rho that is not a density matrix.
inline Cx expectation(const Matrix<9>& rho, const Matrix<9>& obs, bool validate = false) {
    if (validate && !is_density(rho))
        throw std::invalid_argument("expectation: rho is not a valid density matrix");
    Cx t{};
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) t += rho(r, c) * obs(c, r);
    return t;
}

}  // namespace qkd3
