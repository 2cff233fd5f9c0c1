#ifndef THZTURB_TESTS_MIE_REFERENCE_HPP
#define THZTURB_TESTS_MIE_REFERENCE_HPP

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

// Reference Mie evaluator on a separate code path from the library: the
// partial-wave coefficients are formed directly from Riccati-Bessel function
// values (psi by Miller downward recurrence with j0 normalization, chi by the
// stable upward Neumann recurrence) instead of the logarithmic-derivative
// scheme. Checked against the Rayleigh limit and the index-matched null.
namespace detail {

// psi_n(z) = z j_n(z) for n = 0..n_max by downward Miller recurrence.
template <class T>
std::vector<T> riccati_psi(T z, int n_max) {
    const int start = n_max + 16 + static_cast<int>(std::abs(z));
    std::vector<T> j(start + 2);
    j[start + 1] = T(0);
    j[start] = T(1e-280);
    for (int n = start; n >= 1; --n) {
        j[n - 1] = (T(2 * n + 1) / z) * j[n] - j[n + 1];
        if (std::abs(j[n - 1]) > 1e250) {
            for (int m = n - 1; m <= start + 1; ++m) j[m] *= T(1e-250);
        }
    }
    const T j0_true = std::sin(z) / z;
    const T scale = j0_true / j[0];
    std::vector<T> psi(n_max + 1);
    for (int n = 0; n <= n_max; ++n) psi[n] = z * j[n] * scale;
    return psi;
}

// chi_n(x) = -x y_n(x) for n = 0..n_max, upward (stable for y).
inline std::vector<double> riccati_chi(double x, int n_max) {
    std::vector<double> chi(n_max + 1);
    double ym1 = std::sin(x) / x;                      // y_{-1} = j_0 relation: y_{-1}(x) = sin(x)/x
    double y0 = -std::cos(x) / x;
    chi[0] = -x * y0;
    double yn = y0;
    for (int n = 1; n <= n_max; ++n) {
        const double ynext = (2.0 * n - 1.0) / x * yn - ym1;
        ym1 = yn;
        yn = ynext;
        chi[n] = -x * yn;
    }
    return chi;
}

}  // namespace detail

struct MieRef {
    std::vector<std::complex<double>> a, b;
};

inline MieRef mie_reference(double x, std::complex<double> m, int n_max) {
    using cplx = std::complex<double>;
    const cplx mx = m * x;
    const auto psi_x = detail::riccati_psi<double>(x, n_max);
    const auto psi_mx = detail::riccati_psi<cplx>(mx, n_max);
    const auto chi_x = detail::riccati_chi(x, n_max);
    MieRef out;
    out.a.resize(n_max);
    out.b.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        // derivatives via psi'_n = psi_{n-1} - n psi_n / z
        const double dpsi_x = psi_x[n - 1] - n * psi_x[n] / x;
        const cplx dpsi_mx = psi_mx[n - 1] - cplx(n) * psi_mx[n] / mx;
        const double dchi_x = chi_x[n - 1] - n * chi_x[n] / x;
        const cplx xi(psi_x[n], -chi_x[n]);
        const cplx dxi(dpsi_x, -dchi_x);
        out.a[n - 1] = (m * psi_mx[n] * dpsi_x - psi_x[n] * dpsi_mx) /
                       (m * psi_mx[n] * dxi - xi * dpsi_mx);
        out.b[n - 1] = (psi_mx[n] * dpsi_x - m * psi_x[n] * dpsi_mx) /
                       (psi_mx[n] * dxi - m * xi * dpsi_mx);
    }
    return out;
}

inline double mie_reference_qext(double x, std::complex<double> m, int n_max) {
    const MieRef r = mie_reference(x, m, n_max);
    double sum = 0.0;
    for (int n = 1; n <= n_max; ++n)
        sum += (2.0 * n + 1.0) * (r.a[n - 1].real() + r.b[n - 1].real());
    return 2.0 / (x * x) * sum;
}

}  // namespace oracles

#endif
