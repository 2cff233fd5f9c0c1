#ifndef THZTURB_SPECIAL_HPP
#define THZTURB_SPECIAL_HPP

namespace thzturb::special {

// Bessel function of the first kind, order zero. Classic rational/asymptotic
// fit, absolute accuracy ~1e-8 over the real line.
double bessel_j0(double x);

// Modified Bessel function of the second kind of real order nu, x > 0.
// Temme series for x < 2, Steed continued fraction for x >= 2, upward
// recurrence in the order. Relative accuracy target 1e-10.
// Throws std::domain_error for x <= 0.
double bessel_k_nu(double nu, double x);

// exp(x) * K_nu(x); avoids underflow for large x.
double bessel_k_nu_scaled(double nu, double x);

// log(K_nu(x)), usable far past the underflow point of K itself.
double log_bessel_k_nu(double nu, double x);

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace thzturb::special

#endif
