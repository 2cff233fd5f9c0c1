#ifndef THZTURB_CONSTANTS_HPP
#define THZTURB_CONSTANTS_HPP

namespace thzturb {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = 3.141592653589793238462643383279502884;

// Kolmogorov inertial-range spectral constant, Phi_n = kolmogorov_constant * Cn2 * kappa^(-11/3)
inline constexpr double kolmogorov_constant = 0.033;

// Np -> dB conversion, 10*log10(e)
inline constexpr double neper_to_db = 4.342944819032518;

inline constexpr double wavelength(double frequency_hz) { return speed_of_light / frequency_hz; }
inline constexpr double wavenumber(double frequency_hz) { return 2.0 * pi * frequency_hz / speed_of_light; }

}  // namespace thzturb

#endif
