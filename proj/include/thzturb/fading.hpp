#ifndef THZTURB_FADING_HPP
#define THZTURB_FADING_HPP

#include <cstdint>
#include <variant>
#include <vector>

namespace thzturb::fading {

// Effective large/small-scale cell counts plus the scintillation inputs that
// produced them.
struct GammaGammaParams {
    double alpha_c;
    double beta_c;
    double sigma_r2 = 0.0;
    double d_ra2 = 0.0;

    GammaGammaParams(double alpha, double beta, double sigma_r2_ = 0.0, double d_ra2_ = 0.0);
};

// Aperture parameter D_ra^2 = k (lambda/pi)^2 / (4 L) = lambda / (2 pi L).
double aperture_param(double frequency_hz, double distance_m);

// Andrews' effective cell counts from the Rytov variance and aperture
// parameter. sigma_r2 must be > 0.
GammaGammaParams andrews_params(double sigma_r2, double d_ra2);

enum class BesselArgConvention {
    product_consistent,  // K_{a-b}(2 sqrt(a b psi)); normalizes, matches the Gamma-product construction
    sqrt2_variant        // K_{a-b}(sqrt(2 a b psi)); comparison only, does not normalize
};

double gamma_gamma_pdf(double psi, const GammaGammaParams& p,
                       BesselArgConvention conv = BesselArgConvention::product_consistent);

// n samples of Psi = Gamma(alpha, 1/alpha) * Gamma(beta, 1/beta); deterministic per seed.
std::vector<double> gamma_gamma_sample(const GammaGammaParams& p, std::size_t n,
                                       std::uint64_t seed);

struct LogNormal {
    double sigma_psi2;
};
struct KDistribution {
    double alpha_c;
};
struct Exponential {
    double mean_b;
};

using FadingDistribution = std::variant<GammaGammaParams, LogNormal, KDistribution, Exponential>;

double limiting_pdf(const FadingDistribution& dist, double psi);

// Var(Psi) = 1/alpha + 1/beta + 1/(alpha beta) for the unit-mean construction.
double scintillation_variance(const GammaGammaParams& p);

// 10 log10 |1 - sqrt(sigma_Psi^2)|, signed; negative for sigma_Psi^2 < 1.
// Throws singular_point_error at sigma_Psi^2 = 1 (names the offending sigma_R^2).
double turbulence_attenuation_signed_db(double sigma_r2, double d_ra2);

// Magnitude of the above, the non-negative dB penalty. sigma_r2 = 0 -> 0 dB.
double turbulence_attenuation_db(double sigma_r2, double d_ra2);

// Same quantity evaluated with the cell-count expressions substituted inline
// (the one-formula route); must agree with turbulence_attenuation_db.
double turbulence_attenuation_db_direct(double sigma_r2, double d_ra2);

}  // namespace thzturb::fading

#endif
