#include "thzturb/fading.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "thzturb/constants.hpp"
#include "thzturb/errors.hpp"
#include "thzturb/rng.hpp"
#include "thzturb/special.hpp"

namespace thzturb::fading {

GammaGammaParams::GammaGammaParams(double alpha, double beta, double sigma_r2_, double d_ra2_)
    : alpha_c(alpha), beta_c(beta), sigma_r2(sigma_r2_), d_ra2(d_ra2_) {
    if (!(alpha_c > 0.0) || !(beta_c > 0.0))
        throw std::invalid_argument("GammaGammaParams: cell counts must be > 0");
    if (d_ra2 < 0.0) throw std::invalid_argument("GammaGammaParams: D_ra^2 must be >= 0");
}

double aperture_param(double frequency_hz, double distance_m) {
    if (!(frequency_hz > 0.0 && distance_m > 0.0))
        throw std::domain_error("aperture_param: f and L must be > 0");
    return wavelength(frequency_hz) / (2.0 * pi * distance_m);
}

namespace {

// Large-scale and small-scale log-variance exponents of the Andrews model.
double exponent_large(double sigma_r2, double d_ra2) {
    const double s125 = std::pow(sigma_r2, 1.2);  // sigma_R^(12/5)
    return 0.49 * sigma_r2 / std::pow(1.0 + 0.18 * d_ra2 + 0.56 * s125, 7.0 / 6.0);
}

double exponent_small(double sigma_r2, double d_ra2) {
    const double s125 = std::pow(sigma_r2, 1.2);
    return 0.51 * sigma_r2 * std::pow(1.0 + 0.69 * d_ra2 * s125, -5.0 / 6.0) /
           std::pow(1.0 + 0.9 * d_ra2 + 0.62 * s125, 7.0 / 6.0);
}

}  // namespace

GammaGammaParams andrews_params(double sigma_r2, double d_ra2) {
    if (!(sigma_r2 > 0.0)) throw std::domain_error("andrews_params: sigma_R^2 must be > 0");
    if (d_ra2 < 0.0) throw std::domain_error("andrews_params: D_ra^2 must be >= 0");
    const double alpha = 1.0 / std::expm1(exponent_large(sigma_r2, d_ra2));
    const double beta = 1.0 / std::expm1(exponent_small(sigma_r2, d_ra2));
    return GammaGammaParams(alpha, beta, sigma_r2, d_ra2);
}

double gamma_gamma_pdf(double psi, const GammaGammaParams& p, BesselArgConvention conv) {
    if (!(psi > 0.0)) throw std::domain_error("gamma_gamma_pdf: psi must be > 0");
    const double a = p.alpha_c, b = p.beta_c;
    const double arg = (conv == BesselArgConvention::product_consistent)
                           ? 2.0 * std::sqrt(a * b * psi)
                           : std::sqrt(2.0 * a * b * psi);
    const double log_pdf = std::log(2.0) + 0.5 * (a + b) * std::log(a * b) - std::lgamma(a) -
                           std::lgamma(b) + (0.5 * (a + b) - 1.0) * std::log(psi) +
                           special::log_bessel_k_nu(a - b, arg);
    return std::exp(log_pdf);
}

std::vector<double> gamma_gamma_sample(const GammaGammaParams& p, std::size_t n,
                                       std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gamma_gamma_sample: n must be >= 1");
    rng::Stream stream(seed);
    std::vector<double> out(n);
    for (auto& v : out) {
        const double large = stream.gamma(p.alpha_c, 1.0 / p.alpha_c);
        const double small = stream.gamma(p.beta_c, 1.0 / p.beta_c);
        v = large * small;
    }
    return out;
}

double limiting_pdf(const FadingDistribution& dist, double psi) {
    if (!(psi > 0.0)) throw std::domain_error("limiting_pdf: psi must be > 0");
    return std::visit(
        [psi](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GammaGammaParams>) {
                return gamma_gamma_pdf(psi, d);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                if (!(d.sigma_psi2 > 0.0))
                    throw std::domain_error("limiting_pdf: log-normal variance must be > 0");
                const double lg = std::log(psi);
                return std::exp(-lg * lg / (2.0 * d.sigma_psi2)) /
                       (std::sqrt(2.0 * pi * d.sigma_psi2) * psi);
            } else if constexpr (std::is_same_v<T, KDistribution>) {
                if (!(d.alpha_c > 0.0))
                    throw std::domain_error("limiting_pdf: K-distribution alpha must be > 0");
                const double a = d.alpha_c;
                const double log_pdf = std::log(2.0 * a) - std::lgamma(a) +
                                       0.5 * (a - 1.0) * std::log(a * psi) +
                                       special::log_bessel_k_nu(a - 1.0, 2.0 * std::sqrt(a * psi));
                return std::exp(log_pdf);
            } else {
                static_assert(std::is_same_v<T, Exponential>);
                if (!(d.mean_b > 0.0))
                    throw std::domain_error("limiting_pdf: exponential mean must be > 0");
                return std::exp(-psi / d.mean_b) / d.mean_b;
            }
        },
        dist);
}

double scintillation_variance(const GammaGammaParams& p) {
    return 1.0 / p.alpha_c + 1.0 / p.beta_c + 1.0 / (p.alpha_c * p.beta_c);
}

namespace {

double attenuation_from_variance(double sigma_psi2, double sigma_r2) {
    const double gap = 1.0 - std::sqrt(sigma_psi2);
    if (std::fabs(gap) < 1e-15)
        throw singular_point_error(
            "turbulence attenuation singular: sigma_Psi^2 = 1 at sigma_R^2 = " +
            std::to_string(sigma_r2));
    return 10.0 * std::log10(std::fabs(gap));
}

}  // namespace

double turbulence_attenuation_signed_db(double sigma_r2, double d_ra2) {
    if (sigma_r2 < 0.0)
        throw std::domain_error("turbulence_attenuation: sigma_R^2 must be >= 0");
    if (sigma_r2 == 0.0) return 0.0;
    const GammaGammaParams p = andrews_params(sigma_r2, d_ra2);
    return attenuation_from_variance(scintillation_variance(p), sigma_r2);
}

double turbulence_attenuation_db(double sigma_r2, double d_ra2) {
    return std::fabs(turbulence_attenuation_signed_db(sigma_r2, d_ra2));
}

double turbulence_attenuation_db_direct(double sigma_r2, double d_ra2) {
    if (sigma_r2 < 0.0)
        throw std::domain_error("turbulence_attenuation: sigma_R^2 must be >= 0");
    if (sigma_r2 == 0.0) return 0.0;
    const double ea = std::expm1(exponent_large(sigma_r2, d_ra2));
    const double eb = std::expm1(exponent_small(sigma_r2, d_ra2));
    const double sigma_psi2 = ea + eb + ea * eb;
    return std::fabs(attenuation_from_variance(sigma_psi2, sigma_r2));
}

}  // namespace thzturb::fading
