#ifndef THZTURB_ATMOSPHERE_HPP
#define THZTURB_ATMOSPHERE_HPP

#include <optional>

#include "thzturb/quadrature.hpp"

namespace thzturb::atmosphere {

// Hufnagle-Valley profile parameters. When override_constant_cn2 is set the
// profile is a constant-RISC medium and the HV terms are ignored.
struct TurbulenceProfile {
    double terrestrial_risc_a = 1.7e-14;  // A, m^(-2/3)
    double wind_speed = 21.0;             // v, m/s
    std::optional<double> override_constant_cn2;

    TurbulenceProfile() = default;
    TurbulenceProfile(double a, double v, std::optional<double> override_cn2 = std::nullopt);
};

struct KolmogorovSpectrum {
    double cn2;                     // m^(-2/3)
    double inner_scale_l0 = 1e-3;   // m, validity bound only
    double outer_scale_l0_cap = 100.0;  // L0 in m, validity bound only

    KolmogorovSpectrum(double cn2_, double l0 = 1e-3, double L0 = 100.0);

    // Whether kappa sits inside the power-law validity window (1/L0, 1/l0).
    // The closed forms use the pure power law regardless; this only flags it.
    bool in_inertial_range(double kappa) const {
        return kappa > 1.0 / outer_scale_l0_cap && kappa < 1.0 / inner_scale_l0;
    }
};

struct StructureFunctionSample {
    double separation_m;
    double value;
};

enum class Regime { weak, strong, saturated };

// sigma_R^2 < weak_below -> weak, > saturated_above -> saturated, else strong.
struct RegimeThresholds {
    double weak_below = 0.1;
    double saturated_above = 10.0;
};

const char* regime_name(Regime r);

// Eq-by-term HV profile at altitude h (meters). Returns the constant override
// when the profile carries one.
double risc_infrared(double altitude_m, const TurbulenceProfile& profile);

enum class ThzTransform {
    exact,       // derivative-ratio scaling from the refractivity models
    approximate  // unity scale (the "~ C_n,infrared^2" shortcut)
};

// Squared ratio (dn_THz/dT)^2 / (dn_infrared/dT)^2 of the refractivity
// temperature derivatives; near 1 for dry air.
double thz_transform_scale(double temperature_k, double pressure_air_mbar,
                           double pressure_vapor_mbar);

// HV profile rebased to the THz band. A constant-RISC override is returned
// untransformed: it is the effective value, not an infrared measurement.
double risc_thz(double altitude_m, const TurbulenceProfile& profile, double temperature_k,
                double pressure_air_mbar, double pressure_vapor_mbar,
                ThzTransform transform = ThzTransform::exact);

// Kolmogorov spectral density 0.033 * cn2 * kappa^(-11/3), kappa in rad/m.
double kolmogorov_phi(double kappa, double cn2);

// 0.5 * cn2 * k^(7/6) * L^(11/6) with k = 2 pi f / c. cn2 = 0 allowed (degenerate).
double rytov_variance(double cn2, double frequency_hz, double distance_m);

Regime classify_regime(double sigma_r2, const RegimeThresholds& thresholds = {});

// D_n(r) by adaptive quadrature of the pure power-law spectrum, oscillation
// panels up to kappa*r = 1e3 plus the analytic power-law tail.
double structure_function(double cn2, double separation_m, const quad::Config& cfg = {});

// |D_n(r) / (cn2 * r^(2/3)) - 1|; bounds the quadrature error of the 2/3-law identity.
double structure_function_check(double cn2, double separation_m, const quad::Config& cfg = {});

}  // namespace thzturb::atmosphere

#endif
