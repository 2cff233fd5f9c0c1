#ifndef THZTURB_PROPAGATION_HPP
#define THZTURB_PROPAGATION_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "thzturb/link.hpp"
#include "thzturb/quadrature.hpp"

namespace thzturb::propagation {

// Terrestrial water-vapor absorption coefficient vs frequency, log-log
// interpolated, scaled in altitude by exp(-h / scale_height).
class AbsorptionTable {
public:
    AbsorptionTable(std::vector<double> freq_hz, std::vector<double> k_abs_per_m,
                    double water_scale_height_m = 2000.0);

    // CSV schema: freq_hz,k_abs_per_m (rows sorted ascending).
    static AbsorptionTable from_csv(const std::string& path, double water_scale_height_m = 2000.0);

    // k_water,terr(f); throws std::out_of_range naming the valid interval.
    double terrestrial_coefficient(double frequency_hz) const;

    double scale_height_m() const { return scale_height_m_; }
    double min_frequency_hz() const { return freq_.front(); }
    double max_frequency_hz() const { return freq_.back(); }

private:
    std::vector<double> freq_;
    std::vector<double> k_;
    double scale_height_m_;
};

double absorption_coefficient(double frequency_hz, double altitude_m, const AbsorptionTable& table);

// Exponential particle size distribution N(h, r) = N0(h) exp(-rho0(h) r),
// with N0 and rho0 piecewise constant in altitude.
class ParticleSizeDistribution {
public:
    struct Band {
        double altitude_m;   // band starts here
        double n0_per_m4;
        double rho0_per_m;
    };

    explicit ParticleSizeDistribution(std::vector<Band> bands);

    // CSV schema: alt_m,n0_per_m4,rho0_per_m
    static ParticleSizeDistribution from_csv(const std::string& path);

    const Band& at_altitude(double altitude_m) const;

private:
    std::vector<Band> bands_;
};

// Complex refractive index of the scatterer material, linearly interpolated in
// frequency and clamped at the table ends.
class MieMedium {
public:
    struct Row {
        double freq_hz;
        std::complex<double> index;
    };

    explicit MieMedium(std::vector<Row> rows);
    static MieMedium constant(std::complex<double> index);

    // CSV schema: freq_hz,n_re,n_im
    static MieMedium from_csv(const std::string& path);

    std::complex<double> index_at(double frequency_hz) const;

private:
    std::vector<Row> rows_;
};

// ceil(x + 4 x^(1/3) + 2), the partial-wave truncation order.
std::size_t mie_truncation_order(double x);

struct MieCoefficients {
    std::vector<std::complex<double>> a;
    std::vector<std::complex<double>> b;
};

// Partial-wave coefficients a_m, b_m for size parameter x and relative index m,
// by downward recurrence of the logarithmic derivative and upward recurrence of
// the Riccati-Bessel functions. Throws numerical_error naming the order if the
// recurrence produces a non-finite value.
MieCoefficients mie_coefficients(double x, std::complex<double> m, std::size_t m_max);

// Q_ext = (2/x^2) sum (2m+1) Re(a_m + b_m); dimensionless efficiency.
double extinction_efficiency(double x, std::complex<double> m);
double extinction_efficiency(double x, std::complex<double> m, std::size_t m_max);

// sigma_ext(f, r) in m^2.
double extinction_cross_section(double frequency_hz, double radius_m, const MieMedium& medium);

// 4.343 * Int sigma_ext(f,r) N0(h) exp(-rho0(h) r) dr. The exponential weight is
// truncated where it falls below 1e-12 of its peak.
double scattering_coefficient(double frequency_hz, double altitude_m,
                              const ParticleSizeDistribution& dist, const MieMedium& medium,
                              const quad::Config& cfg = {});

// Test seam: same integral with an arbitrary sigma_ext(r).
double scattering_coefficient_with(const std::function<double(double)>& sigma_ext_of_r,
                                   double altitude_m, const ParticleSizeDistribution& dist,
                                   const quad::Config& cfg = {});

// Raw extinction exponent per meter (the un-scaled integral), for link budgets.
double scattering_extinction_per_m(double frequency_hz, double altitude_m,
                                   const ParticleSizeDistribution& dist, const MieMedium& medium,
                                   const quad::Config& cfg = {});

// Amplitude gain c/(4 pi f L) * exp(-(k_abs + k_sca) L / 2). Power loss in dB
// is -20 log10 of this value.
double los_path_gain(const LinkGeometry& geom, double k_abs_per_m, double k_sca_per_m);

// Free-space power loss 20 log10(4 pi L / lambda) in dB.
double fspl_db(double frequency_hz, double distance_m);

}  // namespace thzturb::propagation

#endif
