#include "thzturb/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thzturb/constants.hpp"
#include "thzturb/csv.hpp"
#include "thzturb/errors.hpp"

namespace thzturb::propagation {

AbsorptionTable::AbsorptionTable(std::vector<double> freq_hz, std::vector<double> k_abs_per_m,
                                 double water_scale_height_m)
    : freq_(std::move(freq_hz)), k_(std::move(k_abs_per_m)), scale_height_m_(water_scale_height_m) {
    if (freq_.size() != k_.size() || freq_.empty())
        throw std::invalid_argument("AbsorptionTable: need matching non-empty columns");
    for (std::size_t i = 0; i < freq_.size(); ++i) {
        if (i > 0 && !(freq_[i] > freq_[i - 1]))
            throw std::invalid_argument("AbsorptionTable: frequencies must be strictly increasing");
        if (k_[i] < 0.0)
            throw std::invalid_argument("AbsorptionTable: coefficients must be >= 0");
    }
    if (!(scale_height_m_ > 0.0))
        throw std::invalid_argument("AbsorptionTable: scale height must be > 0");
}

AbsorptionTable AbsorptionTable::from_csv(const std::string& path, double water_scale_height_m) {
    const auto t = csv::read(path);
    csv::require_header(t, {"freq_hz", "k_abs_per_m"}, "absorption table " + path);
    std::vector<double> f, k;
    for (const auto& row : t.rows) {
        f.push_back(row[0]);
        k.push_back(row[1]);
    }
    return AbsorptionTable(std::move(f), std::move(k), water_scale_height_m);
}

double AbsorptionTable::terrestrial_coefficient(double frequency_hz) const {
    if (frequency_hz < freq_.front() || frequency_hz > freq_.back())
        throw std::out_of_range("absorption table: frequency " + std::to_string(frequency_hz) +
                                " Hz outside table range [" + std::to_string(freq_.front()) +
                                ", " + std::to_string(freq_.back()) + "] Hz");
    const auto it = std::lower_bound(freq_.begin(), freq_.end(), frequency_hz);
    const std::size_t hi = static_cast<std::size_t>(it - freq_.begin());
    if (hi == 0 || freq_[hi] == frequency_hz) return k_[hi == 0 ? 0 : hi];
    const std::size_t lo = hi - 1;
    // log-log interpolation; zero coefficients interpolate linearly in f.
    if (k_[lo] <= 0.0 || k_[hi] <= 0.0) {
        const double t = (frequency_hz - freq_[lo]) / (freq_[hi] - freq_[lo]);
        return k_[lo] + t * (k_[hi] - k_[lo]);
    }
    const double t = (std::log(frequency_hz) - std::log(freq_[lo])) /
                     (std::log(freq_[hi]) - std::log(freq_[lo]));
    return std::exp(std::log(k_[lo]) + t * (std::log(k_[hi]) - std::log(k_[lo])));
}

double absorption_coefficient(double frequency_hz, double altitude_m, const AbsorptionTable& table) {
    if (altitude_m < 0.0) throw std::domain_error("absorption_coefficient: altitude must be >= 0");
    return table.terrestrial_coefficient(frequency_hz) *
           std::exp(-altitude_m / table.scale_height_m());
}

ParticleSizeDistribution::ParticleSizeDistribution(std::vector<Band> bands)
    : bands_(std::move(bands)) {
    if (bands_.empty()) throw std::invalid_argument("ParticleSizeDistribution: no bands");
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        if (i > 0 && !(bands_[i].altitude_m > bands_[i - 1].altitude_m))
            throw std::invalid_argument("ParticleSizeDistribution: altitudes must increase");
        if (bands_[i].n0_per_m4 < 0.0)
            throw std::invalid_argument("ParticleSizeDistribution: N0 must be >= 0");
        if (!(bands_[i].rho0_per_m > 0.0))
            throw std::invalid_argument("ParticleSizeDistribution: rho0 must be > 0");
    }
}

ParticleSizeDistribution ParticleSizeDistribution::from_csv(const std::string& path) {
    const auto t = csv::read(path);
    csv::require_header(t, {"alt_m", "n0_per_m4", "rho0_per_m"}, "particle table " + path);
    std::vector<Band> bands;
    for (const auto& row : t.rows) bands.push_back({row[0], row[1], row[2]});
    return ParticleSizeDistribution(std::move(bands));
}

const ParticleSizeDistribution::Band& ParticleSizeDistribution::at_altitude(double altitude_m) const {
    const Band* best = &bands_.front();
    for (const auto& b : bands_) {
        if (b.altitude_m <= altitude_m) best = &b;
        else break;
    }
    return *best;
}

MieMedium::MieMedium(std::vector<Row> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("MieMedium: empty index table");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (i > 0 && !(rows_[i].freq_hz > rows_[i - 1].freq_hz))
            throw std::invalid_argument("MieMedium: frequencies must be strictly increasing");
        if (rows_[i].index.real() < 1.0 || rows_[i].index.imag() < 0.0)
            throw std::invalid_argument("MieMedium: index must have Re >= 1 and Im >= 0");
    }
}

MieMedium MieMedium::constant(std::complex<double> index) {
    return MieMedium({Row{1.0, index}});
}

MieMedium MieMedium::from_csv(const std::string& path) {
    const auto t = csv::read(path);
    csv::require_header(t, {"freq_hz", "n_re", "n_im"}, "medium table " + path);
    std::vector<Row> rows;
    for (const auto& row : t.rows) rows.push_back({row[0], {row[1], row[2]}});
    return MieMedium(std::move(rows));
}

std::complex<double> MieMedium::index_at(double frequency_hz) const {
    if (rows_.size() == 1 || frequency_hz <= rows_.front().freq_hz) return rows_.front().index;
    if (frequency_hz >= rows_.back().freq_hz) return rows_.back().index;
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        if (frequency_hz <= rows_[i].freq_hz) {
            const double t =
                (frequency_hz - rows_[i - 1].freq_hz) / (rows_[i].freq_hz - rows_[i - 1].freq_hz);
            return rows_[i - 1].index + t * (rows_[i].index - rows_[i - 1].index);
        }
    }
    return rows_.back().index;
}

std::size_t mie_truncation_order(double x) {
    if (!(x > 0.0)) throw std::domain_error("mie_truncation_order: x must be > 0");
    return static_cast<std::size_t>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0));
}

MieCoefficients mie_coefficients(double x, std::complex<double> m, std::size_t m_max) {
    if (!(x > 0.0)) throw std::domain_error("mie_coefficients: x must be > 0");
    using cplx = std::complex<double>;
    const cplx mx = m * x;
    // logarithmic derivative D_n(mx), downward. The start margin sets the
    // converged accuracy: +15 leaves ~1e-7 residue at x ~ 50, +40 is converged
    // to machine precision.
    const std::size_t nmx = std::max<std::size_t>(m_max, static_cast<std::size_t>(std::abs(mx))) + 40;
    std::vector<cplx> d(nmx + 1, cplx(0.0, 0.0));
    for (std::size_t n = nmx; n >= 1; --n) {
        const cplx rn = cplx(static_cast<double>(n), 0.0) / mx;
        d[n - 1] = rn - 1.0 / (d[n] + rn);
    }
    // psi_n(x) downward (Miller, normalized by sin x); the upward recurrence
    // loses ~1e-7 relative accuracy just above n = x, which is too coarse for
    // the partial waves near the truncation order
    std::vector<double> psi(m_max + 1);
    {
        const std::size_t start = m_max + 16 + static_cast<std::size_t>(x);
        std::vector<double> j(start + 2);
        j[start + 1] = 0.0;
        j[start] = 1e-280;
        for (std::size_t n = start; n >= 1; --n) {
            j[n - 1] = (2.0 * n + 1.0) / x * j[n] - j[n + 1];
            if (std::fabs(j[n - 1]) > 1e250)
                for (std::size_t k = n - 1; k <= start + 1; ++k) j[k] *= 1e-250;
        }
        const double scale = (std::sin(x) / x) / j[0];
        for (std::size_t n = 0; n <= m_max; ++n) psi[n] = x * j[n] * scale;
    }
    // chi_n(x) upward (the growing solution; stable)
    std::vector<double> chi(m_max + 1);
    {
        double chi_m1 = -std::sin(x);
        chi[0] = std::cos(x);
        for (std::size_t n = 1; n <= m_max; ++n) {
            chi[n] = (2.0 * n - 1.0) / x * chi[n - 1] - chi_m1;
            chi_m1 = chi[n - 1];
        }
    }
    MieCoefficients out;
    out.a.reserve(m_max);
    out.b.reserve(m_max);
    for (std::size_t n = 1; n <= m_max; ++n) {
        const cplx xi_n(psi[n], -chi[n]);
        const cplx xi_nm1(psi[n - 1], -chi[n - 1]);
        const double n_over_x = static_cast<double>(n) / x;
        const cplx ta = d[n] / m + n_over_x;
        const cplx tb = d[n] * m + n_over_x;
        const cplx a = (ta * psi[n] - psi[n - 1]) / (ta * xi_n - xi_nm1);
        const cplx b = (tb * psi[n] - psi[n - 1]) / (tb * xi_n - xi_nm1);
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
            !std::isfinite(b.imag()))
            throw numerical_error("mie_coefficients: non-finite coefficient at order " +
                                  std::to_string(n));
        out.a.push_back(a);
        out.b.push_back(b);
    }
    return out;
}

double extinction_efficiency(double x, std::complex<double> m, std::size_t m_max) {
    const auto c = mie_coefficients(x, m, m_max);
    double sum = 0.0;
    for (std::size_t n = 1; n <= m_max; ++n)
        sum += (2.0 * n + 1.0) * (c.a[n - 1].real() + c.b[n - 1].real());
    return 2.0 / (x * x) * sum;
}

double extinction_efficiency(double x, std::complex<double> m) {
    return extinction_efficiency(x, m, mie_truncation_order(x));
}

double extinction_cross_section(double frequency_hz, double radius_m, const MieMedium& medium) {
    if (!(frequency_hz > 0.0 && radius_m > 0.0))
        throw std::domain_error("extinction_cross_section: f and r must be > 0");
    const double k = wavenumber(frequency_hz);
    const double x = k * radius_m;
    const std::complex<double> m = medium.index_at(frequency_hz);
    const std::size_t m_max = mie_truncation_order(x);
    const auto c = mie_coefficients(x, m, m_max);
    double sum = 0.0;
    for (std::size_t n = 1; n <= m_max; ++n)
        sum += (2.0 * n + 1.0) * (c.a[n - 1].real() + c.b[n - 1].real());
    return 2.0 * pi / (k * k) * sum;
}

double scattering_coefficient_with(const std::function<double(double)>& sigma_ext_of_r,
                                   double altitude_m, const ParticleSizeDistribution& dist,
                                   const quad::Config& cfg) {
    const auto& band = dist.at_altitude(altitude_m);
    if (band.n0_per_m4 == 0.0) return 0.0;
    const double rho0 = band.rho0_per_m;
    const auto integrand = [&](double r) {
        return sigma_ext_of_r(r) * band.n0_per_m4 * std::exp(-rho0 * r);
    };
    // upper limit where exp(-rho0 r) = 1e-12 of its peak
    std::vector<double> edges;
    for (double u : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 27.631021115928547})
        edges.push_back(u / rho0);
    const quad::Result res = quad::integrate_panels(integrand, edges, cfg);
    return neper_to_db * res.value;
}

double scattering_coefficient(double frequency_hz, double altitude_m,
                              const ParticleSizeDistribution& dist, const MieMedium& medium,
                              const quad::Config& cfg) {
    return scattering_coefficient_with(
        [&](double r) { return extinction_cross_section(frequency_hz, r, medium); }, altitude_m,
        dist, cfg);
}

double scattering_extinction_per_m(double frequency_hz, double altitude_m,
                                   const ParticleSizeDistribution& dist, const MieMedium& medium,
                                   const quad::Config& cfg) {
    return scattering_coefficient(frequency_hz, altitude_m, dist, medium, cfg) / neper_to_db;
}

double los_path_gain(const LinkGeometry& geom, double k_abs_per_m, double k_sca_per_m) {
    geom.validate();
    if (k_abs_per_m < 0.0 || k_sca_per_m < 0.0)
        throw std::domain_error("los_path_gain: extinction coefficients must be >= 0");
    const double spreading = speed_of_light / (4.0 * pi * geom.frequency_hz * geom.distance_m);
    return spreading * std::exp(-0.5 * (k_abs_per_m + k_sca_per_m) * geom.distance_m);
}

double fspl_db(double frequency_hz, double distance_m) {
    const double lambda = wavelength(frequency_hz);
    return 20.0 * std::log10(4.0 * pi * distance_m / lambda);
}

}  // namespace thzturb::propagation
