#include "thzturb/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "thzturb/constants.hpp"
#include "thzturb/errors.hpp"
#include "thzturb/rng.hpp"
#include "thzturb/special.hpp"

namespace thzturb::coherence {

PlanarArray::PlanarArray(int nx_, int ny_, double spacing) : nx(nx_), ny(ny_), spacing_m(spacing) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("PlanarArray: element counts must be >= 1");
    if (!(spacing_m > 0.0)) throw std::invalid_argument("PlanarArray: spacing must be > 0");
}

std::array<double, 2> PlanarArray::position(int ix, int iy) const {
    return {(ix - 0.5 * (nx - 1)) * spacing_m, (iy - 0.5 * (ny - 1)) * spacing_m};
}

void NCQuery::validate() const {
    if (d_t < 0.0 || d_r < 0.0) throw std::invalid_argument("NCQuery: separations must be >= 0");
    if (cn2 < 0.0) throw std::invalid_argument("NCQuery: cn2 must be >= 0");
    if (!(k > 0.0 && L > 0.0)) throw std::invalid_argument("NCQuery: k and L must be > 0");
}

namespace {

// Ratio-branch and tie-branch constants of the closed form.
constexpr double kRatioConst = 0.546;
constexpr double kTieConst = 1.457;

double pow_5_3(double d) {
    const double c = std::cbrt(d);
    return d * c * c;
}

double pow_8_3(double d) {
    const double c = std::cbrt(d);
    return d * d * c * c;
}

// Separations compared after quantization to 1e-12 m.
std::int64_t quantize(double d) { return std::llround(d * 1e12); }

// Decay exponent for one separation pair; coeff_* are the constants times cn2 k^2 L.
double nc_exponent_pair(double d_t, double d_r, double coeff_ratio, double coeff_tie) {
    const std::int64_t qt = quantize(d_t), qr = quantize(d_r);
    if (qt == qr) {
        if (qt == 0) return 0.0;
        return coeff_tie * pow_5_3(d_t);
    }
    return coeff_ratio * (pow_8_3(d_t) - pow_8_3(d_r)) / (d_t - d_r);
}

}  // namespace

double nc_exponent_ratio_form(const NCQuery& q) {
    q.validate();
    if (q.d_t == q.d_r) {
        if (q.d_t == 0.0) return 0.0;
        throw std::invalid_argument("nc_exponent_ratio_form: 0/0 at equal separations");
    }
    const double coeff = kRatioConst * q.cn2 * q.k * q.k * q.L;
    return coeff * (pow_8_3(q.d_t) - pow_8_3(q.d_r)) / (q.d_t - q.d_r);
}

double nc_exponent_sum_form(const NCQuery& q) {
    q.validate();
    if (q.d_t == 0.0 && q.d_r == 0.0) return 0.0;
    const double at = std::cbrt(q.d_t);
    const double ar = std::cbrt(q.d_r);
    double s7 = 0.0, s2 = 0.0;
    double tp = 1.0;  // at^p
    for (int p = 0; p <= 7; ++p) {
        double rp = 1.0;  // ar^(7-p)
        for (int j = 0; j < 7 - p; ++j) rp *= ar;
        s7 += tp * rp;
        if (p <= 2) {
            double r2 = 1.0;
            for (int j = 0; j < 2 - p; ++j) r2 *= ar;
            s2 += tp * r2;
        }
        tp *= at;
    }
    const double coeff = kRatioConst * q.cn2 * q.k * q.k * q.L;
    return coeff * s7 / s2;
}

double nc_closed_form(const NCQuery& q) {
    q.validate();
    const double x = q.cn2 * q.k * q.k * q.L;
    return std::exp(-nc_exponent_pair(q.d_t, q.d_r, kRatioConst * x, kTieConst * x));
}

namespace {

// 1 - J0(z), series below z = 0.1 to avoid cancellation.
double one_minus_j0(double z) {
    if (z < 0.1) {
        const double y = 0.25 * z * z;  // (z/2)^2
        // sum_{k>=1} (-1)^{k+1} y^k / (k!)^2
        return y * (1.0 - y / 4.0 * (1.0 - y / 9.0 * (1.0 - y / 16.0)));
    }
    return 1.0 - special::bessel_j0(z);
}

// Int_0^inf kappa^(-8/3) (1 - J0(b kappa)) dkappa for b > 0: series head below
// b*kappa = 1e-3, oscillation panels to b*kappa = 1e3, power-law tail beyond.
double inner_kappa_integral(double b, const quad::Config& cfg) {
    if (b <= 0.0) return 0.0;
    const double z_lo = 1e-3, z_hi = 1e3;
    const double kappa_lo = z_lo / b;
    const double kappa_hi = z_hi / b;
    // head: integrand ~ kappa^(-8/3) [(b k)^2/4 - (b k)^4/64]
    const double head = 0.75 * b * b * std::cbrt(kappa_lo) -
                        (3.0 / 448.0) * std::pow(b, 4) * std::pow(kappa_lo, 7.0 / 3.0);
    std::vector<double> edges;
    for (double z : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) edges.push_back(z / b);
    for (double z = 8.0 + pi; z < z_hi; z += pi) edges.push_back(z / b);
    edges.push_back(kappa_hi);
    const auto integrand = [b](double kappa) {
        return std::pow(kappa, -8.0 / 3.0) * one_minus_j0(b * kappa);
    };
    const quad::Result mid = quad::integrate_panels(integrand, edges, cfg);
    const double tail = 0.6 * std::pow(kappa_hi, -5.0 / 3.0);
    return head + mid.value + tail;
}

}  // namespace

double nc_numeric_exponent(const NCQuery& q, const std::function<double(double)>& cn2_of_xi,
                           const quad::Config& cfg) {
    q.validate();
    if (quantize(q.d_t) == 0 && quantize(q.d_r) == 0) return 0.0;
    quad::Config inner = cfg;
    inner.rel_tol = std::max(cfg.rel_tol * 0.1, 1e-12);
    const auto xi_integrand = [&](double xi) {
        const double b = xi * q.d_r + (1.0 - xi) * q.d_t;
        const double cn2 = cn2_of_xi ? cn2_of_xi(xi) : q.cn2;
        return cn2 * inner_kappa_integral(b, inner);
    };
    const quad::Result res = quad::integrate(xi_integrand, 0.0, 1.0, cfg);
    return 4.0 * pi * pi * q.k * q.k * q.L * kolmogorov_constant * res.value;
}

double nc_numeric(const NCQuery& q, const std::function<double(double)>& cn2_of_xi,
                  const quad::Config& cfg) {
    return std::exp(-nc_numeric_exponent(q, cn2_of_xi, cfg));
}

double nc_numeric_vector(const std::array<double, 2>& d_t_vec,
                         const std::array<double, 2>& d_r_vec, double cn2, double k, double L,
                         const quad::Config& cfg) {
    if (cn2 < 0.0 || !(k > 0.0 && L > 0.0))
        throw std::invalid_argument("nc_numeric_vector: bad medium parameters");
    quad::Config inner = cfg;
    inner.rel_tol = std::max(cfg.rel_tol * 0.1, 1e-12);
    const auto xi_integrand = [&](double xi) {
        const double bx = xi * d_r_vec[0] + (1.0 - xi) * d_t_vec[0];
        const double by = xi * d_r_vec[1] + (1.0 - xi) * d_t_vec[1];
        return inner_kappa_integral(std::hypot(bx, by), inner);
    };
    const quad::Result res = quad::integrate(xi_integrand, 0.0, 1.0, cfg);
    return std::exp(-4.0 * pi * pi * k * k * L * kolmogorov_constant * cn2 * res.value);
}

std::uint64_t DisplacementHistogram::total_multiplicity() const {
    std::uint64_t t = 0;
    for (const auto& e : entries) t += e.multiplicity;
    return t;
}

DisplacementHistogram displacement_histogram(const PlanarArray& array) {
    // Group displacement vectors by squared integer length; equal lengths share
    // one rho evaluation.
    std::map<std::int64_t, std::uint64_t> by_q;
    for (int dx = -(array.nx - 1); dx <= array.nx - 1; ++dx) {
        for (int dy = -(array.ny - 1); dy <= array.ny - 1; ++dy) {
            const std::int64_t q = static_cast<std::int64_t>(dx) * dx +
                                   static_cast<std::int64_t>(dy) * dy;
            by_q[q] += static_cast<std::uint64_t>(array.nx - std::abs(dx)) *
                       static_cast<std::uint64_t>(array.ny - std::abs(dy));
        }
    }
    DisplacementHistogram h;
    h.entries.reserve(by_q.size());
    for (const auto& [q, m] : by_q)
        h.entries.push_back({array.spacing_m * std::sqrt(static_cast<double>(q)), m});
    return h;
}

std::vector<std::complex<double>> steering_vector(const PlanarArray& array, double theta,
                                                  double phi, double k) {
    const double ux = std::sin(theta) * std::cos(phi);
    const double uy = std::sin(theta) * std::sin(phi);
    std::vector<std::complex<double>> a;
    a.reserve(array.size());
    for (int ix = 0; ix < array.nx; ++ix) {
        for (int iy = 0; iy < array.ny; ++iy) {
            const auto pos = array.position(ix, iy);
            const double phase = k * (pos[0] * ux + pos[1] * uy);
            a.emplace_back(std::cos(phase), std::sin(phase));
        }
    }
    return a;
}

double coherence_sum(const PlanarArray& tx, const PlanarArray& rx, double cn2, double k, double L) {
    if (cn2 < 0.0 || !(k > 0.0 && L > 0.0))
        throw std::invalid_argument("coherence_sum: bad medium parameters");
    const DisplacementHistogram ht = displacement_histogram(tx);
    const DisplacementHistogram hr = displacement_histogram(rx);
    const double x = cn2 * k * k * L;
    const double coeff_ratio = kRatioConst * x;
    const double coeff_tie = kTieConst * x;
    // compensated summation; partial sums combine associatively within 1e-12
    double sum = 0.0, comp = 0.0;
    for (const auto& et : ht.entries) {
        for (const auto& er : hr.entries) {
            const double rho =
                std::exp(-nc_exponent_pair(et.distance_m, er.distance_m, coeff_ratio, coeff_tie));
            const double term =
                static_cast<double>(et.multiplicity) * static_cast<double>(er.multiplicity) * rho;
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

double losc_loss_db(const PlanarArray& tx, const PlanarArray& rx, double cn2, double k, double L) {
    const double nt = tx.size(), nr = rx.size();
    const double sum = coherence_sum(tx, rx, cn2, k, L);
    return 10.0 * std::log10(nt * nt * nr * nr / sum);
}

double array_gain_turbulent(const PlanarArray& tx, const PlanarArray& rx, double cn2, double k,
                            double L) {
    const double nt = tx.size(), nr = rx.size();
    return coherence_sum(tx, rx, cn2, k, L) / (nt * nr);
}

void CapacityInputs::validate() const {
    if (!(bandwidth_hz > 0.0) || tx_power_w < 0.0 || !(noise_psd_w_hz > 0.0) ||
        !(alpha_los > 0.0) || !(alpha_turb > 0.0))
        throw std::invalid_argument("CapacityInputs: scalars must be positive (power may be 0)");
}

double ergodic_capacity_bound(const CapacityInputs& in, double cn2, double k, double L) {
    in.validate();
    const double nt = in.tx.size(), nr = in.rx.size();
    const double sum = coherence_sum(in.tx, in.rx, cn2, k, L);
    const double snr = in.tx_power_w * in.alpha_los * in.alpha_los * in.alpha_turb * in.alpha_turb /
                       (in.noise_psd_w_hz * in.bandwidth_hz * nt * nr) * sum;
    return in.bandwidth_hz * std::log2(1.0 + snr);
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major n x n).
// On return, eig holds eigenvalues and vecs columns the eigenvectors.
void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eig,
                  std::vector<double>& vecs) {
    vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;
    const auto at = [&](std::vector<double>& m, int r, int c) -> double& {
        return m[static_cast<std::size_t>(r) * n + c];
    };
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
        if (off < 1e-24 * n * n) break;
        if (sweep == 199)
            throw numerical_error("jacobi_eigen: no convergence after 200 sweeps");
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = 0.5 * (at(a, q, q) - at(a, p, p)) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = at(a, i, p), aiq = at(a, i, q);
                    at(a, i, p) = c * aip - s * aiq;
                    at(a, i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = at(a, p, i), aqi = at(a, q, i);
                    at(a, p, i) = c * api - s * aqi;
                    at(a, q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = at(vecs, i, p), viq = at(vecs, i, q);
                    at(vecs, i, p) = c * vip - s * viq;
                    at(vecs, i, q) = s * vip + c * viq;
                }
            }
        }
    }
    eig.resize(n);
    for (int i = 0; i < n; ++i) eig[i] = a[static_cast<std::size_t>(i) * n + i];
}

// Inverse CDF of the Gamma-Gamma amplitude by bisection on the quadrature CDF.
double gamma_gamma_quantile(double u, const fading::GammaGammaParams& p) {
    const quad::Config cfg{1e-10, 0.0, 4000};
    const auto cdf = [&](double x) {
        if (x <= 0.0) return 0.0;
        return quad::integrate([&](double t) { return fading::gamma_gamma_pdf(t, p); }, 0.0, x, cfg)
            .value;
    };
    double hi = 1.0;
    for (int i = 0; i < 80 && cdf(hi) < u; ++i) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 90; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ChannelSample channel_matrix_sample(const PlanarArray& tx, const PlanarArray& rx,
                                    const Angles& angles, double alpha_los,
                                    const std::optional<fading::GammaGammaParams>& fading_params,
                                    bool correlated, std::uint64_t seed, double cn2, double k,
                                    double distance_m) {
    if (!(alpha_los > 0.0)) throw std::invalid_argument("channel_matrix_sample: alpha_los must be > 0");
    const int nt = tx.size(), nr = rx.size();
    const double k_steer = (k > 0.0) ? k : 2.0 * pi;  // steering phase needs a wavenumber
    const auto at_vec = steering_vector(tx, angles.theta_t, angles.phi_t, k_steer);
    const auto ar_vec = steering_vector(rx, angles.theta_r, angles.phi_r, k_steer);

    ChannelSample out;
    out.nr = nr;
    out.nt = nt;
    out.h.resize(static_cast<std::size_t>(nr) * nt);

    std::vector<double> psi(static_cast<std::size_t>(nr) * nt, 1.0);
    if (fading_params) {
        rng::Stream stream(seed);
        if (!correlated) {
            for (auto& v : psi) {
                const double large = stream.gamma(fading_params->alpha_c, 1.0 / fading_params->alpha_c);
                const double small = stream.gamma(fading_params->beta_c, 1.0 / fading_params->beta_c);
                v = large * small;
            }
        } else {
            if (cn2 < 0.0 || !(k > 0.0 && distance_m > 0.0))
                throw std::invalid_argument(
                    "channel_matrix_sample: correlated sampling needs cn2, k and distance");
            const int n = nr * nt;
            // pairwise NC matrix over (rx element, tx element) pairs
            std::vector<std::array<double, 2>> tpos, rpos;
            for (int ix = 0; ix < tx.nx; ++ix)
                for (int iy = 0; iy < tx.ny; ++iy) tpos.push_back(tx.position(ix, iy));
            for (int ix = 0; ix < rx.nx; ++ix)
                for (int iy = 0; iy < rx.ny; ++iy) rpos.push_back(rx.position(ix, iy));
            const double x = cn2 * k * k * distance_m;
            std::vector<double> corr(static_cast<std::size_t>(n) * n);
            for (int m = 0; m < n; ++m) {
                const int j = m / nt, i = m % nt;
                for (int m2 = 0; m2 < n; ++m2) {
                    const int j2 = m2 / nt, i2 = m2 % nt;
                    const double dt = std::hypot(tpos[i][0] - tpos[i2][0], tpos[i][1] - tpos[i2][1]);
                    const double dr = std::hypot(rpos[j][0] - rpos[j2][0], rpos[j][1] - rpos[j2][1]);
                    corr[static_cast<std::size_t>(m) * n + m2] =
                        std::exp(-nc_exponent_pair(dt, dr, kRatioConst * x, kTieConst * x));
                }
            }
            // nearest-PSD: clip eigenvalues at the numerical-noise floor,
            // rebuild the factor, renormalize rows to unit diagonal
            std::vector<double> eig, vecs;
            jacobi_eigen(corr, n, eig, vecs);
            double lam_max = 0.0;
            for (const double l : eig) lam_max = std::max(lam_max, l);
            const double lam_floor = 1e-12 * lam_max;
            std::vector<double> factor(static_cast<std::size_t>(n) * n, 0.0);
            for (int c = 0; c < n; ++c) {
                const double lam = (eig[c] > lam_floor) ? eig[c] : 0.0;
                const double s = std::sqrt(lam);
                for (int r = 0; r < n; ++r)
                    factor[static_cast<std::size_t>(r) * n + c] =
                        vecs[static_cast<std::size_t>(r) * n + c] * s;
            }
            for (int r = 0; r < n; ++r) {
                double norm2 = 0.0;
                for (int c = 0; c < n; ++c) {
                    const double v = factor[static_cast<std::size_t>(r) * n + c];
                    norm2 += v * v;
                }
                if (!(norm2 > 0.0) || !std::isfinite(norm2))
                    throw numerical_error(
                        "channel_matrix_sample: copula correlation not PSD after regularization");
                const double inv = 1.0 / std::sqrt(norm2);
                for (int c = 0; c < n; ++c) factor[static_cast<std::size_t>(r) * n + c] *= inv;
            }
            std::vector<double> g(n);
            for (auto& v : g) v = stream.normal();
            for (int r = 0; r < n; ++r) {
                double z = 0.0;
                for (int c = 0; c < n; ++c) z += factor[static_cast<std::size_t>(r) * n + c] * g[c];
                psi[r] = gamma_gamma_quantile(special::normal_cdf(z), *fading_params);
            }
        }
    }

    for (int j = 0; j < nr; ++j)
        for (int i = 0; i < nt; ++i)
            out.at(j, i) = alpha_los * ar_vec[j] * std::conj(at_vec[i]) *
                           psi[static_cast<std::size_t>(j) * nt + i];
    return out;
}

}  // namespace thzturb::coherence
