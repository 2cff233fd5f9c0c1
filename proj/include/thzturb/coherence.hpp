#ifndef THZTURB_COHERENCE_HPP
#define THZTURB_COHERENCE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "thzturb/fading.hpp"
#include "thzturb/quadrature.hpp"

namespace thzturb::coherence {

// Uniform planar array on the transverse plane, centered at its own origin.
struct PlanarArray {
    int nx;
    int ny;
    double spacing_m;

    PlanarArray(int nx_, int ny_, double spacing);
    int size() const { return nx * ny; }

    // Transverse position of element (ix, iy), ix in [0, nx), iy in [0, ny).
    std::array<double, 2> position(int ix, int iy) const;
};

// Scalar separations of one Tx pair and one Rx pair plus medium parameters.
struct NCQuery {
    double d_t;   // |r_i - r_i'|, m
    double d_r;   // |r_j - r_j'|, m
    double cn2;   // m^(-2/3)
    double k;     // rad/m
    double L;     // m

    void validate() const;
};

// Positive decay exponent E, rho = exp(-E). Two algebraically equivalent forms.
double nc_exponent_ratio_form(const NCQuery& q);
double nc_exponent_sum_form(const NCQuery& q);

// Normalized covariance in (0, 1]. Equal separations (after quantization to
// 1e-12 m) use the dedicated 1.457 branch; (0, 0) returns exactly 1.
double nc_closed_form(const NCQuery& q);

// Decay exponent by direct quadrature of the kappa-xi double integral.
// cn2_of_xi, when provided, replaces the constant q.cn2 with a path-varying
// profile; xi = 0 is the receiver end (z = L), xi = 1 the transmitter (z = 0).
double nc_numeric_exponent(const NCQuery& q,
                           const std::function<double(double)>& cn2_of_xi = {},
                           const quad::Config& cfg = {});
double nc_numeric(const NCQuery& q, const std::function<double(double)>& cn2_of_xi = {},
                  const quad::Config& cfg = {});

// Exploration variant with true 2-D separation vectors in the Bessel argument
// (not used by the closed form or the acceptance path).
double nc_numeric_vector(const std::array<double, 2>& d_t_vec,
                         const std::array<double, 2>& d_r_vec, double cn2, double k, double L,
                         const quad::Config& cfg = {});

// Pairwise displacement lengths of one array with multiplicities; compresses
// the quadruple sum. Total multiplicity is (nx*ny)^2.
struct DisplacementHistogram {
    struct Entry {
        double distance_m;
        std::uint64_t multiplicity;
    };
    std::vector<Entry> entries;  // sorted by distance

    std::uint64_t total_multiplicity() const;
};

DisplacementHistogram displacement_histogram(const PlanarArray& array);

// Unit-magnitude phase profile for direction (theta from broadside, phi azimuth).
// Element order is ix-major: index = ix * ny + iy.
std::vector<std::complex<double>> steering_vector(const PlanarArray& array, double theta,
                                                  double phi, double k);

// Sum of rho over all (i,i',j,j') quadruples, via histogram compression.
double coherence_sum(const PlanarArray& tx, const PlanarArray& rx, double cn2, double k, double L);

// 10 log10(Nt^2 Nr^2 / sum rho) >= 0; 0 when cn2 = 0.
double losc_loss_db(const PlanarArray& tx, const PlanarArray& rx, double cn2, double k, double L);

// (1/(Nt Nr)) sum rho, <= Nt Nr with equality at cn2 = 0.
double array_gain_turbulent(const PlanarArray& tx, const PlanarArray& rx, double cn2, double k,
                            double L);

struct CapacityInputs {
    double bandwidth_hz;
    double tx_power_w;
    double noise_psd_w_hz;
    double alpha_los;   // amplitude
    double alpha_turb;  // amplitude
    PlanarArray tx;
    PlanarArray rx;

    void validate() const;
};

double ergodic_capacity_bound(const CapacityInputs& in, double cn2, double k, double L);

struct Angles {
    double theta_t = 0.0;
    double phi_t = 0.0;
    double theta_r = 0.0;
    double phi_r = 0.0;
};

// Row-major Nr x Nt complex channel matrix sample.
struct ChannelSample {
    int nr = 0;
    int nt = 0;
    std::vector<std::complex<double>> h;

    std::complex<double>& at(int j, int i) { return h[static_cast<std::size_t>(j) * nt + i]; }
    const std::complex<double>& at(int j, int i) const {
        return h[static_cast<std::size_t>(j) * nt + i];
    }
};

// H = alpha_los * a_r a_t^H element-wise modulated by Gamma-Gamma amplitudes.
// With correlated=true the amplitudes are coupled through a Gaussian copula
// whose correlation matrix is the pairwise NC (nearest-PSD regularized);
// O((Nt*Nr)^3) setup, intended for small arrays. Deterministic per seed.
ChannelSample channel_matrix_sample(const PlanarArray& tx, const PlanarArray& rx,
                                    const Angles& angles, double alpha_los,
                                    const std::optional<fading::GammaGammaParams>& fading_params,
                                    bool correlated, std::uint64_t seed, double cn2 = 0.0,
                                    double k = 0.0, double distance_m = 0.0);

}  // namespace thzturb::coherence

#endif
