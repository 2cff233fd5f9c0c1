#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <map>
#include <random>

#include "oracles/losc_brute.hpp"
#include "thzturb/coherence.hpp"
#include "thzturb/constants.hpp"
#include "thzturb/fading.hpp"

using namespace thzturb;
using coherence::NCQuery;
using coherence::PlanarArray;

namespace {
const double kFreq = 3e11;
const double kWavenumber = wavenumber(kFreq);
const double kHalfLambda = 0.5 * wavelength(kFreq);
}  // namespace

TEST_CASE("planar array geometry") {
    const PlanarArray a(4, 3, 1e-3);
    double sx = 0.0, sy = 0.0;
    for (int ix = 0; ix < a.nx; ++ix)
        for (int iy = 0; iy < a.ny; ++iy) {
            const auto p = a.position(ix, iy);
            sx += p[0];
            sy += p[1];
        }
    CHECK(sx == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sy == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(PlanarArray(0, 1, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(PlanarArray(1, 1, 0.0), std::invalid_argument);
}

TEST_CASE("steering vector") {
    SUBCASE("boresight is all ones") {
        const PlanarArray a(3, 3, kHalfLambda);
        for (const auto& v : coherence::steering_vector(a, 0.0, 0.0, kWavenumber)) {
            CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-15));
        }
    }
    SUBCASE("single element is the scalar 1") {
        const PlanarArray a(1, 1, kHalfLambda);
        const auto v = coherence::steering_vector(a, 1.1, 0.3, kWavenumber);
        REQUIRE(v.size() == 1);
        CHECK(v[0].real() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("half-wavelength end-fire pair differs by pi") {
        const PlanarArray a(2, 1, kHalfLambda);
        const auto v = coherence::steering_vector(a, pi / 2.0, 0.0, kWavenumber);
        REQUIRE(v.size() == 2);
        const auto ratio = v[1] / v[0];
        CHECK(ratio.real() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(ratio.imag()) < 1e-12);
    }
    SUBCASE("unit magnitude everywhere") {
        const PlanarArray a(5, 2, 2e-3);
        for (const auto& v : coherence::steering_vector(a, 0.7, 2.1, kWavenumber))
            CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("closed-form NC basics") {
    SUBCASE("identical sub-channels are perfectly correlated") {
        CHECK(coherence::nc_closed_form({0.0, 0.0, 1e-9, kWavenumber, 1e3}) == 1.0);
    }
    SUBCASE("equal separations use the dedicated branch") {
        const double d = 3.0 * kHalfLambda;
        const double rho = coherence::nc_closed_form({d, d, 1e-9, kWavenumber, 1e3});
        const double expo = 1.457 * 1e-9 * kWavenumber * kWavenumber * 1e3 * std::pow(d, 5.0 / 3.0);
        CHECK(rho == doctest::Approx(std::exp(-expo)).epsilon(1e-14));
    }
    SUBCASE("tie constant is the rounded ratio-form limit") {
        CHECK(std::fabs(0.546 * 8.0 / 3.0 - 1.457) / 1.457 < 1e-3);
    }
    SUBCASE("sum form collapses correctly at d_t = 0") {
        const double d = 2.0 * kHalfLambda;
        const NCQuery q{0.0, d, 1e-9, kWavenumber, 1e3};
        const double expo = 0.546 * 1e-9 * kWavenumber * kWavenumber * 1e3 * std::pow(d, 5.0 / 3.0);
        CHECK(coherence::nc_exponent_sum_form(q) == doctest::Approx(expo).epsilon(1e-12));
        CHECK(coherence::nc_exponent_ratio_form(q) == doctest::Approx(expo).epsilon(1e-12));
    }
    SUBCASE("rho lives in (0, 1]") {
        for (double dt : {0.0, 1e-4, 5e-3}) {
            for (double dr : {0.0, 2e-4, 8e-3}) {
                const double rho = coherence::nc_closed_form({dt, dr, 1e-8, kWavenumber, 1e4});
                CHECK(rho > 0.0);
                CHECK(rho <= 1.0);
            }
        }
    }
}

TEST_CASE("ratio and sum forms agree on random pairs") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> dist(0.0, 20.0 * 2.0 * kHalfLambda);
    int checked = 0;
    while (checked < 1000) {
        const double dt = dist(gen), dr = dist(gen);
        if (std::llround(dt * 1e12) == std::llround(dr * 1e12)) continue;
        const NCQuery q{dt, dr, 1e-9, kWavenumber, 1e4};
        const double e1 = coherence::nc_exponent_ratio_form(q);
        const double e2 = coherence::nc_exponent_sum_form(q);
        CHECK(std::fabs(e1 - e2) <= 1e-12 * std::max(std::fabs(e1), std::fabs(e2)));
        ++checked;
    }
}

TEST_CASE("equal-separation branch matches the sum-form limit within its rounding") {
    const double d = 4.0 * kHalfLambda;
    const NCQuery tie{d, d, 1e-9, kWavenumber, 1e3};
    const double tie_branch = -std::log(coherence::nc_closed_form(tie));
    const double sum_form = coherence::nc_exponent_sum_form(tie);
    CHECK(std::fabs(sum_form - tie_branch) / tie_branch < 1e-3);
}

TEST_CASE("NC is non-increasing in every argument") {
    const auto rho = [](double dt, double dr, double cn2, double k, double L) {
        return coherence::nc_closed_form({dt, dr, cn2, k, L});
    };
    double prev = 2.0;
    for (double dt = 0.0; dt < 6e-3; dt += 5e-4) {
        const double r = rho(dt, 1e-3, 1e-9, kWavenumber, 1e4);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
    prev = 2.0;
    for (double dr = 0.0; dr < 6e-3; dr += 5e-4) {
        const double r = rho(7e-4, dr, 1e-9, kWavenumber, 1e4);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
    prev = 2.0;
    for (double cn2 = 1e-11; cn2 < 1e-7; cn2 *= 3.0) {
        const double r = rho(1e-3, 2e-3, cn2, kWavenumber, 1e4);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
    prev = 2.0;
    for (double L = 1e3; L < 1e6; L *= 2.5) {
        const double r = rho(1e-3, 2e-3, 1e-9, kWavenumber, L);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
    prev = 2.0;
    for (double f = 1e11; f <= 1e12; f *= 1.5) {
        const double r = rho(1e-3, 2e-3, 1e-9, wavenumber(f), 1e4);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
}

TEST_CASE("numeric NC against the closed form") {
    const quad::Config cfg{1e-7, 0.0, 4000};
    SUBCASE("zero separations give 1") {
        CHECK(coherence::nc_numeric({0.0, 0.0, 1e-9, kWavenumber, 1e3}, {}, cfg) == 1.0);
    }
    SUBCASE("one-sided separation") {
        const NCQuery q{0.0, kHalfLambda, 1e-9, kWavenumber, 1e3};
        const double e_num = coherence::nc_numeric_exponent(q, {}, cfg);
        const double e_cf = coherence::nc_exponent_sum_form(q);
        CHECK(std::fabs(e_num - e_cf) / e_cf < 1e-3);
    }
    SUBCASE("path-averaged linear profile at equal separations") {
        const double d = 2.0 * kHalfLambda;
        const NCQuery q{d, d, 1e-9, kWavenumber, 1e3};
        // cn2(xi) = c0 + c1 xi, average c0 + c1/2 = 1e-9
        const auto profile = [](double xi) { return 0.5e-9 + 1.0e-9 * xi; };
        const double e_num = coherence::nc_numeric_exponent(q, profile, cfg);
        const double e_avg = coherence::nc_numeric_exponent(q, {}, cfg);
        CHECK(e_num == doctest::Approx(e_avg).epsilon(1e-6));
    }
    SUBCASE("piecewise-constant profile against the segment-wise closed form") {
        // each constant segment has exponent c * cn2_i * [b^(8/3)]_seg / (d_r - d_t),
        // with c = 4 pi^2 k^2 L * 0.033 * (-Gamma(-5/6)/Gamma(11/6)) 2^(-8/3) * 3/8
        const double dt = kHalfLambda, dr = 5.0 * kHalfLambda;
        const NCQuery q{dt, dr, 1.0, kWavenumber, 1e3};
        const double cn2_seg[3] = {0.4e-9, 1.6e-9, 0.7e-9};
        const auto profile = [&](double xi) { return cn2_seg[std::min(2, int(xi * 3.0))]; };
        const double e_num = coherence::nc_numeric_exponent(q, profile, cfg);
        const double gamma_const =
            -std::tgamma(-5.0 / 6.0) / std::tgamma(11.0 / 6.0) * std::pow(0.5, 8.0 / 3.0);
        const double c = 4.0 * pi * pi * kWavenumber * kWavenumber * 1e3 * 0.033 * gamma_const *
                         3.0 / 8.0 / (dr - dt);
        double e_ref = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double b0 = (i / 3.0) * dr + (1.0 - i / 3.0) * dt;
            const double b1 = ((i + 1) / 3.0) * dr + (1.0 - (i + 1) / 3.0) * dt;
            e_ref += cn2_seg[i] * c * (std::pow(b1, 8.0 / 3.0) - std::pow(b0, 8.0 / 3.0));
        }
        CHECK(e_num == doctest::Approx(e_ref).epsilon(1e-4));
    }
    SUBCASE("vector form reduces to the scalar form for collinear separations") {
        const double dt = kHalfLambda, dr = 3.0 * kHalfLambda;
        const double rho_vec =
            coherence::nc_numeric_vector({dt, 0.0}, {dr, 0.0}, 1e-9, kWavenumber, 1e3, cfg);
        const double rho_scal =
            coherence::nc_numeric({dt, dr, 1e-9, kWavenumber, 1e3}, {}, cfg);
        CHECK(std::log(rho_vec) == doctest::Approx(std::log(rho_scal)).epsilon(1e-6));
    }
    SUBCASE("vector form with perpendicular separations decorrelates more") {
        // perpendicular vectors keep |b(xi)| away from zero mid-path, so the
        // exponent exceeds the anti-parallel arrangement of the same lengths
        const double dt = 2.0 * kHalfLambda, dr = 2.0 * kHalfLambda;
        const double rho_perp =
            coherence::nc_numeric_vector({dt, 0.0}, {0.0, dr}, 1e-9, kWavenumber, 1e3, cfg);
        const double rho_anti =
            coherence::nc_numeric_vector({dt, 0.0}, {-dr, 0.0}, 1e-9, kWavenumber, 1e3, cfg);
        CHECK(rho_perp > 0.0);
        CHECK(rho_perp < 1.0);
        CHECK(rho_perp < rho_anti);
    }
}

TEST_CASE("displacement histogram") {
    SUBCASE("single element") {
        const auto h = coherence::displacement_histogram(PlanarArray(1, 1, 1e-3));
        REQUIRE(h.entries.size() == 1);
        CHECK(h.entries[0].distance_m == 0.0);
        CHECK(h.entries[0].multiplicity == 1);
    }
    SUBCASE("two-element line") {
        const auto h = coherence::displacement_histogram(PlanarArray(2, 1, 1e-3));
        REQUIRE(h.entries.size() == 2);
        CHECK(h.entries[0].distance_m == 0.0);
        CHECK(h.entries[0].multiplicity == 2);
        CHECK(h.entries[1].distance_m == doctest::Approx(1e-3).epsilon(1e-15));
        CHECK(h.entries[1].multiplicity == 2);
    }
    SUBCASE("total multiplicity is (nx ny)^2") {
        for (const auto [nx, ny] : {std::pair{2, 2}, {3, 5}, {4, 4}, {7, 1}}) {
            const auto h = coherence::displacement_histogram(PlanarArray(nx, ny, 1e-3));
            CHECK(h.total_multiplicity() ==
                  static_cast<std::uint64_t>(nx) * ny * nx * ny);
        }
    }
    SUBCASE("brute-force pairwise recount matches exactly") {
        const PlanarArray a(4, 4, 1e-3);
        std::map<std::int64_t, std::uint64_t> brute;
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 16; ++j) {
                const int dx = i / 4 - j / 4, dy = i % 4 - j % 4;
                brute[static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy]++;
            }
        }
        const auto h = coherence::displacement_histogram(a);
        REQUIRE(h.entries.size() == brute.size());
        std::size_t idx = 0;
        for (const auto& [q, m] : brute) {
            CHECK(h.entries[idx].distance_m ==
                  doctest::Approx(1e-3 * std::sqrt(static_cast<double>(q))).epsilon(1e-15));
            CHECK(h.entries[idx].multiplicity == m);
            ++idx;
        }
    }
}

TEST_CASE("LoSC loss") {
    SUBCASE("no turbulence, no loss") {
        const PlanarArray a(8, 8, kHalfLambda);
        CHECK(coherence::losc_loss_db(a, a, 0.0, kWavenumber, 1e4) == 0.0);
    }
    SUBCASE("single antennas, no loss") {
        const PlanarArray a(1, 1, kHalfLambda);
        CHECK(coherence::losc_loss_db(a, a, 1e-9, kWavenumber, 1e4) == 0.0);
    }
    SUBCASE("histogram compression equals brute force") {
        const PlanarArray tx(4, 4, kHalfLambda), rx(4, 4, kHalfLambda);
        const double compressed = coherence::losc_loss_db(tx, rx, 1e-9, kWavenumber, 1e3);
        const double brute = oracles::losc_brute_force_db(tx, rx, 1e-9, kWavenumber, 1e3);
        CHECK(std::fabs(compressed - brute) < 1e-10);
    }
    SUBCASE("monotone in distance, strength, spacing and size") {
        const PlanarArray a(8, 8, kHalfLambda);
        double prev = -1.0;
        for (double L : {1e3, 3e3, 1e4, 3e4, 1e5}) {
            const double v = coherence::losc_loss_db(a, a, 1e-9, kWavenumber, L);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        prev = -1.0;
        for (double cn2 : {1e-11, 1e-10, 1e-9, 1e-8}) {
            const double v = coherence::losc_loss_db(a, a, cn2, kWavenumber, 1e4);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        prev = -1.0;
        for (double s : {0.5, 1.0, 2.0, 4.0}) {
            const PlanarArray w(8, 8, s * kHalfLambda);
            const double v = coherence::losc_loss_db(w, w, 1e-9, kWavenumber, 1e4);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        prev = -1.0;
        for (int n : {2, 4, 8, 16}) {
            const PlanarArray w(n, n, kHalfLambda);
            const double v = coherence::losc_loss_db(w, w, 1e-9, kWavenumber, 1e4);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
    SUBCASE("loss and array gain are two views of one sum") {
        const PlanarArray tx(5, 3, kHalfLambda), rx(4, 4, kHalfLambda);
        const double nt = tx.size(), nr = rx.size();
        const double loss = coherence::losc_loss_db(tx, rx, 1e-9, kWavenumber, 1e4);
        const double gain = coherence::array_gain_turbulent(tx, rx, 1e-9, kWavenumber, 1e4);
        CHECK(loss + 10.0 * std::log10(gain) ==
              doctest::Approx(10.0 * std::log10(nt * nr)).epsilon(1e-9));
        CHECK(gain <= nt * nr);
    }
    SUBCASE("array gain without turbulence is Nt Nr") {
        const PlanarArray a(32, 32, kHalfLambda);
        CHECK(coherence::array_gain_turbulent(a, a, 0.0, kWavenumber, 1e3) ==
              doctest::Approx(1024.0 * 1024.0).epsilon(1e-15));
        const PlanarArray one(1, 1, kHalfLambda);
        CHECK(coherence::array_gain_turbulent(one, one, 1e-9, kWavenumber, 1e3) ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("ergodic capacity bound") {
    const PlanarArray a(32, 32, kHalfLambda);
    const double alpha_los = speed_of_light / (4.0 * pi * kFreq * 1e3);
    const coherence::CapacityInputs in{1e9,  0.01, 3.9810717055349565e-21,
                                       alpha_los, 1.0,  a,
                                       a};
    SUBCASE("no turbulence reduces to the Nt Nr gain form") {
        const double got = coherence::ergodic_capacity_bound(in, 0.0, kWavenumber, 1e3);
        const double snr = 0.01 * alpha_los * alpha_los * 1024.0 * 1024.0 /
                           (3.9810717055349565e-21 * 1e9);
        CHECK(got == doctest::Approx(1e9 * std::log2(1.0 + snr)).epsilon(1e-12));
    }
    SUBCASE("zero power sends zero bits") {
        coherence::CapacityInputs z = in;
        z.tx_power_w = 0.0;
        CHECK(coherence::ergodic_capacity_bound(z, 0.0, kWavenumber, 1e3) == 0.0);
    }
    SUBCASE("frozen Table-II regression") {
        // independently computed reference (see notes with the build): sum rho
        // and capacity at f=300 GHz, L=1 km, cn2=1e-9, lambda/2 spacing
        const double got = coherence::ergodic_capacity_bound(in, 1e-9, kWavenumber, 1e3);
        CHECK(got == doctest::Approx(4.113121458259e9).epsilon(1e-9));
        CHECK(coherence::coherence_sum(a, a, 1e-9, kWavenumber, 1e3) ==
              doctest::Approx(1.076323842550e12).epsilon(1e-9));
    }
    SUBCASE("capacity never increases with turbulence strength") {
        double prev = 1e30;
        for (double cn2 : {0.0, 1e-11, 1e-10, 1e-9, 1e-8}) {
            const double v = coherence::ergodic_capacity_bound(in, cn2, kWavenumber, 1e3);
            CHECK(v <= prev + 1e-6);
            prev = v;
        }
    }
}

TEST_CASE("channel matrix sampling") {
    const PlanarArray tx(2, 2, kHalfLambda), rx(2, 1, kHalfLambda);
    const coherence::Angles boresight{};

    SUBCASE("disabled fading returns the rank-1 LoS matrix") {
        const auto s =
            coherence::channel_matrix_sample(tx, rx, boresight, 2.5e-8, std::nullopt, false, 1);
        REQUIRE(s.h.size() == 8);
        for (const auto& h : s.h) CHECK(std::abs(h) == doctest::Approx(2.5e-8).epsilon(1e-14));
    }
    SUBCASE("independent amplitudes match the fading law's variance") {
        const fading::GammaGammaParams p{2.95, 2.46};
        // one SISO entry sampled many times through the channel path
        const PlanarArray one(1, 1, kHalfLambda);
        const std::size_t n = 100000;
        double mean = 0.0, m2 = 0.0;
        std::vector<double> amps(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto s = coherence::channel_matrix_sample(one, one, boresight, 1.0, p, false,
                                                            1000 + i);
            amps[i] = std::abs(s.h[0]);
            mean += amps[i];
        }
        mean /= n;
        double m4 = 0.0;
        for (const double a : amps) {
            const double d = a - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m4 /= n;
        const double want = fading::scintillation_variance(p);
        const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
        CHECK(std::fabs(m2 - want) < 3.0 * se);
    }
    SUBCASE("perfect correlation collapses to one draw") {
        const fading::GammaGammaParams p{2.95, 2.46};
        // cn2 = 0 makes every pairwise NC equal 1
        const auto s = coherence::channel_matrix_sample(tx, rx, boresight, 1.0, p, true, 9, 0.0,
                                                        kWavenumber, 1e3);
        const double first = std::abs(s.h[0]);
        for (const auto& h : s.h) CHECK(std::abs(h) == doctest::Approx(first).epsilon(1e-9));
    }
    SUBCASE("correlated sampling is deterministic per seed") {
        const fading::GammaGammaParams p{2.95, 2.46};
        const auto a = coherence::channel_matrix_sample(tx, rx, boresight, 1.0, p, true, 5, 1e-9,
                                                        kWavenumber, 1e4);
        const auto b = coherence::channel_matrix_sample(tx, rx, boresight, 1.0, p, true, 5, 1e-9,
                                                        kWavenumber, 1e4);
        const auto c = coherence::channel_matrix_sample(tx, rx, boresight, 1.0, p, true, 6, 1e-9,
                                                        kWavenumber, 1e4);
        CHECK(a.h == b.h);
        CHECK(a.h != c.h);
    }
}
