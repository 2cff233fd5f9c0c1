#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "thzturb/atmosphere.hpp"
#include "thzturb/constants.hpp"
#include "thzturb/errors.hpp"

using namespace thzturb;
using atmosphere::TurbulenceProfile;

TEST_CASE("HV profile at ground level") {
    const TurbulenceProfile p(1.7e-14, 21.0);
    // wind term vanishes at h=0, exponentials are 1
    CHECK(atmosphere::risc_infrared(0.0, p) == doctest::Approx(1.727e-14).epsilon(1e-12));
}

TEST_CASE("HV profile decays to nothing at extreme altitude") {
    const TurbulenceProfile p(1.7e-14, 21.0);
    CHECK(atmosphere::risc_infrared(1e6, p) < 1e-300);
}

TEST_CASE("HV profile at 1 km, term-by-term") {
    const TurbulenceProfile p(1.7e-14, 21.0);
    const double wind = 0.00594 * std::pow(21.0 / 27.0, 2) * std::pow(1e-5 * 1000.0, 10) *
                        std::exp(-1000.0 / 1000.0);
    const double tropo = 2.7e-16 * std::exp(-1000.0 / 1500.0);
    const double ground = 1.7e-14 * std::exp(-1000.0 / 100.0);
    CHECK(atmosphere::risc_infrared(1000.0, p) ==
          doctest::Approx(wind + tropo + ground).epsilon(1e-14));
}

TEST_CASE("negative altitude rejected") {
    const TurbulenceProfile p(1.7e-14, 21.0);
    CHECK_THROWS_AS(atmosphere::risc_infrared(-1.0, p), std::domain_error);
}

TEST_CASE("constant-RISC override wins") {
    const TurbulenceProfile p(1.7e-14, 21.0, 1e-9);
    CHECK(atmosphere::risc_infrared(0.0, p) == 1e-9);
    CHECK(atmosphere::risc_infrared(5000.0, p) == 1e-9);
    // already the effective value: no band transform applied
    CHECK(atmosphere::risc_thz(0.0, p, 288.0, 1013.0, 0.0) == 1e-9);
}

TEST_CASE("profile invariants enforced") {
    CHECK_THROWS_AS(TurbulenceProfile(-1.0, 21.0), std::invalid_argument);
    CHECK_THROWS_AS(TurbulenceProfile(1e-14, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(TurbulenceProfile(1e-14, 21.0, 0.0), std::invalid_argument);
}

TEST_CASE("THz transform reduces to a constant for dry air") {
    const double scale = atmosphere::thz_transform_scale(288.0, 1013.0, 0.0);
    const double expected = (77.6 / 79.0) * (77.6 / 79.0);
    CHECK(scale == doctest::Approx(expected).epsilon(1e-14));
    // independent of Pa and T when Pv = 0
    CHECK(atmosphere::thz_transform_scale(250.0, 500.0, 0.0) ==
          doctest::Approx(expected).epsilon(1e-14));
    const TurbulenceProfile p(1.7e-14, 21.0);
    CHECK(atmosphere::risc_thz(0.0, p, 288.0, 1013.0, 0.0) ==
          doctest::Approx(expected * atmosphere::risc_infrared(0.0, p)).epsilon(1e-14));
}

TEST_CASE("THz transform against finite-difference derivatives") {
    // derivatives of the refractivity models recomputed numerically
    const double t = 288.0, pa = 1013.0, pv = 10.0;
    const auto n_thz = [&](double temp) {
        return 1.0 + 77.6e-6 * (pa / temp + 4810.0 * pv / (temp * temp));
    };
    const auto n_ir = [&](double temp) { return 1.0 + 79e-6 * pa / temp; };
    const double h = 1e-3;
    const double d_thz = (n_thz(t + h) - n_thz(t - h)) / (2.0 * h);
    const double d_ir = (n_ir(t + h) - n_ir(t - h)) / (2.0 * h);
    const double expected = (d_thz / d_ir) * (d_thz / d_ir);
    CHECK(atmosphere::thz_transform_scale(t, pa, pv) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("THz/infrared ratio is altitude-free") {
    const TurbulenceProfile p(1.7e-14, 21.0);
    const double r0 = atmosphere::risc_thz(0.0, p, 288.0, 1013.0, 7.5) /
                      atmosphere::risc_infrared(0.0, p);
    for (double h : {100.0, 1500.0, 8000.0, 20000.0}) {
        const double r = atmosphere::risc_thz(h, p, 288.0, 1013.0, 7.5) /
                         atmosphere::risc_infrared(h, p);
        CHECK(r == doctest::Approx(r0).epsilon(1e-13));
    }
}

TEST_CASE("approximate transform is the identity") {
    const TurbulenceProfile p(1.7e-14, 21.0);
    CHECK(atmosphere::risc_thz(700.0, p, 288.0, 1013.0, 7.5, atmosphere::ThzTransform::approximate) ==
          atmosphere::risc_infrared(700.0, p));
}

TEST_CASE("transform domain errors") {
    CHECK_THROWS_AS(atmosphere::thz_transform_scale(0.0, 1013.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(atmosphere::thz_transform_scale(288.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("HV profile decays above the wind-term bump") {
    // each term decays only once h >= 10 km (the wind term grows before that)
    for (double a : {0.0, 1.7e-14, 1.0, 100.0}) {
        for (double v : {0.0, 21.0, 57.0, 100.0}) {
            const TurbulenceProfile p(a, v);
            double prev = atmosphere::risc_infrared(10000.0, p);
            for (double h = 10050.0; h <= 30000.0; h += 50.0) {
                const double cur = atmosphere::risc_infrared(h, p);
                CHECK(cur <= prev * (1.0 + 1e-12));
                prev = cur;
            }
        }
    }
}

TEST_CASE("inertial-range validity window") {
    const atmosphere::KolmogorovSpectrum spec(1e-14);
    CHECK(spec.in_inertial_range(1.0));
    CHECK_FALSE(spec.in_inertial_range(0.005));  // below 1/L0
    CHECK_FALSE(spec.in_inertial_range(2000.0)); // above 1/l0
    CHECK_THROWS_AS(atmosphere::KolmogorovSpectrum(0.0), std::invalid_argument);
    CHECK_THROWS_AS(atmosphere::KolmogorovSpectrum(1e-14, 10.0, 1.0), std::invalid_argument);
}

TEST_CASE("Kolmogorov spectrum basics") {
    CHECK(atmosphere::kolmogorov_phi(1.0, 1.0) == doctest::Approx(0.033).epsilon(1e-15));
    CHECK(atmosphere::kolmogorov_phi(3.7, 2e-14) ==
          doctest::Approx(2.0 * atmosphere::kolmogorov_phi(3.7, 1e-14)).epsilon(1e-15));
    CHECK(atmosphere::kolmogorov_phi(10.0, 1e-14) ==
          doctest::Approx(0.033 * 1e-14 * std::pow(10.0, -11.0 / 3.0)).epsilon(1e-13));
    CHECK_THROWS_AS(atmosphere::kolmogorov_phi(0.0, 1e-14), std::domain_error);
    CHECK_THROWS_AS(atmosphere::kolmogorov_phi(-1.0, 1e-14), std::domain_error);
}

TEST_CASE("spectrum compensated by kappa^{11/3} is flat") {
    const double ref = atmosphere::kolmogorov_phi(1e-3, 1e-13) * std::pow(1e-3, 11.0 / 3.0);
    for (double kappa = 1e-2; kappa < 1e4; kappa *= 3.7) {
        const double v = atmosphere::kolmogorov_phi(kappa, 1e-13) * std::pow(kappa, 11.0 / 3.0);
        CHECK(v == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("Rytov variance values and scaling") {
    CHECK(atmosphere::rytov_variance(0.0, 3e11, 1e3) == 0.0);
    CHECK(atmosphere::classify_regime(0.0) == atmosphere::Regime::weak);

    // direct evaluation; the text's quoted 396 at these parameters is not
    // reproduced by the formula (comes out near 198)
    const double v = atmosphere::rytov_variance(1e-11, 3e11, 1e5);
    const double k = 2.0 * pi * 3e11 / speed_of_light;
    const double direct = 0.5 * 1e-11 * std::exp(7.0 / 6.0 * std::log(k)) *
                          std::exp(11.0 / 6.0 * std::log(1e5));
    CHECK(v == doctest::Approx(direct).epsilon(1e-12));
    CHECK(v > 150.0);
    CHECK(v < 250.0);

    // separable scaling
    CHECK(atmosphere::rytov_variance(3e-12, 2e11, 2e4) ==
          doctest::Approx(3.0 * atmosphere::rytov_variance(1e-12, 2e11, 2e4)).epsilon(1e-12));
    CHECK(atmosphere::rytov_variance(1e-12, 2e11, 2e4) /
              atmosphere::rytov_variance(1e-12, 2e11, 1e4) ==
          doctest::Approx(std::pow(2.0, 11.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("regime classification thresholds") {
    CHECK(atmosphere::classify_regime(0.05) == atmosphere::Regime::weak);
    CHECK(atmosphere::classify_regime(0.5) == atmosphere::Regime::strong);
    CHECK(atmosphere::classify_regime(50.0) == atmosphere::Regime::saturated);
    const atmosphere::RegimeThresholds custom{0.01, 100.0};
    CHECK(atmosphere::classify_regime(0.05, custom) == atmosphere::Regime::strong);
}

TEST_CASE("structure function reproduces the 2/3 law") {
    for (double r : {0.01, 0.1, 1.0, 10.0}) {
        CHECK(atmosphere::structure_function_check(1e-14, r) < 1e-2);
    }
}

TEST_CASE("structure function scalings") {
    const double d1 = atmosphere::structure_function(1e-14, 0.5);
    // r -> 8r multiplies D by 4
    CHECK(atmosphere::structure_function(1e-14, 4.0) == doctest::Approx(4.0 * d1).epsilon(1e-6));
    // linear in cn2
    CHECK(atmosphere::structure_function(2e-14, 0.5) == doctest::Approx(2.0 * d1).epsilon(1e-12));
}

TEST_CASE("structure function quadrature failure is reported") {
    CHECK_THROWS_AS(atmosphere::structure_function(1e-14, 1.0, {1e-15, 0.0, 1}),
                    numerical_error);
}
