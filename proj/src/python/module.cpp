#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "thzturb/atmosphere.hpp"
#include "thzturb/coherence.hpp"
#include "thzturb/constants.hpp"
#include "thzturb/fading.hpp"
#include "thzturb/propagation.hpp"
#include "thzturb/scenario.hpp"
#include "thzturb/version.hpp"

namespace py = pybind11;

using namespace thzturb;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Atmospheric-turbulence channel modeling for THz UAV MIMO links";
    m.attr("__version__") = version;
    m.attr("SPEED_OF_LIGHT") = speed_of_light;

    m.def("wavenumber", &wavenumber, py::arg("frequency_hz"));
    m.def("wavelength", &wavelength, py::arg("frequency_hz"));

    // atmosphere
    m.def(
        "risc_infrared",
        [](double h, double a, double v) {
            return atmosphere::risc_infrared(h, atmosphere::TurbulenceProfile(a, v));
        },
        py::arg("altitude_m"), py::arg("ground_risc") = 1.7e-14, py::arg("wind_speed") = 21.0);
    m.def(
        "risc_thz",
        [](double h, double a, double v, double t, double pa, double pv) {
            return atmosphere::risc_thz(h, atmosphere::TurbulenceProfile(a, v), t, pa, pv);
        },
        py::arg("altitude_m"), py::arg("ground_risc") = 1.7e-14, py::arg("wind_speed") = 21.0,
        py::arg("temperature_k") = 288.15, py::arg("pressure_mbar") = 1013.25,
        py::arg("water_vapor_mbar") = 0.0);
    m.def("kolmogorov_phi", &atmosphere::kolmogorov_phi, py::arg("kappa"), py::arg("cn2"));
    m.def("rytov_variance", &atmosphere::rytov_variance, py::arg("cn2"), py::arg("frequency_hz"),
          py::arg("distance_m"));
    m.def(
        "structure_function_check",
        [](double cn2, double r) { return atmosphere::structure_function_check(cn2, r); },
        py::arg("cn2"), py::arg("separation_m"));

    // propagation
    m.def("fspl_db", &propagation::fspl_db, py::arg("frequency_hz"), py::arg("distance_m"));
    m.def(
        "los_path_gain",
        [](double f, double L, double k_abs, double k_sca) {
            LinkGeometry g;
            g.frequency_hz = f;
            g.distance_m = L;
            return propagation::los_path_gain(g, k_abs, k_sca);
        },
        py::arg("frequency_hz"), py::arg("distance_m"), py::arg("k_abs_per_m") = 0.0,
        py::arg("k_sca_per_m") = 0.0);
    m.def(
        "mie_extinction_efficiency",
        [](double x, std::complex<double> index) {
            return propagation::extinction_efficiency(x, index);
        },
        py::arg("size_parameter"), py::arg("refractive_index"));

    // coherence
    m.def(
        "nc_closed_form",
        [](double d_t, double d_r, double cn2, double k, double L) {
            return coherence::nc_closed_form({d_t, d_r, cn2, k, L});
        },
        py::arg("d_t"), py::arg("d_r"), py::arg("cn2"), py::arg("k"), py::arg("distance_m"));
    m.def(
        "nc_numeric",
        [](double d_t, double d_r, double cn2, double k, double L) {
            return coherence::nc_numeric({d_t, d_r, cn2, k, L}, {}, {1e-7, 0.0, 4000});
        },
        py::arg("d_t"), py::arg("d_r"), py::arg("cn2"), py::arg("k"), py::arg("distance_m"));
    m.def(
        "losc_loss_db",
        [](int nx, int ny, double spacing, double cn2, double k, double L) {
            const coherence::PlanarArray a{nx, ny, spacing};
            return coherence::losc_loss_db(a, a, cn2, k, L);
        },
        py::arg("nx"), py::arg("ny"), py::arg("spacing_m"), py::arg("cn2"), py::arg("k"),
        py::arg("distance_m"));
    m.def(
        "array_gain_turbulent",
        [](int nx, int ny, double spacing, double cn2, double k, double L) {
            const coherence::PlanarArray a{nx, ny, spacing};
            return coherence::array_gain_turbulent(a, a, cn2, k, L);
        },
        py::arg("nx"), py::arg("ny"), py::arg("spacing_m"), py::arg("cn2"), py::arg("k"),
        py::arg("distance_m"));
    m.def(
        "ergodic_capacity_bound",
        [](double bandwidth_hz, double tx_power_w, double noise_psd_w_hz, double alpha_los,
           double alpha_turb, int nx, int ny, double spacing, double cn2, double k, double L) {
            const coherence::PlanarArray a{nx, ny, spacing};
            const coherence::CapacityInputs in{bandwidth_hz, tx_power_w, noise_psd_w_hz,
                                               alpha_los,    alpha_turb, a,
                                               a};
            return coherence::ergodic_capacity_bound(in, cn2, k, L);
        },
        py::arg("bandwidth_hz"), py::arg("tx_power_w"), py::arg("noise_psd_w_hz"),
        py::arg("alpha_los"), py::arg("alpha_turb"), py::arg("nx"), py::arg("ny"),
        py::arg("spacing_m"), py::arg("cn2"), py::arg("k"), py::arg("distance_m"));

    // fading
    m.def(
        "andrews_params",
        [](double sigma_r2, double d_ra2) {
            const auto p = fading::andrews_params(sigma_r2, d_ra2);
            return std::make_pair(p.alpha_c, p.beta_c);
        },
        py::arg("sigma_r2"), py::arg("d_ra2") = 0.0);
    m.def(
        "gamma_gamma_pdf",
        [](double psi, double alpha, double beta) {
            return fading::gamma_gamma_pdf(psi, fading::GammaGammaParams(alpha, beta));
        },
        py::arg("psi"), py::arg("alpha"), py::arg("beta"));
    m.def(
        "gamma_gamma_sample",
        [](double alpha, double beta, std::size_t n, std::uint64_t seed) {
            return fading::gamma_gamma_sample(fading::GammaGammaParams(alpha, beta), n, seed);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("seed") = 1);
    m.def("aperture_param", &fading::aperture_param, py::arg("frequency_hz"),
          py::arg("distance_m"));
    m.def("turbulence_attenuation_db", &fading::turbulence_attenuation_db, py::arg("sigma_r2"),
          py::arg("d_ra2") = 0.0);

    // scenario runner
    m.def(
        "run_config",
        [](const std::string& config_text, const std::string& format) {
            auto result = scenario::validate_config(config_text);
            if (!result.ok()) {
                std::string msg = "invalid config:";
                for (const auto& e : result.errors) msg += "\n  " + e.key + ": " + e.message;
                throw std::invalid_argument(msg);
            }
            const auto table = scenario::run_scenario(*result.config);
            return format == "json" ? table.to_json() : table.to_csv();
        },
        py::arg("config_text"), py::arg("format") = "csv",
        "Validate and run a scenario config, returning the sweep table as text");
    m.def(
        "validate_config",
        [](const std::string& config_text) {
            auto result = scenario::validate_config(config_text);
            std::vector<std::string> errors;
            for (const auto& e : result.errors) {
                std::ostringstream os;
                if (e.line > 0) os << "line " << e.line << ": ";
                os << e.key << ": " << e.message;
                errors.push_back(os.str());
            }
            return std::make_pair(result.ok(),
                                  result.ok() ? result.config->canonical_text()
                                              : [&] {
                                                    std::string joined;
                                                    for (const auto& e : errors)
                                                        joined += e + "\n";
                                                    return joined;
                                                }());
        },
        py::arg("config_text"),
        "Returns (ok, canonical_text_or_errors)");
}
