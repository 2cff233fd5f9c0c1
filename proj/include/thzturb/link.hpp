#ifndef THZTURB_LINK_HPP
#define THZTURB_LINK_HPP

#include <stdexcept>

namespace thzturb {

struct LinkGeometry {
    double frequency_hz = 300e9;
    double distance_m = 1e3;
    double altitude_m = 0.0;
    double tx_power_w = 0.01;          // 10 dBm
    double bandwidth_hz = 1e9;
    double noise_psd_w_hz = 3.9810717055349565e-21;  // -174 dBm/Hz

    void validate() const {
        if (!(frequency_hz > 0.0)) throw std::invalid_argument("LinkGeometry: frequency must be > 0");
        if (!(distance_m > 0.0)) throw std::invalid_argument("LinkGeometry: distance must be > 0");
        if (altitude_m < 0.0) throw std::invalid_argument("LinkGeometry: altitude must be >= 0");
        if (tx_power_w < 0.0) throw std::invalid_argument("LinkGeometry: transmit power must be >= 0");
        if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("LinkGeometry: bandwidth must be > 0");
        if (!(noise_psd_w_hz > 0.0)) throw std::invalid_argument("LinkGeometry: noise PSD must be > 0");
    }
};

}  // namespace thzturb

#endif
