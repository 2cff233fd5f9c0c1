#ifndef THZTURB_TESTS_LOSC_BRUTE_HPP
#define THZTURB_TESTS_LOSC_BRUTE_HPP

#include <cmath>
#include <vector>

#include "thzturb/coherence.hpp"

namespace oracles {

// O((Nt Nr)^2) quadruple sum over explicit element pairs; no histogram
// compression. Shares only the per-pair closed form with the library.
inline double losc_brute_force_db(const thzturb::coherence::PlanarArray& tx,
                                  const thzturb::coherence::PlanarArray& rx, double cn2, double k,
                                  double L) {
    using thzturb::coherence::NCQuery;
    std::vector<std::array<double, 2>> tpos, rpos;
    for (int ix = 0; ix < tx.nx; ++ix)
        for (int iy = 0; iy < tx.ny; ++iy) tpos.push_back(tx.position(ix, iy));
    for (int ix = 0; ix < rx.nx; ++ix)
        for (int iy = 0; iy < rx.ny; ++iy) rpos.push_back(rx.position(ix, iy));
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < tpos.size(); ++i) {
        for (std::size_t i2 = 0; i2 < tpos.size(); ++i2) {
            const double d_t =
                std::hypot(tpos[i][0] - tpos[i2][0], tpos[i][1] - tpos[i2][1]);
            for (std::size_t j = 0; j < rpos.size(); ++j) {
                for (std::size_t j2 = 0; j2 < rpos.size(); ++j2) {
                    const double d_r =
                        std::hypot(rpos[j][0] - rpos[j2][0], rpos[j][1] - rpos[j2][1]);
                    const double rho =
                        thzturb::coherence::nc_closed_form(NCQuery{d_t, d_r, cn2, k, L});
                    const double y = rho - comp;
                    const double t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                }
            }
        }
    }
    const double nt = tx.size(), nr = rx.size();
    return 10.0 * std::log10(nt * nt * nr * nr / sum);
}

}  // namespace oracles

#endif
