#ifndef THZTURB_RNG_HPP
#define THZTURB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace thzturb::rng {

// Seeded random stream with portable transforms. The engine (mt19937_64) is
// fully specified by the standard and the distribution transforms below are
// hand-rolled, so sequences are identical across platforms and library
// versions for a fixed seed. One stream per call site; never shared across
// threads.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform() {
        const std::uint64_t r = eng_();
        return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia polar method (spare value cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Gamma(shape, scale) via Marsaglia-Tsang; shape < 1 boosted through shape+1.
    double gamma(double shape, double scale) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    // Deterministic per-point seed derivation (splitmix64 finalizer).
    static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
        std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace thzturb::rng

#endif
