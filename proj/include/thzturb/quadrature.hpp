#ifndef THZTURB_QUADRATURE_HPP
#define THZTURB_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "thzturb/errors.hpp"

namespace thzturb::quad {

struct Config {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int intervals = 0;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss (QUADPACK dqk15 constants).
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double fv1[7], fv2[7];
    double result_gauss = wg[3] * fc;
    double result_kronrod = wgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * xgk[j];
        fv1[j] = f(c - x);
        fv2[j] = f(c + x);
        result_kronrod += wgk[j] * (fv1[j] + fv2[j]);
        if (j % 2 == 1) result_gauss += wg[j / 2] * (fv1[j] + fv2[j]);
    }
    value = result_kronrod * h;
    error = std::abs((result_kronrod - result_gauss) * h);
    // QUADPACK-style error sharpening
    if (error != 0.0) {
        const double mean = result_kronrod * 0.5;
        double resasc = std::abs(wgk[7] * (fc - mean));
        for (int j = 0; j < 7; ++j)
            resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
        resasc *= std::abs(h);
        if (resasc != 0.0) error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
    }
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b].
// Throws numerical_error when the tolerance cannot be met within cfg.max_intervals.
template <class F>
Result integrate(F&& f, double a, double b, const Config& cfg = {}) {
    if (a == b) return {0.0, 0.0, 0};
    std::vector<detail::Interval> heap;
    heap.reserve(64);
    detail::Interval first{a, b, 0.0, 0.0};
    detail::gk15(f, a, b, first.value, first.error);
    heap.push_back(first);
    double total = first.value;
    double total_err = first.error;
    int n = 1;
    while (true) {
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        if (n >= cfg.max_intervals) {
            throw numerical_error(
                "adaptive quadrature did not converge: achieved error " + std::to_string(total_err) +
                ", required " + std::to_string(tol) + " after " + std::to_string(n) + " intervals");
        }
        std::pop_heap(heap.begin(), heap.end());
        const detail::Interval worst = heap.back();
        heap.pop_back();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Interval left{worst.a, mid, 0.0, 0.0};
        detail::Interval right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value;
        total_err += left.error + right.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        ++n;
    }
    return {total, total_err, n};
}

// Integrate over a list of panel edges, summing per-panel adaptive results.
// The per-panel tolerance is cfg.abs_tol plus rel_tol scaled by a running magnitude.
template <class F>
Result integrate_panels(F&& f, const std::vector<double>& edges, const Config& cfg = {}) {
    Result acc;
    if (edges.size() < 2) return acc;
    // First pass with a crude magnitude estimate so panel abs tolerances are meaningful.
    double magnitude = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double v, e;
        detail::gk15(f, edges[i], edges[i + 1], v, e);
        magnitude += std::abs(v);
    }
    Config panel_cfg = cfg;
    panel_cfg.abs_tol = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * magnitude /
                                                  static_cast<double>(edges.size() - 1));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const Result r = integrate(f, edges[i], edges[i + 1], panel_cfg);
        acc.value += r.value;
        acc.error += r.error;
        acc.intervals += r.intervals;
    }
    return acc;
}

}  // namespace thzturb::quad

#endif
