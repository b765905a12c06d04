#pragma once

// Cosine-transform quadrature for spectral integrands with a Lorentzian-like
// peak and algebraic high-frequency decay:
//
//     I(t) = int_0^inf f(w) cos(w t) dw
//
// [0, W] is split into panels at the spectral landmarks and at the cosine
// half-periods, each panel integrated by adaptive Gauss-Kronrod. The tail
// [W, inf) uses repeated integration by parts (derivatives by forward-mode
// autodiff) for t > 0 and a mapped Gauss-Kronrod rule for t = 0. W is chosen
// so that W*t >= 40, where the asymptotic tail series is accurate.
//
// f must be callable with double and with boost::math::differentiation::fvar.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phf/errors.hpp"
#include "phf/parallel.hpp"

namespace phf::quad {

struct Options {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;  // relative to the L1 norm of the integrand
    unsigned max_depth = 15;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // achieved error estimate
    double l1 = 0.0;     // int |f cos|, the scale the relative tolerance refers to
};

/// Landmarks of the integrand: a peak at `center` of width `width`.
struct SpectralScale {
    double center = 1.0;
    double width = 1.0;
};

inline constexpr double kTailProduct = 40.0;  // minimum W*t for the asymptotic tail
inline constexpr std::size_t kTailTerms = 8;

inline double panel_limit(const SpectralScale& s, double t) {
    double w = s.center + 40.0 * s.width;
    if (t > 0.0) w = std::max(w, s.center + kTailProduct / t);
    return w;
}

namespace detail {

inline std::vector<double> breakpoints(const SpectralScale& s, double t, double upper) {
    std::vector<double> pts{0.0, upper};
    for (int k = -8; k <= 8; ++k) pts.push_back(s.center + 0.5 * k * s.width);
    for (double m = 1.0; m <= 64.0; m *= 2.0) pts.push_back(s.center + m * s.width);
    if (t > 0.0) {
        const double half = std::numbers::pi / t;
        for (double w = half; w < upper; w += half) pts.push_back(w);
    }
    std::erase_if(pts, [&](double p) { return p < 0.0 || p > upper; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(b)); }),
              pts.end());
    return pts;
}

/// f^{(k)}(w), k = 0..kTailTerms, by forward-mode autodiff.
template <class F>
std::array<double, kTailTerms + 1> derivatives(F& f, double w) {
    auto x = boost::math::differentiation::make_fvar<double, kTailTerms>(w);
    auto y = f(x);
    std::array<double, kTailTerms + 1> d{};
    for (std::size_t k = 0; k <= kTailTerms; ++k) d[k] = static_cast<double>(y.derivative(k));
    return d;
}

/// int_W^inf f(w) cos(w t) dw by integration by parts:
///   int_W^inf f e^{iwt} = -e^{iWt} sum_k (-1)^k f^{(k)}(W) / (it)^{k+1}
inline Result asymptotic_tail(const std::array<double, kTailTerms + 1>& d, double upper, double t) {
    const std::complex<double> it(0.0, t);
    std::complex<double> denom = it;
    std::complex<double> sum = 0.0;
    for (std::size_t k = 0; k < kTailTerms; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * d[k] / denom;
        denom *= it;
    }
    const std::complex<double> phase = std::polar(1.0, upper * t);
    Result r;
    r.value = -(phase * sum).real();
    r.error = std::abs(d[kTailTerms - 1]) / std::pow(t, static_cast<double>(kTailTerms)) +
              std::abs(d[kTailTerms]) / std::pow(t, static_cast<double>(kTailTerms + 1));
    r.l1 = std::abs(d[0]) / t;
    return r;
}

}  // namespace detail

/// Adaptive cosine integral int_0^inf f(w) cos(w t) dw. The reported error is
/// the sum of panel estimates and the tail remainder; callers decide whether
/// it meets their contract (see `converged`).
template <class F>
Result cosine_integral(F f, double t, const SpectralScale& scale, const Options& opt = {}) {
    using boost::math::quadrature::gauss_kronrod;
    t = std::abs(t);
    const double upper = panel_limit(scale, t);
    const auto pts = detail::breakpoints(scale, t, upper);

    Result total;
    auto integrand = [&](double w) { return f(w) * std::cos(w * t); };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0, l1 = 0.0;
        total.value += gauss_kronrod<double, 31>::integrate(integrand, pts[i], pts[i + 1], opt.max_depth,
                                                            opt.rel_tol, &err, &l1);
        total.error += err;
        total.l1 += l1;
    }
    if (t == 0.0) {
        double err = 0.0, l1 = 0.0;
        total.value += gauss_kronrod<double, 31>::integrate(
            [&](double w) { return f(w); }, upper, std::numeric_limits<double>::infinity(), opt.max_depth,
            opt.rel_tol, &err, &l1);
        total.error += err;
        total.l1 += l1;
    } else {
        const auto d = detail::derivatives(f, upper);
        const Result tail = detail::asymptotic_tail(d, upper, t);
        total.value += tail.value;
        total.error += tail.error;
        total.l1 += tail.l1;
    }
    return total;
}

inline bool converged(const Result& r, const Options& opt) {
    return r.error <= std::max(opt.abs_tol, opt.rel_tol * r.l1);
}

/// Same integral sampled on the uniform grid t_j = j*h, j < n. Large t use one
/// shared Gauss-Legendre node set with phase recurrences; t below the tail
/// switch fall back to `cosine_integral`. Output is independent of `threads`.
template <class F>
std::vector<double> cosine_integral_on_grid(F f, double h, std::size_t n, const SpectralScale& scale,
                                            const Options& opt = {}, unsigned threads = 1) {
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const double t_max = h * static_cast<double>(n - 1);
    const double upper = scale.center + 40.0 * scale.width;
    const double t_switch = kTailProduct / upper;

    std::size_t first_batch = 0;
    while (first_batch < n && static_cast<double>(first_batch) * h < t_switch) ++first_batch;

    constexpr std::size_t kBlock = 256;
    const std::size_t direct_blocks = (first_batch + kBlock - 1) / kBlock;
    parallel_blocks(direct_blocks, threads, [&](std::size_t b) {
        const std::size_t hi = std::min(first_batch, (b + 1) * kBlock);
        for (std::size_t j = b * kBlock; j < hi; ++j) {
            out[j] = cosine_integral(f, static_cast<double>(j) * h, scale, opt).value;
        }
    });
    if (first_batch >= n) return out;

    // Shared node set on [0, upper].
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double panel = std::min({std::numbers::pi / std::max(t_max, 1e-12), 0.25 * scale.width, upper / 64.0});
    const auto panels = static_cast<std::size_t>(std::ceil(upper / panel));
    const double width = upper / static_cast<double>(panels);
    std::vector<double> nodes, weights;
    nodes.reserve(panels * 20);
    weights.reserve(panels * 20);
    const auto& abscissa = Rule::abscissa();
    const auto& wgt = Rule::weights();
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t k = 0; k < abscissa.size(); ++k) {
            const int reps = abscissa[k] == 0.0 ? 1 : 2;
            for (int s = 0; s < reps; ++s) {
                const double x = (s == 0 ? 1.0 : -1.0) * abscissa[k];
                const double w = mid + half * x;
                nodes.push_back(w);
                weights.push_back(half * wgt[k] * f(w));
            }
        }
    }
    const auto d = detail::derivatives(f, upper);

    const std::size_t batch_blocks = (n - first_batch + kBlock - 1) / kBlock;
    parallel_blocks(batch_blocks, threads, [&](std::size_t b) {
        const std::size_t lo = first_batch + b * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        const std::size_t m = nodes.size();
        std::vector<double> zr(m), zi(m), rr(m), ri(m);
        const double t_lo = static_cast<double>(lo) * h;
        for (std::size_t i = 0; i < m; ++i) {
            zr[i] = std::cos(nodes[i] * t_lo);
            zi[i] = std::sin(nodes[i] * t_lo);
            rr[i] = std::cos(nodes[i] * h);
            ri[i] = std::sin(nodes[i] * h);
        }
        for (std::size_t j = lo; j < hi; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += weights[i] * zr[i];
            const double t = static_cast<double>(j) * h;
            out[j] = acc + detail::asymptotic_tail(d, upper, t).value;
            for (std::size_t i = 0; i < m; ++i) {
                const double a = zr[i] * rr[i] - zi[i] * ri[i];
                zi[i] = zr[i] * ri[i] + zi[i] * rr[i];
                zr[i] = a;
            }
        }
    });
    return out;
}

}  // namespace phf::quad
