#include "phf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <fftw3.h>

#include "phf/errors.hpp"

namespace phf {

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_) : t0(t0_), dt(dt_), n(n_) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time grid: dt must be > 0");
    if (!std::isfinite(t0)) throw std::invalid_argument("time grid: t0 must be finite");
    if (n < 2) throw std::invalid_argument("time grid: need at least 2 points");
}

TimeGrid TimeGrid::covering(double t0, double dt, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("time grid: duration must be > 0");
    const auto steps = static_cast<std::size_t>(std::llround(std::ceil(duration / dt - 1e-9)));
    return TimeGrid(t0, dt, steps + 1);
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = t(i);
    return out;
}

std::size_t TimeGrid::index_at(double t) const noexcept {
    if (t <= t0) return 0;
    const auto i = static_cast<std::size_t>(std::floor((t - t0) / dt + 1e-9));
    return std::min(i, n - 1);
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const std::string& what) {
    if (!(a == b)) {
        std::ostringstream os;
        os << what << ": grid mismatch (t0 " << a.t0 << " vs " << b.t0 << ", dt " << a.dt << " vs " << b.dt
           << ", n " << a.n << " vs " << b.n << ")";
        throw GridMismatch(os.str());
    }
}

void require_length(const TimeGrid& g, std::size_t len, const std::string& what) {
    if (len != g.n) {
        std::ostringstream os;
        os << what << ": series length " << len << " does not match grid size " << g.n;
        throw GridMismatch(os.str());
    }
}

namespace {

// FFTW's planner is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftBuffers {
    std::size_t size;
    double* real;
    fftw_complex* spec_a;
    fftw_complex* spec_b;
    fftw_plan forward;
    fftw_plan backward;

    explicit FftBuffers(std::size_t n) : size(n) {
        const std::size_t half = n / 2 + 1;
        real = fftw_alloc_real(n);
        spec_a = fftw_alloc_complex(half);
        spec_b = fftw_alloc_complex(half);
        std::lock_guard lock(planner_mutex());
        // ESTIMATE plans are deterministic, which keeps outputs reproducible.
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec_a, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_a, real, FFTW_ESTIMATE);
    }
    ~FftBuffers() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(forward);
            fftw_destroy_plan(backward);
        }
        fftw_free(real);
        fftw_free(spec_a);
        fftw_free(spec_b);
    }
    FftBuffers(const FftBuffers&) = delete;
    FftBuffers& operator=(const FftBuffers&) = delete;
};

std::size_t fft_size(std::size_t n) {
    std::size_t s = 1;
    while (s < n) s <<= 1;
    return std::max<std::size_t>(s, 2);
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, std::size_t out_len) {
    if (a.empty() || b.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
    const std::size_t n = fft_size(a.size() + b.size() - 1);
    FftBuffers buf(n);
    std::fill(buf.real, buf.real + n, 0.0);
    std::copy(a.begin(), a.end(), buf.real);
    fftw_execute_dft_r2c(buf.forward, buf.real, buf.spec_a);
    std::fill(buf.real, buf.real + n, 0.0);
    std::copy(b.begin(), b.end(), buf.real);
    fftw_execute_dft_r2c(buf.forward, buf.real, buf.spec_b);
    const std::size_t half = n / 2 + 1;
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < half; ++k) {
        const double re = buf.spec_a[k][0] * buf.spec_b[k][0] - buf.spec_a[k][1] * buf.spec_b[k][1];
        const double im = buf.spec_a[k][0] * buf.spec_b[k][1] + buf.spec_a[k][1] * buf.spec_b[k][0];
        buf.spec_a[k][0] = re * scale;
        buf.spec_a[k][1] = im * scale;
    }
    fftw_execute_dft_c2r(buf.backward, buf.spec_a, buf.real);
    return std::vector<double>(buf.real, buf.real + std::min(out_len, n));
}

}  // namespace

std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    return convolve(a, b, a.size() + b.size() - 1);
}

std::vector<double> causal_sum(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n == 0) return {};
    std::vector<double> as(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> bs(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n));
    return convolve(as, bs, n);
}

std::vector<double> trapezoid_convolution(const std::vector<double>& a, const std::vector<double>& b, double h) {
    auto y = causal_sum(a, b);
    if (y.empty()) return y;
    y[0] = 0.0;
    for (std::size_t k = 1; k < y.size(); ++k) y[k] = h * (y[k] - 0.5 * a[k] * b[0] - 0.5 * a[0] * b[k]);
    return y;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return out;
}

std::vector<double> centred_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) {
        if (n == 2) d[0] = d[1] = (f[1] - f[0]) / h;
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

}  // namespace phf
