#pragma once

// Uniform time grid and FFT-backed discrete convolutions on it.

#include <cstddef>
#include <string>
#include <vector>

namespace phf {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0 / 256.0;
    std::size_t n = 2;

    TimeGrid() = default;
    TimeGrid(double t0, double dt, std::size_t n);

    /// Grid covering [t0, t0 + duration] with step dt.
    static TimeGrid covering(double t0, double dt, double duration);

    double t(std::size_t i) const noexcept { return t0 + dt * static_cast<double>(i); }
    double t_end() const noexcept { return t(n - 1); }
    std::vector<double> times() const;

    /// Index of the last grid point not after t (clamped to the grid).
    std::size_t index_at(double t) const noexcept;

    bool operator==(const TimeGrid& o) const noexcept { return t0 == o.t0 && dt == o.dt && n == o.n; }
};

/// Throws GridMismatch naming `what` if the grids differ.
void require_same_grid(const TimeGrid& a, const TimeGrid& b, const std::string& what);
/// Throws GridMismatch if the series length does not match the grid.
void require_length(const TimeGrid& g, std::size_t len, const std::string& what);

/// Full linear convolution c_k = sum_i a_i b_{k-i}, length |a| + |b| - 1.
std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b);

/// Causal sum y_n = sum_{i=0}^{n} a_{n-i} b_i for n < min(|a|, |b|).
std::vector<double> causal_sum(const std::vector<double>& a, const std::vector<double>& b);

/// Trapezoidal causal convolution y_n = int_0^{t_n} a(t_n - s) b(s) ds, y_0 = 0.
std::vector<double> trapezoid_convolution(const std::vector<double>& a, const std::vector<double>& b, double h);

/// Running trapezoidal integral, y_0 = 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h);

/// Second-order centred derivative, one-sided second-order at both ends.
std::vector<double> centred_derivative(const std::vector<double>& f, double h);

}  // namespace phf
