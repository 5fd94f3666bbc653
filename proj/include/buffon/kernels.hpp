#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; the tests check
// that they agree and the benchmark target compares them.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace buffon::kernels {

using Complex = std::complex<double>;

enum class Exec { serial, parallel };

/// Caps the OpenMP worker count; 0 restores the runtime default.
void set_max_threads(int n);
int max_threads();

/// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x)
    {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

/// Fixed chunk size of the deterministic parallel reduction. The result of
/// `omp::midpoint_sum` depends on this constant but not on the thread count.
inline constexpr std::int64_t kChunk = 4096;

namespace serial {

/// Measure of the union of intervals [s, s + length], s in `starts`; sorts `starts`.
double union_of_translates(std::span<double> starts, double length);

/// |proj| of origin + scale * base along each direction (cos, sin) or (1, t).
std::vector<double> projected_measures(std::span<const Complex> origins, double scale,
                                       std::span<const Complex> base,
                                       std::span<const std::array<double, 2>> directions);

/// sum_{k < count} f(a + (k + 1/2) h), plain compensated loop.
template <class F>
double midpoint_sum(F&& f, double a, double h, std::int64_t count)
{
    CompensatedSum acc;
    for (std::int64_t k = 0; k < count; ++k)
        acc.add(f(a + (static_cast<double>(k) + 0.5) * h));
    return acc.value();
}

} // namespace serial

namespace omp {

std::vector<double> projected_measures(std::span<const Complex> origins, double scale,
                                       std::span<const Complex> base,
                                       std::span<const std::array<double, 2>> directions);

/// Same sum as serial::midpoint_sum, reduced chunk-by-chunk in index order.
template <class F>
double midpoint_sum(F&& f, double a, double h, std::int64_t count)
{
    const std::int64_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        CompensatedSum acc;
        const std::int64_t hi = std::min(count, (c + 1) * kChunk);
        for (std::int64_t k = c * kChunk; k < hi; ++k)
            acc.add(f(a + (static_cast<double>(k) + 0.5) * h));
        partial[static_cast<std::size_t>(c)] = acc.value();
    }
    CompensatedSum total;
    for (double p : partial)
        total.add(p);
    return total.value();
}

} // namespace omp

template <class F>
double midpoint_sum(Exec exec, F&& f, double a, double h, std::int64_t count)
{
    return exec == Exec::serial ? serial::midpoint_sum(f, a, h, count) : omp::midpoint_sum(f, a, h, count);
}

inline std::vector<double> projected_measures(Exec exec, std::span<const Complex> origins, double scale,
                                              std::span<const Complex> base,
                                              std::span<const std::array<double, 2>> directions)
{
    return exec == Exec::serial ? serial::projected_measures(origins, scale, base, directions)
                                : omp::projected_measures(origins, scale, base, directions);
}

} // namespace buffon::kernels
