#include "buffon/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace buffon::kernels {

namespace {

int g_default_threads = 0;

struct BaseExtent {
    double lo;
    double hi;
};

BaseExtent base_extent(std::span<const Complex> base, const std::array<double, 2>& dir)
{
    double lo = 1e300, hi = -1e300;
    for (auto v : base) {
        double d = v.real() * dir[0] + v.imag() * dir[1];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

double measure_along(std::span<const Complex> origins, double scale, const BaseExtent& ext,
                     const std::array<double, 2>& dir, std::vector<double>& scratch)
{
    scratch.resize(origins.size());
    for (std::size_t i = 0; i < origins.size(); ++i)
        scratch[i] = origins[i].real() * dir[0] + origins[i].imag() * dir[1] + scale * ext.lo;
    return serial::union_of_translates(scratch, scale * (ext.hi - ext.lo));
}

} // namespace

void set_max_threads(int n)
{
#ifdef _OPENMP
    if (g_default_threads == 0)
        g_default_threads = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : g_default_threads);
#else
    (void)n;
#endif
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

double union_of_translates(std::span<double> starts, double length)
{
    if (starts.empty() || length <= 0)
        return 0.0;
    std::sort(starts.begin(), starts.end());
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < starts.size(); ++i)
        acc.add(std::min(length, starts[i + 1] - starts[i]));
    acc.add(length);
    return acc.value();
}

std::vector<double> projected_measures(std::span<const Complex> origins, double scale,
                                       std::span<const Complex> base,
                                       std::span<const std::array<double, 2>> directions)
{
    std::vector<double> out(directions.size());
    std::vector<double> scratch;
    for (std::size_t k = 0; k < directions.size(); ++k)
        out[k] = measure_along(origins, scale, base_extent(base, directions[k]), directions[k], scratch);
    return out;
}

} // namespace serial

namespace omp {

std::vector<double> projected_measures(std::span<const Complex> origins, double scale,
                                       std::span<const Complex> base,
                                       std::span<const std::array<double, 2>> directions)
{
    std::vector<double> out(directions.size());
    const auto count = static_cast<std::int64_t>(directions.size());
#pragma omp parallel
    {
        std::vector<double> scratch;
#pragma omp for schedule(dynamic, 4)
        for (std::int64_t k = 0; k < count; ++k) {
            const auto& dir = directions[static_cast<std::size_t>(k)];
            out[static_cast<std::size_t>(k)] = measure_along(origins, scale, base_extent(base, dir), dir, scratch);
        }
    }
    return out;
}

} // namespace omp

} // namespace buffon::kernels
