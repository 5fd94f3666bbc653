#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "buffon/kernels.hpp"
#include "buffon/rational.hpp"
#include "buffon/sets.hpp"

namespace buffon::random4 {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Independent 64-bit seed for trial `trial` of a run with master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial);

inline constexpr double kDefaultDelta = 0.15;
inline constexpr int kDefaultAngles = 256;
inline constexpr std::int64_t kDefaultCellBudget = std::int64_t{1} << 22;

/// G_n: 4^n squares of side 4^{-n}. Each address is g_1 x_1 ... g_n x_n; square
/// labels run counter-clockwise from the lower left: 0 (0,0), 1 (1,0), 2 (1,1), 3 (0,1).
/// The g digits enumerate all quadrants, each x is drawn from the generator with
/// counter (parent index, level) and key `seed`.
struct RandomSample {
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> addresses;

    double side() const;
    std::vector<sets::Complex> origins() const;
};

RandomSample sample_g(int n, std::uint64_t seed, std::int64_t cell_budget = kDefaultCellBudget);

/// Lower-left corner of the square with the given address.
sets::Complex address_origin(const std::string& address);

double favard_of_sample(const RandomSample& s, int angle_count = kDefaultAngles,
                        kernels::Exec exec = kernels::Exec::parallel);

struct MCReport {
    int n = 0;
    int trials = 0;
    int angle_count = 0;
    std::uint64_t seed = 0;
    double mean_favard = 0;
    double stderr_favard = 0;
    std::vector<double> values; ///< per trial, in trial order
};

MCReport mc_expectation(int n, int trials, std::uint64_t seed, int angle_count = kDefaultAngles,
                        kernels::Exec exec = kernels::Exec::parallel);

struct EssentialStats {
    std::int64_t essential = 0;
    std::int64_t nonessential = 0;
};

/// Essential: every g digit appears at least delta * n times among g_1 ... g_n.
bool is_essential(const std::string& address, double delta);
EssentialStats essential_stats(const RandomSample& s, double delta = kDefaultDelta);

/// 4 * sum_{j <= delta n} C(n, j) 4^j 3^{n-j}
BigInt nonessential_bound(int n, double delta);

struct LineHitStats {
    std::int64_t essential_squares = 0;
    std::int64_t lines = 0;
    std::optional<double> mean_hits; ///< none without essential squares
    double stderr_hits = 0;
    bool exceptional = false;        ///< axis-parallel or low-height rational slope
};

/// Lines y = t x + c through uniform points of uniformly chosen essential squares;
/// counts the squares of G_n each line meets.
LineHitStats line_hit_stats(const RandomSample& s, double t, std::int64_t sample_lines,
                            double delta = kDefaultDelta, std::uint64_t seed = 0);

/// True when t = p/q with q <= max_den up to 1e-9.
bool is_exceptional_slope(double t, std::int64_t max_den);

} // namespace buffon::random4
