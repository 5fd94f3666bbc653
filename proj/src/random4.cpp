#include "buffon/random4.hpp"

#include <algorithm>
#include <cmath>

#include "buffon/errors.hpp"
#include "buffon/project.hpp"

namespace buffon::random4 {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;

// stream tags in the last counter word
constexpr std::uint32_t kTagSample = 0x47736d70;
constexpr std::uint32_t kTagTrial = 0x54726c73;

constexpr std::array<sets::Complex, 4> kCorner{sets::Complex{0, 0}, {1, 0}, {1, 1}, {0, 1}};

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::array<std::uint32_t, 2> key_of(std::uint64_t seed) { return {lo32(seed), hi32(seed)}; }

double unit_double(std::uint32_t w) { return (static_cast<double>(w) + 0.5) * 0x1p-32; }

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k)
{
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        c = {hi32(p1) ^ c[1] ^ k[0], lo32(p1), hi32(p0) ^ c[3] ^ k[1], lo32(p0)};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial)
{
    const auto out = philox4x32({lo32(trial), hi32(trial), 0, kTagTrial}, key_of(master));
    return static_cast<std::uint64_t>(out[1]) << 32 | out[0];
}

double RandomSample::side() const { return std::pow(4.0, -n); }

sets::Complex address_origin(const std::string& address)
{
    require(address.size() % 2 == 0, "address length must be even");
    sets::Complex z{0, 0};
    double s = 1;
    for (std::size_t i = 0; i < address.size(); i += 2) {
        const int g = address[i] - '0', x = address[i + 1] - '0';
        require(0 <= g && g < 4 && 0 <= x && x < 4, "address digits must be 0..3");
        z += kCorner[static_cast<std::size_t>(g)] * (s / 2) + kCorner[static_cast<std::size_t>(x)] * (s / 4);
        s /= 4;
    }
    return z;
}

std::vector<sets::Complex> RandomSample::origins() const
{
    std::vector<sets::Complex> out;
    out.reserve(addresses.size());
    for (const auto& a : addresses)
        out.push_back(address_origin(a));
    return out;
}

RandomSample sample_g(int n, std::uint64_t seed, std::int64_t cell_budget)
{
    require(n >= 0, "n must be nonnegative");
    if (n > 15 || (std::int64_t{1} << (2 * n)) > cell_budget)
        throw BudgetExceeded("4^n squares exceed the cell budget");
    RandomSample s;
    s.n = n;
    s.seed = seed;
    const auto key = key_of(seed);
    std::vector<std::uint64_t> codes{0};
    s.addresses = {""};
    for (int level = 0; level < n; ++level) {
        std::vector<std::uint64_t> next_codes;
        std::vector<std::string> next;
        next_codes.reserve(codes.size() * 4);
        next.reserve(codes.size() * 4);
        for (std::size_t i = 0; i < codes.size(); ++i)
            for (std::uint32_t g = 0; g < 4; ++g) {
                const std::uint64_t parent = codes[i] * 4 + g;
                const auto out = philox4x32({lo32(parent), hi32(parent), static_cast<std::uint32_t>(level), kTagSample}, key);
                const std::uint32_t x = out[0] & 3;
                next_codes.push_back(parent * 4 + x);
                next.push_back(s.addresses[i] + static_cast<char>('0' + g) + static_cast<char>('0' + x));
            }
        codes = std::move(next_codes);
        s.addresses = std::move(next);
    }
    return s;
}

double favard_of_sample(const RandomSample& s, int angle_count, kernels::Exec exec)
{
    const auto origins = s.origins();
    const auto base = sets::unit_square();
    return project::favard_of_cells(origins, s.side(), base, angle_count, exec);
}

MCReport mc_expectation(int n, int trials, std::uint64_t seed, int angle_count, kernels::Exec exec)
{
    require(trials >= 2, "need at least 2 trials");
    require(angle_count >= 2, "angle_count must be >= 2");
    if (n > 15 || (std::int64_t{1} << (2 * n)) > kDefaultCellBudget)
        throw BudgetExceeded("4^n squares exceed the cell budget");
    MCReport r;
    r.n = n;
    r.trials = trials;
    r.angle_count = angle_count;
    r.seed = seed;
    r.values.assign(static_cast<std::size_t>(trials), 0.0);
#pragma omp parallel for schedule(dynamic) if (exec == kernels::Exec::parallel)
    for (int k = 0; k < trials; ++k) {
        const auto s = sample_g(n, derive_seed(seed, static_cast<std::uint64_t>(k)));
        r.values[static_cast<std::size_t>(k)] = favard_of_sample(s, angle_count, kernels::Exec::serial);
    }
    kernels::CompensatedSum sum;
    for (double v : r.values)
        sum.add(v);
    r.mean_favard = sum.value() / trials;
    kernels::CompensatedSum sq;
    for (double v : r.values)
        sq.add((v - r.mean_favard) * (v - r.mean_favard));
    r.stderr_favard = std::sqrt(sq.value() / (trials - 1) / trials);
    return r;
}

bool is_essential(const std::string& address, double delta)
{
    const std::size_t n = address.size() / 2;
    int count[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i)
        ++count[address[2 * i] - '0'];
    const int need = std::max(1, static_cast<int>(std::ceil(delta * static_cast<double>(n) - 1e-9)));
    return std::all_of(count, count + 4, [need](int c) { return c >= need; });
}

EssentialStats essential_stats(const RandomSample& s, double delta)
{
    require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
    EssentialStats e;
    for (const auto& a : s.addresses)
        (is_essential(a, delta) ? e.essential : e.nonessential)++;
    return e;
}

BigInt nonessential_bound(int n, double delta)
{
    require(n >= 0, "n must be nonnegative");
    require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
    const auto J = static_cast<int>(std::floor(delta * n + 1e-12));
    BigInt total = 0, binom = 1;
    for (int j = 0; j <= std::min(J, n); ++j) {
        if (j > 0)
            binom = binom * (n - j + 1) / j;
        total += binom * boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(j)) *
                 boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(n - j));
    }
    return 4 * total;
}

bool is_exceptional_slope(double t, std::int64_t max_den)
{
    for (std::int64_t q = 1; q <= max_den; ++q) {
        const double y = t * static_cast<double>(q);
        if (std::abs(y - std::round(y)) <= 1e-9 * static_cast<double>(q))
            return true;
    }
    return false;
}

LineHitStats line_hit_stats(const RandomSample& s, double t, std::int64_t sample_lines, double delta,
                            std::uint64_t seed)
{
    require(sample_lines >= 1, "sample_lines must be positive");
    require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
    LineHitStats r;
    r.exceptional = is_exceptional_slope(t, std::int64_t{1} << (2 * s.n));

    const auto origins = s.origins();
    const double side = s.side();
    std::vector<std::size_t> essential;
    for (std::size_t i = 0; i < s.addresses.size(); ++i)
        if (is_essential(s.addresses[i], delta))
            essential.push_back(i);
    r.essential_squares = static_cast<std::int64_t>(essential.size());
    if (essential.empty())
        return r;

    // the cell [a, a+s] x [b, b+s] meets y = t x + c iff c lies in [left, left + len]
    const double len = side * (1 + std::abs(t));
    std::vector<double> left;
    left.reserve(origins.size());
    for (const auto& z : origins)
        left.push_back(z.imag() - t * z.real() - side * std::max(t, 0.0));
    std::sort(left.begin(), left.end());

    r.lines = sample_lines;
    const auto key = key_of(seed);
    kernels::CompensatedSum sum, sq;
    std::vector<double> hits(static_cast<std::size_t>(sample_lines));
    for (std::int64_t k = 0; k < sample_lines; ++k) {
        const auto u = static_cast<std::uint64_t>(k);
        const auto out = philox4x32({lo32(u), hi32(u), lo32(s.seed), hi32(s.seed)}, key);
        const auto pick = static_cast<std::size_t>(
            (static_cast<unsigned __int128>(static_cast<std::uint64_t>(out[1]) << 32 | out[0]) * essential.size()) >> 64);
        const auto& z = origins[essential[pick]];
        const double x = z.real() + side * unit_double(out[2]);
        const double y = z.imag() + side * unit_double(out[3]);
        const double c = y - t * x;
        const auto hi = std::upper_bound(left.begin(), left.end(), c);
        const auto lo = std::lower_bound(left.begin(), left.end(), c - len);
        hits[static_cast<std::size_t>(k)] = static_cast<double>(hi - lo);
        sum.add(hits[static_cast<std::size_t>(k)]);
    }
    const double mean = sum.value() / static_cast<double>(sample_lines);
    for (double h : hits)
        sq.add((h - mean) * (h - mean));
    r.mean_hits = mean;
    r.stderr_hits = sample_lines > 1 ? std::sqrt(sq.value() / double(sample_lines - 1) / double(sample_lines)) : 0;
    return r;
}

} // namespace buffon::random4
