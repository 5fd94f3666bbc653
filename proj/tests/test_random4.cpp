#include <doctest.h>

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "buffon/errors.hpp"
#include "buffon/random4.hpp"

using namespace buffon;
using namespace buffon::random4;

namespace {

mpz_class gmp_bound(int n, double delta)
{
    mpz_class total = 0;
    for (int j = 0; j <= n && j <= delta * n + 1e-12; ++j) {
        mpz_class c, p4, p3;
        mpz_bin_uiui(c.get_mpz_t(), n, j);
        mpz_ui_pow_ui(p4.get_mpz_t(), 4, j);
        mpz_ui_pow_ui(p3.get_mpz_t(), 3, n - j);
        total += c * p4 * p3;
    }
    return 4 * total;
}

} // namespace

TEST_CASE("philox known answers")
{
    using W = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("first generation has one quarter square per quadrant")
{
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const auto s = sample_g(1, seed);
        REQUIRE(s.addresses.size() == 4);
        CHECK(s.side() == 0.25);
        std::set<std::pair<int, int>> quadrants;
        for (const auto& z : s.origins()) {
            quadrants.insert({static_cast<int>(z.real() * 2), static_cast<int>(z.imag() * 2)});
            CHECK(std::fmod(z.real(), 0.25) == 0);
            CHECK(std::fmod(z.imag(), 0.25) == 0);
        }
        CHECK(quadrants.size() == 4);
    }
    CHECK(address_origin("02") == sets::Complex(0.25, 0.25));
    CHECK(address_origin("13") == sets::Complex(0.5, 0.25));
    CHECK(address_origin("21") == sets::Complex(0.75, 0.5));
    CHECK(address_origin("33") == sets::Complex(0, 0.75));
}

TEST_CASE("the figure configuration occurs")
{
    const std::set<std::string> want{"02", "13", "21", "33"};
    bool found = false;
    for (std::uint64_t seed = 0; seed < 20000 && !found; ++seed) {
        const auto s = sample_g(1, seed);
        found = std::set<std::string>(s.addresses.begin(), s.addresses.end()) == want;
    }
    CHECK(found);
}

TEST_CASE("one live square per parent, nested and deterministic")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 1 + static_cast<int>(seed % 6);
        const auto s = sample_g(n, seed);
        CHECK(s.addresses.size() == static_cast<std::size_t>(1) << (2 * n));
        std::map<std::string, std::set<char>> children;
        for (const auto& a : s.addresses)
            for (int j = 0; j < n; ++j)
                children[a.substr(0, 2 * j + 1)].insert(a[2 * j + 1]);
        for (const auto& [prefix, xs] : children)
            CHECK(xs.size() == 1);
        if (n > 1) {
            const auto parent = sample_g(n - 1, seed);
            std::set<std::string> prefixes;
            for (const auto& a : s.addresses)
                prefixes.insert(a.substr(0, 2 * (n - 1)));
            CHECK(prefixes == std::set<std::string>(parent.addresses.begin(), parent.addresses.end()));
        }
    }
    CHECK(sample_g(4, 7).addresses == sample_g(4, 7).addresses);
    CHECK(sample_g(4, 7).addresses != sample_g(4, 8).addresses);
    CHECK_THROWS_AS(sample_g(12, 0), BudgetExceeded);
}

TEST_CASE("favard of samples")
{
    CHECK(favard_of_sample(sample_g(0, 3)) == doctest::Approx(4 / std::numbers::pi).epsilon(1e-5));
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const double f = favard_of_sample(sample_g(1, seed));
        CHECK(f > 0);
        CHECK(f < 4 / std::numbers::pi);
    }
    const auto s = sample_g(2, 11);
    const double a = favard_of_sample(s);
    CHECK(std::abs(favard_of_sample(sample_g(2, 11)) - a) <= 1e-12);
    CHECK(std::abs(favard_of_sample(s, kDefaultAngles, kernels::Exec::serial) - a) <= 1e-12);
}

TEST_CASE("Monte Carlo expectation")
{
    const auto r = mc_expectation(1, 100, 5);
    CHECK(r.mean_favard > 0);
    CHECK(r.mean_favard < 4 / std::numbers::pi);
    CHECK(r.stderr_favard > 0);
    const auto again = mc_expectation(1, 100, 5, kDefaultAngles, kernels::Exec::serial);
    CHECK(again.values == r.values);
    CHECK(again.mean_favard == r.mean_favard);
    CHECK_THROWS_AS(mc_expectation(1, 1, 5), InvalidArgument);

    const auto small = mc_expectation(2, 200, 9);
    const auto large = mc_expectation(2, 400, 9);
    const double ratio = small.stderr_favard / large.stderr_favard;
    CHECK(ratio > 1.2);
    CHECK(ratio < 1.8);
}

TEST_CASE("essential squares")
{
    const auto s1 = sample_g(1, 4);
    CHECK(essential_stats(s1, 0.1).essential == 0);
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const auto s = sample_g(8, seed);
        const auto e = essential_stats(s, 0.1);
        CHECK(e.essential + e.nonessential == 65536);
        CHECK(BigInt(e.nonessential) <= nonessential_bound(8, 0.1));
    }
    const auto s5 = sample_g(5, 3);
    const auto e = essential_stats(s5, 1e-6);
    std::int64_t all_present = 0;
    for (const auto& a : s5.addresses) {
        std::set<char> g;
        for (std::size_t i = 0; i < a.size(); i += 2)
            g.insert(a[i]);
        all_present += g.size() == 4;
    }
    CHECK(e.essential == all_present);
    CHECK_THROWS_AS(essential_stats(s5, 0), InvalidArgument);
}

TEST_CASE("nonessential bound")
{
    CHECK(nonessential_bound(4, 0.1) == 324);
    CHECK(nonessential_bound(5, 0.1) == 4 * 243);
    for (int n = 0; n <= 24; ++n)
        for (double delta : {0.05, 0.1, 0.15, 0.3, 0.5})
            CHECK(nonessential_bound(n, delta).str() == gmp_bound(n, delta).get_str());
    double prev = 2;
    for (int n = 8; n <= 16; ++n) {
        const double ratio = nonessential_bound(n, 0.05).convert_to<double>() / std::pow(4.0, n);
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("line hits")
{
    const double t = 1 / std::numbers::sqrt2;
    const auto none = line_hit_stats(sample_g(1, 2), t, 100);
    CHECK_FALSE(none.mean_hits.has_value());
    CHECK(none.essential_squares == 0);

    CHECK(line_hit_stats(sample_g(3, 2), 0.0, 10).exceptional);
    CHECK(line_hit_stats(sample_g(3, 2), 0.5, 10).exceptional);
    CHECK_FALSE(line_hit_stats(sample_g(3, 2), t, 10).exceptional);

    // brute force count on a few lines
    const auto s = sample_g(4, 21);
    const auto origins = s.origins();
    const double side = s.side();
    const auto r = line_hit_stats(s, t, 1, 0.15, 5);
    REQUIRE(r.mean_hits.has_value());
    CHECK(*r.mean_hits >= 1);
    for (double c : {-0.3, 0.01, 0.2, 0.45}) {
        int direct = 0;
        for (const auto& z : origins) {
            const double y0 = t * z.real() + c, y1 = t * (z.real() + side) + c;
            direct += y1 >= z.imag() && y0 <= z.imag() + side;
        }
        // the projection y - t x of a cell covers [b - t(a + s), b + s - t a]
        int sweep = 0;
        for (const auto& z : origins) {
            const double lo = z.imag() - t * (z.real() + side);
            sweep += lo <= c && c <= lo + side * (1 + t);
        }
        CHECK(direct == sweep);
    }

    double total = 0, var = 0;
    int samples = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto h = line_hit_stats(sample_g(6, seed), t, 2000, 0.15, seed);
        REQUIRE(h.mean_hits.has_value());
        total += *h.mean_hits;
        var += h.stderr_hits * h.stderr_hits;
        ++samples;
    }
    const double mean = total / samples;
    CHECK(mean >= 0.15 * 6 / 2 - 2 * std::sqrt(var) / samples);
}
