#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "buffon/errors.hpp"
#include "buffon/project.hpp"

using namespace buffon;
using namespace buffon::project;
using sets::ProductSpec;

namespace {

ProductSpec product(const char* name) { return std::get<ProductSpec>(sets::named_spec(name)); }

// Independent oracle for the box kernel: ||f||_2^2 = sum over pairs of cell-interval overlaps.
Rational box_l2_pairwise(const ProductSpec& spec, int n, const Rational& t)
{
    auto [A, B] = sets::digit_points(spec, n);
    const Rational ell(BigInt(1), BigInt(checked_pow(spec.L, n)));
    std::vector<Rational> s;
    for (const auto& a : A)
        for (const auto& b : B)
            s.push_back(a + t * b);
    Rational total = 0;
    for (const auto& x : s)
        for (const auto& y : s) {
            Rational d = x > y ? Rational(x - y) : Rational(y - x);
            if (d < ell)
                total += ell - d;
        }
    return total;
}

// Density of x + t y for (x, y) uniform on [0, l]^2, evaluated pointwise.
double trapezoid_at(double x, double t, double l)
{
    const double lo = std::min(0.0, t) * l;
    const double hi = lo + (1 + std::abs(t)) * l;
    if (x <= lo || x >= hi)
        return 0;
    if (t == 0)
        return 1;
    // Length of {y in [0,l]: 0 <= x - t y <= l} divided by l^2, times l for unit-mass-per-cell scaling.
    double y0 = (x - l) / t, y1 = x / t;
    if (y0 > y1)
        std::swap(y0, y1);
    const double len = std::max(0.0, std::min(l, y1) - std::max(0.0, y0));
    return len / l;
}

} // namespace

TEST_CASE("axis projection of the four-corner set")
{
    auto it = sets::iterate(sets::named_spec("fourcorner"), 2);
    CHECK(project_iteration(it, Rational(0)).measure() == make_rational(1, 4));
}

TEST_CASE("unit square projection")
{
    auto it = sets::iterate(sets::named_spec("fourcorner"), 0);
    auto u = project_iteration(it, make_rational(1, 2));
    CHECK(u.measure() == make_rational(3, 2));
    CHECK(std::abs(project_iteration(it, 0.5).measure() - 1.5) < 1e-15);
}

TEST_CASE("four-corner n = 1, t = 1/2 projects onto one interval")
{
    auto it = sets::iterate(sets::named_spec("fourcorner"), 1);
    auto u = project_iteration(it, make_rational(1, 2)).to_rational();
    REQUIRE(u.size() == 1);
    CHECK(u.pieces()[0].left == 0);
    CHECK(u.pieces()[0].right == make_rational(3, 2));
}

TEST_CASE("sweep projection agrees with the pairwise-merge oracle")
{
    const std::vector<Rational> slopes{0, make_rational(1, 2), make_rational(1, 3), make_rational(-2, 5),
                                       make_rational(7, 3), 2, make_rational(-1, 1)};
    for (auto name : {"fourcorner", "fig4", "slv25"})
        for (int n = 0; n <= 3; ++n) {
            if (std::string(name) == "slv25" && n > 2)
                continue;
            auto it = sets::iterate(sets::named_spec(name), n);
            for (const auto& t : slopes) {
                auto a = project_iteration(it, t);
                auto b = project_iteration_pairwise(it, t);
                CHECK(a.denominator == b.denominator);
                CHECK(a.numerators == b.numerators);
            }
        }
}

TEST_CASE("floating projection matches the exact one")
{
    auto it = sets::iterate(sets::named_spec("fig4"), 3);
    for (const auto& t : {make_rational(1, 3), make_rational(-5, 7)}) {
        const double exact = to_double(project_iteration(it, t).measure());
        CHECK(std::abs(project_iteration(it, to_double(t)).measure() - exact) < 1e-12);
    }
}

TEST_CASE("projection measure is monotone in n")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> slope(-3, 3);
    for (auto name : {"fourcorner", "fig4", "gasket"})
        for (int k = 0; k < 10; ++k) {
            const double t = slope(rng);
            double prev = 1e9;
            for (int n = 0; n <= 5; ++n) {
                const double m = project_iteration(sets::iterate(sets::named_spec(name), n), t).measure();
                CHECK(m <= prev + 1e-12);
                prev = m;
            }
        }
}

TEST_CASE("counting function examples")
{
    auto four = product("fourcorner");
    auto f0 = counting_function(four, 0, Rational(0), Kernel::box);
    CHECK(f0.evaluate(make_rational(1, 2)) == 1);
    CHECK(f0.support() == IntervalUnion<Rational>::single(0, 1));
    CHECK(lp_norm(f0, 2) == 1);

    auto f1 = counting_function(four, 1, Rational(0), Kernel::box);
    CHECK(f1.evaluate(make_rational(1, 8)) == 2);
    CHECK(f1.evaluate(make_rational(7, 8)) == 2);
    CHECK(f1.evaluate(make_rational(1, 2)) == 0);
    CHECK(f1.support() == IntervalUnion<Rational>::from_unsorted({{0, make_rational(1, 4)}, {make_rational(3, 4), 1}}));
    CHECK(lp_norm(f1, 2) == 2);
    CHECK(lp_norm(f1, 1) == 1);
}

TEST_CASE("exact L2 norm agrees with the pairwise-overlap oracle")
{
    for (auto name : {"fourcorner", "fig4"})
        for (int n = 1; n <= 3; ++n)
            for (const auto& t : {Rational(0), make_rational(1, 2), make_rational(2, 3), make_rational(-3, 4)}) {
                auto f = counting_function(product(name), n, t, Kernel::box);
                CHECK(lp_norm(f, 2) == box_l2_pairwise(product(name), n, t));
            }
}

TEST_CASE("four-corner t = 1/2 norms stay bounded")
{
    for (auto kernel : {Kernel::box, Kernel::trapezoid})
        for (int n = 1; n <= 4; ++n) {
            auto v = lp_norm(counting_function(product("fourcorner"), n, make_rational(1, 2), kernel), 2);
            CHECK(v >= make_rational(2, 3));
            CHECK(v <= 1);
        }
}

TEST_CASE("trapezoid density matches a pointwise sum over cells")
{
    auto spec = product("fig4");
    std::mt19937_64 rng(3);
    for (double t : {0.37, -1.6, 2.0}) {
        const int n = 2;
        auto f = counting_function(spec, n, t, Kernel::trapezoid);
        auto [A, B] = sets::digit_points(spec, n);
        const double l = std::pow(6.0, -n);
        auto range = f.support();
        std::uniform_real_distribution<double> xs(range.pieces().front().left, range.pieces().back().right);
        for (int k = 0; k < 200; ++k) {
            const double x = xs(rng);
            double want = 0;
            for (const auto& a : A)
                for (const auto& b : B)
                    want += trapezoid_at(x - to_double(a) - t * to_double(b), t, l);
            CHECK(f.evaluate(x) == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("exact and floating counting functions agree")
{
    auto spec = product("fourcorner");
    for (auto kernel : {Kernel::box, Kernel::trapezoid}) {
        auto fe = counting_function(spec, 3, make_rational(2, 7), kernel);
        auto fd = counting_function(spec, 3, 2.0 / 7, kernel);
        CHECK(to_double(lp_norm(fe, 2)) == doctest::Approx(lp_norm(fd, 2)).epsilon(1e-10));
        CHECK(lp_norm(fe, 1) == 1);
    }
}

TEST_CASE("Holder examples")
{
    auto four = product("fourcorner");
    auto it0 = sets::iterate(sets::named_spec("fourcorner"), 0);
    CHECK(holder_check(counting_function(four, 0, Rational(0), Kernel::box),
                       project_iteration(it0, Rational(0)).to_rational()));
    auto it2 = sets::iterate(sets::named_spec("fourcorner"), 2);
    auto f = counting_function(four, 2, Rational(0), Kernel::box);
    CHECK(lp_norm(f, 2) == 4);
    CHECK(holder_check(f, project_iteration(it2, Rational(0)).to_rational()));
    // Support too small.
    CHECK_THROWS_AS(holder_check(f, IntervalUnion<Rational>::single(0, make_rational(1, 8))), InvalidArgument);
}

TEST_CASE("randomized norm identities")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9), level(0, 4);
    const char* names[] = {"fourcorner", "fig4"};
    int cases = 0;
    for (int k = 0; k < 60; ++k) {
        const auto spec = product(names[k % 2]);
        const int n = level(rng);
        const Rational t = make_rational(num(rng), den(rng));
        const auto kernel = k % 3 == 0 ? Kernel::trapezoid : Kernel::box;
        auto f = counting_function(spec, n, t, kernel);
        CHECK(lp_norm(f, 1) == 1);
        auto it = sets::iterate(spec, n);
        CHECK(holder_check(f, project_iteration(it, t).to_rational()));

        const double td = to_double(t) + 1e-3;
        auto g = counting_function(spec, n, td, kernel);
        CHECK(std::abs(lp_norm(g, 1) - 1) < 1e-10);
        CHECK(holder_check(g, project_iteration(it, td)).holds);
        cases += 2;
    }
    CHECK(cases >= 100);
}

TEST_CASE("kernel names")
{
    CHECK(parse_kernel("box") == Kernel::box);
    CHECK(parse_kernel(to_string(Kernel::trapezoid)) == Kernel::trapezoid);
    CHECK_THROWS_AS(parse_kernel("gauss"), InvalidArgument);
}

TEST_CASE("Favard length of the unit square")
{
    auto r = favard(sets::named_spec("fourcorner"), 0, 512);
    CHECK(r.favard_estimate == doctest::Approx(4 / std::numbers::pi).epsilon(1e-5));
    CHECK(r.richardson == doctest::Approx(4 / std::numbers::pi).epsilon(1e-9));
    CHECK(r.slope_integral == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(r.angle_values.size() == 512);
    CHECK_THROWS_AS(favard(sets::named_spec("fourcorner"), 0, 1), InvalidArgument);
}

TEST_CASE("Favard length decreases for the four-corner set")
{
    double prev = 10;
    for (int n = 1; n <= 6; ++n) {
        double v = favard(sets::named_spec("fourcorner"), n, 256).favard_estimate;
        CHECK(v < prev);
        CHECK(n * v > 0.5);
        prev = v;
    }
}

TEST_CASE("serial and parallel Favard agree")
{
    for (auto name : {"fourcorner", "gasket"}) {
        auto a = favard(sets::named_spec(name), 4, 128, kernels::Exec::serial);
        auto b = favard(sets::named_spec(name), 4, 128, kernels::Exec::parallel);
        CHECK(a.favard_estimate == b.favard_estimate);
        CHECK(a.slope_integral == b.slope_integral);
    }
}

TEST_CASE("bad set membership")
{
    auto four = product("fourcorner");
    CHECK(in_bad_set(four, 0.5, 4, 2.0));
    CHECK_FALSE(in_bad_set(four, 0.0, 4, 2.0));
}
