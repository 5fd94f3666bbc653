#include <doctest.h>

#include <algorithm>
#include <set>

#include "buffon/errors.hpp"
#include "buffon/sets.hpp"

using namespace buffon;
using namespace buffon::sets;

TEST_CASE("product spec validation")
{
    auto four = make_product_spec(4, {3, 0}, {0, 3});
    CHECK(four.A == std::vector<int>{0, 3});
    CHECK_NOTHROW(make_product_spec(6, {0, 2, 5}, {0, 3}));
    CHECK_THROWS_AS(make_product_spec(4, {0, 1, 2}, {0, 3}), InvalidArgument);
    CHECK_THROWS_AS(make_product_spec(4, {0, 4}, {0, 3}), InvalidArgument);
    CHECK_THROWS_AS(make_product_spec(4, {0}, {0, 1, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(make_product_spec(4, {0, 0}, {0, 3}), InvalidArgument);
    CHECK_THROWS_AS(make_product_spec(3, {0, 1}, {0, 1}), InvalidArgument);
}

TEST_CASE("self-similar spec validation")
{
    CHECK_THROWS_AS(make_self_similar_spec(3, {{0, 0}, {0.5, 0}, {1, 0}}), InvalidArgument);
    CHECK_THROWS_AS(make_self_similar_spec(3, {{0, 0}, {0, 0}, {1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(make_self_similar_spec(3, {{0, 0}, {1, 0}}), InvalidArgument);
    CHECK_NOTHROW(make_self_similar_spec(3, {{0, 0}, {0.5, 0}, {0, 0.5}}));
}

TEST_CASE("four-corner first iteration")
{
    auto it = iterate(named_spec("fourcorner"), 1);
    REQUIRE(it.size() == 4);
    std::set<std::pair<Rational, Rational>> got;
    for (std::size_t i = 0; i < it.size(); ++i)
        got.insert(it.exact_origin(i));
    std::set<std::pair<Rational, Rational>> want{{0, 0},
                                                  {make_rational(3, 4), 0},
                                                  {0, make_rational(3, 4)},
                                                  {make_rational(3, 4), make_rational(3, 4)}};
    CHECK(got == want);
    CHECK(it.scale() == make_rational(1, 4));
}

TEST_CASE("n = 0 is the unit cell")
{
    for (auto name : {"fourcorner", "gasket", "fig4"}) {
        auto it = iterate(named_spec(name), 0);
        CHECK(it.size() == 1);
        CHECK(it.origins()[0] == Complex{0, 0});
        CHECK(it.scale_double() == 1.0);
    }
}

TEST_CASE("four-corner n = 3 against brute-force digit sums")
{
    auto it = iterate(named_spec("fourcorner"), 3);
    CHECK(it.size() == 64);
    std::set<std::int64_t> axis;
    for (int a : {0, 3})
        for (int b : {0, 3})
            for (int c : {0, 3})
                axis.insert(16 * a + 4 * b + c);
    for (const auto& [X, Y] : it.exact_origins()) {
        CHECK(axis.count(X) == 1);
        CHECK(axis.count(Y) == 1);
    }
}

TEST_CASE("digit points")
{
    auto four = std::get<ProductSpec>(named_spec("fourcorner"));
    auto [A1, B1] = digit_points(four, 1);
    CHECK(A1 == std::vector<Rational>{0, make_rational(3, 4)});
    auto [A2, B2] = digit_points(four, 2);
    CHECK(A2 == std::vector<Rational>{0, make_rational(3, 16), make_rational(3, 4), make_rational(15, 16)});
    auto fig4 = std::get<ProductSpec>(named_spec("fig4"));
    auto [F1, G1] = digit_points(fig4, 1);
    CHECK(F1 == std::vector<Rational>{0, make_rational(1, 3), make_rational(5, 6)});
    CHECK_THROWS_AS(digit_points(four, 0), InvalidArgument);
}

TEST_CASE("digit points lie in [0,1) and are injective")
{
    for (auto name : {"fourcorner", "fig4", "slv25"}) {
        auto spec = std::get<ProductSpec>(named_spec(name));
        for (int n = 1; n <= 3; ++n) {
            auto [A, B] = digit_points(spec, n);
            CHECK(A.size() == static_cast<std::size_t>(std::pow(spec.A.size(), n)));
            CHECK(std::adjacent_find(A.begin(), A.end()) == A.end());
            CHECK(A.front() >= 0);
            CHECK(A.back() < 1);
        }
    }
}

TEST_CASE("cell counts")
{
    for (auto name : {"fourcorner", "gasket", "fig4"})
        for (int n = 0; n <= 4; ++n) {
            auto spec = named_spec(name);
            CHECK(iterate(spec, n).size() == static_cast<std::size_t>(std::pow(num_maps(spec), n)));
        }
}

TEST_CASE("nesting: every cell of E_{n+1} lies in exactly one cell of E_n")
{
    for (auto name : {"fourcorner", "fig4", "gasket"}) {
        auto spec = named_spec(name);
        for (int n = 0; n < 4; ++n) {
            auto coarse = iterate(spec, n);
            auto fine = iterate(spec, n + 1);
            for (std::size_t i = 0; i < fine.size(); ++i) {
                int owners = 0;
                auto poly = fine.cell_polygon(i);
                for (std::size_t k = 0; k < coarse.size(); ++k) {
                    auto outer = coarse.cell_polygon(k);
                    bool inside = true;
                    for (auto p : poly)
                        for (std::size_t e = 0; e < outer.size() && inside; ++e) {
                            Complex a = outer[e], b = outer[(e + 1) % outer.size()];
                            double cr = (b - a).real() * (p - a).imag() - (b - a).imag() * (p - a).real();
                            inside = cr >= -1e-12;
                        }
                    owners += inside;
                }
                CHECK(owners == 1);
            }
        }
    }
}

TEST_CASE("budget")
{
    CHECK_THROWS_AS(iterate(named_spec("slv25"), 5), BudgetExceeded);
    CHECK_NOTHROW(iterate(named_spec("fourcorner"), 3, 64));
    CHECK_THROWS_AS(iterate(named_spec("fourcorner"), 4, 64), BudgetExceeded);
}

TEST_CASE("first level disjointness heuristic")
{
    for (auto name : {"fourcorner", "gasket", "fig4", "slv25", "baker25"})
        CHECK(first_level_cells_disjoint(named_spec(name)));
    auto overlapping = make_self_similar_spec(3, {{0, 0}, {0.1, 0}, {0, 0.5}});
    CHECK_FALSE(first_level_cells_disjoint(overlapping));
}
