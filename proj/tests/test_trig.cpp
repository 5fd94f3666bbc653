#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "buffon/errors.hpp"
#include "buffon/trig.hpp"

using namespace buffon;
using namespace buffon::trig;
using sets::ProductSpec;

namespace {

ProductSpec product(const char* name) { return std::get<ProductSpec>(sets::named_spec(name)); }

const std::vector<int> kCorner{0, 3};
const std::vector<int> kSlv{0, 3, 4, 8, 9};

} // namespace

TEST_CASE("phi values")
{
    CHECK(std::abs(phi(kCorner, 0) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(phi(kCorner, 1.0 / 6)) < 1e-15);
    CHECK(std::abs(phi(kSlv, 1.0 / 12)) < 1e-15);
}

TEST_CASE("phi is bounded and 1-periodic")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng);
        CHECK(std::abs(phi(kSlv, x)) <= 1 + 1e-15);
        CHECK(std::abs(phi(kSlv, x + 1) - phi(kSlv, x)) < 1e-12);
    }
}

TEST_CASE("product evaluator basics")
{
    ProductEvaluator pe{product("fig4"), 0.7, 1, 4};
    CHECK(std::abs(pe(0) - Complex(1, 0)) < 1e-15);
    ProductEvaluator flat{product("fourcorner"), 0.0, 1, 3};
    for (double x : {0.1, 0.23, 0.77}) {
        Complex want{1, 0};
        for (int j = 1; j <= 3; ++j)
            want *= phi(kCorner, std::pow(4.0, j) * x);
        CHECK(std::abs(flat(x) - want) < 1e-13);
    }
    ProductEvaluator empty{product("fourcorner"), 0.3, 3, 2};
    CHECK(empty(0.4) == Complex(1, 0));
}

TEST_CASE("conjugate symmetry")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    ProductEvaluator pe{product("slv25"), 0.61, 1, 3};
    for (int k = 0; k < 200; ++k) {
        const double x = u(rng);
        CHECK(std::abs(pe(-x) - std::conj(pe(x))) < 1e-10);
    }
}

TEST_CASE("four-corner P2 vanishes on the telescoping progression")
{
    ProductEvaluator pe{product("fourcorner"), 2.0, 1, 2};
    CHECK(std::abs(eval_product(pe, 1.0 / 48)) < 1e-14);
}

TEST_CASE("four-corner P2 equals the telescoped closed form")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int m = 1; m <= 4; ++m) {
        ProductEvaluator pe{product("fourcorner"), 2.0, 1, m};
        const double K = 3 * std::pow(4.0, m + 1);
        int checked = 0;
        for (int k = 0; k < 10000; ++k) {
            const double x = u(rng);
            const double den = std::abs(std::sin(std::numbers::pi * 12 * x));
            if (den < 1e-3)
                continue;
            const double closed = std::pow(4.0, -m) * std::abs(std::sin(std::numbers::pi * K * x)) / den;
            CHECK(std::abs(pe(x)) == doctest::Approx(closed).epsilon(1e-10));
            ++checked;
        }
        CHECK(checked > 9000);
    }
}

TEST_CASE("Salem integral")
{
    auto four = product("fourcorner");
    CHECK(salem_integral(four, 0.4, 3, 3).integral.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(salem_integral(four, 0.0, 0, 1).integral.value == doctest::Approx(0.5).epsilon(1e-12));
    auto r = salem_integral(four, 1.0 / 3, 1, 3);
    CHECK(r.holds);
    CHECK(r.lower_bound == doctest::Approx(1.0 / 64));
    CHECK_THROWS_AS(salem_integral(four, 0.3, 1, 3, 10), InvalidArgument);
}

TEST_CASE("Salem lower bound on a test matrix")
{
    for (auto name : {"fourcorner", "fig4"})
        for (double t : {0.0, 0.29, 0.5, 1.0, 1.7})
            for (int n = 1; n <= 4; ++n)
                for (int m = 0; m < n; ++m)
                    CHECK(salem_integral(product(name), t, m, n).holds);
}

TEST_CASE("Poisson integral")
{
    auto four = product("fourcorner");
    auto full = poisson_integral(four, 0.5, 2, 2, 2.0);
    CHECK(full.integral.value == doctest::Approx(1.0 / 16).epsilon(1e-13));
    auto sub = poisson_integral(four, 0.5, 1, 4, 2.0);
    CHECK(sub.integral.value <= salem_integral(four, 0.5, 1, 4).integral.value);
    CHECK(sub.integral.value > 0);
    CHECK(sub.reference == doctest::Approx(2.0 / 256));
    auto a = poisson_integral(four, 1.0 / 3, 2, 5, 2.0);
    auto b = poisson_integral(four, 1.0 / 3, 2, 5, 2.0, 2 * a.integral.grid);
    CHECK(std::abs(a.integral.value - b.integral.value) < 1e-3 * b.integral.value);
}

TEST_CASE("exp dichotomy examples")
{
    auto r0 = exp_dichot(kCorner, 2, 2, 0.3, 4);
    CHECK(r0.closed_form == doctest::Approx(1.0 / 16));
    CHECK(r0.quadrature == doctest::Approx(1.0 / 16).epsilon(1e-12));
    auto r1 = exp_dichot(kCorner, 0, 1, 0.123, 4);
    CHECK(r1.closed_form == 2);
    CHECK(r1.relative_error < 1e-10);
    const std::vector<int> fig{0, 2, 5};
    auto r2 = exp_dichot(fig, 1, 3, 0.37, 6);
    CHECK(r2.closed_form == doctest::Approx(1.5));
    CHECK(r2.relative_error < 1e-10);
}

TEST_CASE("exp dichotomy closed form matches quadrature")
{
    struct Case {
        std::vector<int> A;
        int L;
    };
    const std::vector<Case> cases{{{0, 3}, 4}, {{0, 2, 5}, 6}, {{0, 3, 4, 8, 9}, 25}};
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    for (const auto& c : cases)
        for (int m1 = 0; m1 <= 1; ++m1)
            for (int d = 0; d <= 3; ++d)
                for (int k = 0; k < 2; ++k)
                    CHECK(exp_dichot(c.A, m1, m1 + d, u(rng), c.L).relative_error < 1e-8);
}

TEST_CASE("main estimate")
{
    auto four = product("fourcorner");
    AnalysisParams p;
    p.N = 8;
    p.n = 4;
    p.m = 1;
    p.K = 2;
    auto a = main_estimate(four, 1.0 / 3, p);
    CHECK(a.integral.value > 0);
    auto b = main_estimate(four, 1.0 / 3, p, 1, 1, 2 * a.integral.grid);
    CHECK(std::abs(a.integral.value - b.integral.value) < 1e-3 * b.integral.value);
    // [L^{-m}, 1] and [0, L^{-m}] add up to the whole period.
    ProductEvaluator pe{four, 1.0 / 3, 1, 4};
    auto whole = integrate_abs2(pe, 0, 1);
    auto head = integrate_abs2(pe, 0, 0.25);
    CHECK(a.integral.value + head.value == doctest::Approx(whole.value).epsilon(1e-6));

    AnalysisParams bad = p;
    bad.m = 4;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = p;
    bad.K = 1;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = p;
    bad.N = 40;
    CHECK_THROWS_AS(bad.validate(true), InvalidArgument);
}

TEST_CASE("tiling direction concentrates mass near zero")
{
    // For t = 1/2 the projection is an interval and f is nearly flat, so little mass lies away from 0.
    auto four = product("fourcorner");
    AnalysisParams p;
    p.N = 10;
    p.n = 5;
    p.m = 1;
    auto tile = main_estimate(four, 0.5, p).integral.value;
    auto generic = main_estimate(four, 0.0, p).integral.value;
    CHECK(tile < 0.1 * generic);
}

TEST_CASE("psi and K")
{
    CHECK(psi(4, 3, 1, PsiMode::power) == doctest::Approx(1.0 / 64));
    CHECK(psi(25, 1, 1, PsiMode::power_log) == 1);
    CHECK(psi(25, 3, 1, PsiMode::power_log) == doctest::Approx(std::pow(25.0, -3 * std::log(3.0))));
    CHECK(parse_psi_mode("power-log") == PsiMode::power_log);
    CHECK_THROWS_AS(parse_psi_mode("cubic"), InvalidArgument);
    CHECK(default_K(1000, 0.1, false) == doctest::Approx(std::pow(1000.0, 0.1)));
    CHECK(default_K(1000, 0.1, true) < default_K(1000, 0.1, false));
}

TEST_CASE("fhat")
{
    auto four = product("fourcorner");
    CHECK(std::abs(fhat(four, 3, 0.4, 0, project::Kernel::box) - Complex(1, 0)) < 1e-15);
    // t = 0: the digit factors are periodic in L^n, so |fhat| at L^n k is the kernel alone.
    for (int k = 1; k <= 4; ++k) {
        const double xi = 64.0 * k + 0.5 * 64;
        CHECK(std::abs(fhat(four, 3, 0, xi, project::Kernel::box)) <=
              std::abs(fhat(four, 3, 0, xi - 64 * k + 64 * (k - 1), project::Kernel::box)) + 1e-12);
    }
}

TEST_CASE("Parseval bridge to the piecewise-exact norm")
{
    for (auto name : {"fourcorner", "fig4"})
        for (double t : {0.5, 1.0 / 3, -0.7})
            for (int n = 1; n <= 2; ++n) {
                const auto spec = product(name);
                const double exact = project::lp_norm(counting_function(spec, n, t, project::Kernel::trapezoid), 2);
                const double numeric = parseval_integral(spec, n, t, project::Kernel::trapezoid);
                CHECK(numeric == doctest::Approx(exact).epsilon(1e-4));
            }
}
