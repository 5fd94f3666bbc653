#include "buffon/trig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "buffon/errors.hpp"

namespace buffon::trig {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

inline long double frac(long double x) { return x - std::floor(x); }

inline Complex unit(long double turns)
{
    const double a = kTwoPi * static_cast<double>(frac(turns));
    return {std::cos(a), std::sin(a)};
}

// (1 - e^{-2 pi i z}) / (2 pi i z) = e^{-i pi z} sin(pi z) / (pi z)
Complex box_hat(double z)
{
    const double x = std::numbers::pi * z;
    const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6 : std::sin(x) / x;
    return std::polar(sinc, -x);
}

int max_digit(const std::vector<int>& d) { return *std::max_element(d.begin(), d.end()); }

} // namespace

Complex phi_long(std::span<const int> digits, long double xi)
{
    require(!digits.empty(), "empty digit set");
    const long double base = frac(xi);
    Complex s{0, 0};
    for (int a : digits)
        s += unit(base * a);
    return s / static_cast<double>(digits.size());
}

Complex phi(std::span<const int> digits, double xi) { return phi_long(digits, xi); }

Complex ProductEvaluator::operator()(double xi) const
{
    Complex p{1, 0};
    long double x = xi * std::pow(static_cast<long double>(spec.L), j_lo);
    for (int j = j_lo; j <= j_hi; ++j) {
        p *= phi_long(spec.A, x);
        if (t != 0)
            p *= phi_long(spec.B, static_cast<long double>(t) * x);
        x *= spec.L;
    }
    return p;
}

double ProductEvaluator::abs2(double xi) const { return std::norm((*this)(xi)); }

double ProductEvaluator::bandwidth() const
{
    double total = 0;
    for (int j = j_lo; j <= j_hi; ++j)
        total += std::pow(double(spec.L), j) * (max_digit(spec.A) + std::abs(t) * max_digit(spec.B));
    return total;
}

Complex eval_product(const ProductEvaluator& pe, double xi) { return pe(xi); }

std::int64_t min_grid(const ProductEvaluator& pe, double length)
{
    const double top = pe.j_hi >= pe.j_lo ? std::pow(double(pe.spec.L), pe.j_hi) : 1.0;
    return std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(16 * top * length)));
}

Quadrature integrate_abs2(const ProductEvaluator& pe, double lower, double upper, std::int64_t grid,
                          kernels::Exec exec)
{
    require(lower <= upper, "integration bounds reversed");
    const double length = upper - lower;
    const std::int64_t need = min_grid(pe, length);
    if (grid == 0)
        grid = 8 * need;
    if (grid < need)
        throw InvalidArgument("under-resolved grid: " + std::to_string(grid) + " < " + std::to_string(need));
    Quadrature q;
    q.grid = grid;
    q.lower = lower;
    q.upper = upper;
    if (length == 0)
        return q;
    auto f = [&pe](double x) { return pe.abs2(x); };
    const double h = length / static_cast<double>(grid);
    q.fine = kernels::midpoint_sum(exec, f, lower, h, grid) * h;
    const std::int64_t half = grid / 2;
    const double H = length / static_cast<double>(half);
    q.coarse = kernels::midpoint_sum(exec, f, lower, H, half) * H;
    q.value = (4 * q.fine - q.coarse) / 3;
    return q;
}

SalemResult salem_integral(const sets::ProductSpec& spec, double t, int m, int n, std::int64_t grid,
                           kernels::Exec exec)
{
    require(0 <= m && m <= n, "need 0 <= m <= n");
    ProductEvaluator pe{spec, t, m + 1, n};
    SalemResult r;
    r.integral = integrate_abs2(pe, 0.0, 1.0, grid, exec);
    r.lower_bound = std::pow(double(spec.L), m - n) / 4;
    r.holds = r.integral.value >= r.lower_bound * (1 - 1e-9);
    return r;
}

PoissonResult poisson_integral(const sets::ProductSpec& spec, double t, int m, int n, double K,
                               std::int64_t grid, kernels::Exec exec)
{
    require(0 <= m && m <= n, "need 0 <= m <= n");
    ProductEvaluator pe{spec, t, m + 1, n};
    PoissonResult r;
    r.integral = integrate_abs2(pe, 0.0, std::pow(double(spec.L), -m), grid, exec);
    r.reference = K * std::pow(double(spec.L), -n);
    r.ratio = r.integral.value / r.reference;
    return r;
}

ExpDichotResult exp_dichot(std::span<const int> digits, int m1, int m2, double xi0, int L, kernels::Exec exec)
{
    require(0 <= m1 && m1 <= m2, "need 0 <= m1 <= m2");
    require(L >= 2, "L must be >= 2");
    require(!digits.empty(), "empty digit set");
    for (int a : digits)
        require(0 <= a && a < L, "digits must lie in [0, L)");
    const int levels = m2 - m1;

    ExpDichotResult r;
    r.closed_form = std::pow(double(digits.size()), levels) * std::pow(double(L), -m1);

    // Frequencies in u reach max(A) * sum_k L^{k - m1}; |.|^2 doubles nothing beyond that span.
    double top = 0;
    for (int k = m1 + 1; k <= m2; ++k)
        top += *std::max_element(digits.begin(), digits.end()) * std::pow(double(L), k - m1);
    std::int64_t M = 64;
    while (M <= 2 * top + 2)
        M *= 2;
    r.grid = M;

    std::vector<long double> shift; // frac(a L^k xi0), row-major over (k, a)
    std::vector<long double> freq;  // a L^{k - m1}
    for (int k = m1 + 1; k <= m2; ++k)
        for (int a : digits) {
            shift.push_back(frac(static_cast<long double>(a) * std::pow(static_cast<long double>(L), k) * xi0));
            freq.push_back(static_cast<long double>(a) * std::pow(static_cast<long double>(L), k - m1));
        }
    const std::size_t width = digits.size();
    auto f = [&](double u) {
        Complex p{1, 0};
        for (int lev = 0; lev < levels; ++lev) {
            Complex s{0, 0};
            for (std::size_t i = 0; i < width; ++i) {
                const std::size_t idx = static_cast<std::size_t>(lev) * width + i;
                s += unit(shift[idx] + freq[idx] * u);
            }
            p *= s;
        }
        return std::norm(p);
    };
    const double h = 1.0 / static_cast<double>(M);
    r.quadrature = kernels::midpoint_sum(exec, f, 0.0, h, M) * h * std::pow(double(L), -m1);
    r.relative_error = std::abs(r.quadrature - r.closed_form) / r.closed_form;
    return r;
}

PsiMode parse_psi_mode(std::string_view s)
{
    if (s == "power")
        return PsiMode::power;
    if (s == "power-log" || s == "power_log")
        return PsiMode::power_log;
    throw InvalidArgument("psi mode must be power or power-log");
}

const char* to_string(PsiMode m) { return m == PsiMode::power ? "power" : "power-log"; }

double psi(int L, int m, double c1, PsiMode mode)
{
    require(m >= 0, "m must be nonnegative");
    const double e = mode == PsiMode::power ? c1 * m : c1 * m * std::log(std::max(m, 1));
    return std::pow(double(L), -e);
}

double default_K(int N, double eps0, bool has_noncyclotomic_roots)
{
    require(N >= 2, "N must be >= 2");
    require(eps0 > 0, "eps0 must be positive");
    if (!has_noncyclotomic_roots)
        return std::pow(double(N), eps0);
    const double ll = std::log(std::log(double(N)));
    return std::pow(double(N), ll > 1 ? eps0 / ll : eps0);
}

void AnalysisParams::validate(bool strict) const
{
    require(n >= 1, "n must be >= 1");
    require(0 <= m && m < n, "need 0 <= m < n");
    require(K > 1, "K must exceed 1");
    require(eps0 > 0, "eps0 must be positive");
    if (strict)
        require(4 * n >= N && 2 * n <= N, "need N/4 <= n <= N/2");
}

MainEstimate main_estimate(const sets::ProductSpec& spec, double t, const AnalysisParams& params, double c,
                           double alpha, std::int64_t grid, kernels::Exec exec)
{
    params.validate();
    ProductEvaluator pe{spec, t, 1, params.n};
    MainEstimate r;
    r.integral = integrate_abs2(pe, std::pow(double(spec.L), -params.m), 1.0, grid, exec);
    const double N = params.N > 0 ? params.N : 1.0;
    r.reference = c * params.K * std::pow(double(spec.L), -params.n) * std::pow(N, -alpha * params.eps0);
    return r;
}

Complex fhat(const sets::ProductSpec& spec, int n, double t, double xi, project::Kernel kernel)
{
    require(n >= 0, "n must be nonnegative");
    Complex p{1, 0};
    long double x = xi;
    for (int j = 1; j <= n; ++j) {
        x /= spec.L;
        p *= phi_long(spec.A, -x);
        if (t != 0)
            p *= phi_long(spec.B, -static_cast<long double>(t) * x);
    }
    const double z = static_cast<double>(x);
    Complex chi = box_hat(z);
    if (kernel == project::Kernel::trapezoid)
        chi *= box_hat(t * z);
    return p * chi;
}

double parseval_integral(const sets::ProductSpec& spec, int n, double t, project::Kernel kernel, double cutoff,
                         int nodes_per_unit, kernels::Exec exec)
{
    require(cutoff > 0 && nodes_per_unit > 0, "cutoff and nodes_per_unit must be positive");
    const double X = cutoff * std::pow(double(spec.L), n);
    const auto count = static_cast<std::int64_t>(std::ceil(X * nodes_per_unit));
    const double h = X / static_cast<double>(count);
    auto f = [&](double xi) { return std::norm(fhat(spec, n, t, xi, kernel)); };
    return 2 * kernels::midpoint_sum(exec, f, 0.0, h, count) * h;
}

} // namespace buffon::trig
