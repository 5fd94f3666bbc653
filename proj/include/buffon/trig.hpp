#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "buffon/kernels.hpp"
#include "buffon/project.hpp"
#include "buffon/sets.hpp"

namespace buffon::trig {

using Complex = std::complex<double>;

/// (1/|A|) sum_{a in A} e^{2 pi i a xi}.
Complex phi(std::span<const int> digits, double xi);

/// Same, with the phase a * xi reduced mod 1 in extended precision.
Complex phi_long(std::span<const int> digits, long double xi);

/// prod_{j = j_lo}^{j_hi} phi_A(L^j xi) phi_B(t L^j xi). An empty range
/// (j_hi < j_lo) evaluates to 1.
struct ProductEvaluator {
    sets::ProductSpec spec;
    double t = 0;
    int j_lo = 1;
    int j_hi = 0;

    Complex operator()(double xi) const;
    /// |.|^2 without forming the complex product.
    double abs2(double xi) const;
    /// Upper bound on the highest frequency present in the product.
    double bandwidth() const;
};

Complex eval_product(const ProductEvaluator& pe, double xi);

/// Midpoint quadrature on `grid` nodes plus the half grid, with the
/// Richardson combination (4 M_h - M_2h) / 3 as the reported value.
struct Quadrature {
    double value = 0;
    double fine = 0;
    double coarse = 0;
    std::int64_t grid = 0;
    double lower = 0;
    double upper = 0;
};

/// Smallest admissible grid: 16 nodes per period of e^{2 pi i L^{j_hi} xi}.
std::int64_t min_grid(const ProductEvaluator& pe, double length);

/// grid == 0 picks 8 * min_grid. A smaller positive grid than min_grid throws.
Quadrature integrate_abs2(const ProductEvaluator& pe, double lower, double upper, std::int64_t grid = 0,
                          kernels::Exec exec = kernels::Exec::parallel);

struct SalemResult {
    Quadrature integral;
    double lower_bound = 0; ///< L^{m-n} / 4
    bool holds = false;
};

/// int_0^1 |P_1|^2 with P_1 = prod_{j=m+1}^n phi_t(L^j xi).
SalemResult salem_integral(const sets::ProductSpec& spec, double t, int m, int n, std::int64_t grid = 0,
                           kernels::Exec exec = kernels::Exec::parallel);

struct PoissonResult {
    Quadrature integral; ///< int_0^{L^{-m}} |P_1|^2
    double reference = 0; ///< K L^{-n}
    double ratio = 0;     ///< integral / reference, an empirical C_0
};

PoissonResult poisson_integral(const sets::ProductSpec& spec, double t, int m, int n, double K,
                               std::int64_t grid = 0, kernels::Exec exec = kernels::Exec::parallel);

struct ExpDichotResult {
    double closed_form = 0;
    double quadrature = 0;
    double relative_error = 0;
    std::int64_t grid = 0;
};

/// int_{xi0}^{xi0 + L^{-m1}} |prod_{k=m1+1}^{m2} A(e^{2 pi i L^k xi})|^2 d xi against |A|^{m2-m1} L^{-m1}.
/// After xi = xi0 + L^{-m1} u the integrand is a trigonometric polynomial in u
/// with integer frequencies, so the midpoint rule on enough nodes is exact.
ExpDichotResult exp_dichot(std::span<const int> digits, int m1, int m2, double xi0, int L,
                           kernels::Exec exec = kernels::Exec::parallel);

enum class PsiMode { power, power_log };

PsiMode parse_psi_mode(std::string_view s);
const char* to_string(PsiMode m);

/// L^{-c1 m} or L^{-c1 m log m}.
double psi(int L, int m, double c1, PsiMode mode);

/// N^{eps0}, or N^{eps0 / log log N} when non-cyclotomic circle roots are present.
double default_K(int N, double eps0, bool has_noncyclotomic_roots);

struct AnalysisParams {
    int N = 0;
    int n = 0;
    int m = 0;
    double K = 2;
    double eps0 = 0.1;
    double c0 = 1;
    double c1 = 1;
    PsiMode psi_mode = PsiMode::power;

    /// Throws InvalidArgument unless m < n and K > 1; `strict` also requires N/4 <= n <= N/2.
    void validate(bool strict = false) const;
};

struct MainEstimate {
    Quadrature integral;  ///< int_{L^{-m}}^1 prod_{j=1}^n |phi_t(L^j xi)|^2
    double reference = 0; ///< c K L^{-n} N^{-alpha eps0}
};

MainEstimate main_estimate(const sets::ProductSpec& spec, double t, const AnalysisParams& params, double c = 1,
                           double alpha = 1, std::int64_t grid = 0, kernels::Exec exec = kernels::Exec::parallel);

/// Fourier transform of the counting function f_{n,t}:
/// prod_{j=1}^n phi_t(-L^{-j} xi) * chi^(L^{-n} xi).
Complex fhat(const sets::ProductSpec& spec, int n, double t, double xi, project::Kernel kernel);

/// int_R |fhat|^2 over |xi| <= cutoff * L^n with `nodes_per_unit` midpoint nodes per unit of xi.
double parseval_integral(const sets::ProductSpec& spec, int n, double t, project::Kernel kernel,
                         double cutoff = 128, int nodes_per_unit = 32,
                         kernels::Exec exec = kernels::Exec::parallel);

} // namespace buffon::trig
