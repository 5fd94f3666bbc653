#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "buffon/interval_union.hpp"
#include "buffon/kernels.hpp"
#include "buffon/rational.hpp"
#include "buffon/sets.hpp"

namespace buffon::project {

/// Interval union with integer endpoints over a shared denominator.
struct ExactUnion {
    IntervalUnion<std::int64_t> numerators;
    std::int64_t denominator = 1;

    Rational measure() const { return Rational(BigInt(numerators.measure()), BigInt(denominator)); }
    IntervalUnion<Rational> to_rational() const;
    IntervalUnion<double> to_double() const;
};

/// pi_t(E_n) for pi_t(x, y) = x + t y, exact for product specs and rational t.
ExactUnion project_iteration(const sets::Iteration& it, const Rational& t);

/// Floating version; works for any spec.
IntervalUnion<double> project_iteration(const sets::Iteration& it, double t);

/// O(N^2) pairwise-merge reference for the exact projection (test oracle).
ExactUnion project_iteration_pairwise(const sets::Iteration& it, const Rational& t);

enum class Kernel { box, trapezoid };

const char* to_string(Kernel k);
Kernel parse_kernel(std::string_view s);

/// Piecewise-linear density. Segment i spans [breakpoints[i], breakpoints[i+1]]
/// and runs linearly from left_values[i] to right_values[i]; jumps are allowed
/// at breakpoints.
template <class T>
struct CountingFunction {
    Kernel kernel = Kernel::box;
    std::vector<T> breakpoints;
    std::vector<T> left_values;
    std::vector<T> right_values;

    std::size_t segments() const { return left_values.size(); }
    T evaluate(const T& x) const;
    /// Closure of {f > 0} as a union of segments.
    IntervalUnion<T> support() const;
};

/// Density of pi_t mu_n: sum over (a, b) in A_n x B_n of chi(L^n (x - a - t b)).
///
/// Box kernel: chi = 1_[0,1]. Trapezoid kernel: chi is the exact density of
/// x + t y under Lebesgue measure on the unit square.
CountingFunction<double> counting_function(const sets::ProductSpec& spec, int n, double t, Kernel kernel);

/// Exact variant for rational t; integrates to exactly 1.
CountingFunction<Rational> counting_function(const sets::ProductSpec& spec, int n, const Rational& t,
                                             Kernel kernel);

/// Returns the integral of f^p (p = 1 or 2), computed piecewise in closed form.
double lp_norm(const CountingFunction<double>& f, int p);
Rational lp_norm(const CountingFunction<Rational>& f, int p);

struct HolderResult {
    double l1_norm = 0;
    double l2_norm = 0;
    double support_measure = 0;
    bool holds = false;
};

/// Checks 1 = ||f||_1 <= ||f||_2 |support|^{1/2}. The support must contain supp f
/// (InvalidArgument otherwise). A false `holds` is an internal-consistency failure.
HolderResult holder_check(const CountingFunction<double>& f, const IntervalUnion<double>& support);
bool holder_check(const CountingFunction<Rational>& f, const IntervalUnion<Rational>& support);

struct AngleSample {
    double theta;
    double measure;
};

struct FavardReport {
    int n = 0;
    int angle_count = 0;
    std::vector<AngleSample> angle_values;
    double favard_estimate = 0;   ///< (1/pi) int_0^pi |proj_theta| by midpoint rule
    double richardson = 0;        ///< extrapolated from the angle_count/2 grid
    double half_grid_estimate = 0;
    double slope_integral = 0;    ///< int_0^1 |pi_t(E_n)| dt, midpoint rule on angle_count slopes
};

inline constexpr int kDefaultAngles = 512;

FavardReport favard(const sets::SetSpec& spec, int n, int angle_count = kDefaultAngles,
                    kernels::Exec exec = kernels::Exec::parallel,
                    std::int64_t cell_budget = sets::kDefaultCellBudget);

/// Favard length of cells origin + scale * base (midpoint rule over [0, pi)).
double favard_of_cells(std::span<const sets::Complex> origins, double scale, std::span<const sets::Complex> base,
                       int angle_count, kernels::Exec exec = kernels::Exec::parallel);

/// t belongs to the bad set when ||f_{n,t}||_2^2 <= K for every 1 <= n <= N.
bool in_bad_set(const sets::ProductSpec& spec, double t, int N, double K, Kernel kernel = Kernel::box);

} // namespace buffon::project
