#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "buffon/interval_union.hpp"
#include "buffon/kernels.hpp"
#include "buffon/rational.hpp"
#include "buffon/sets.hpp"
#include "buffon/trig.hpp"

namespace buffon::ssv {

/// Which part of P_2 = prod_{j=1}^m phi_A(L^j xi) phi_B(t L^j xi) is covered.
enum class Factor { product, A, B };

Factor parse_factor(std::string_view s);
const char* to_string(Factor f);

inline constexpr double kResolution = 0x1p-40;
inline constexpr std::int64_t kDefaultCellBudget = std::int64_t{1} << 26;

struct SSVCover {
    int m = 0;
    double t = 0;
    Factor factor = Factor::product;
    double psi_value = 0;
    IntervalUnion<double> intervals; ///< outer cover of {xi in [0,1] : |P_2(xi)| <= psi}
    bool certified = false;          ///< false when the cell budget ran out
    std::int64_t cells = 0;
    double resolution = kResolution;
};

/// Certified Lipschitz bisection of [0, 1]. A cell is dropped once a lower bound
/// for |P_2| on it exceeds psi, kept whole once an upper bound is <= psi, and
/// kept at the resolution floor otherwise.
SSVCover ssv_cover(const sets::ProductSpec& spec, double t, int m, double psi, Factor factor = Factor::product,
                   std::int64_t cell_budget = kDefaultCellBudget, double resolution = kResolution,
                   kernels::Exec exec = kernels::Exec::parallel);

struct SSVPropertyReport {
    std::int64_t interval_count = 0;
    double max_length = 0;
    double c2 = 0;
    double c3 = 0;
    double c2_fit = 0; ///< log(count) / (m log L)
    double c3_fit = 0; ///< -log(max_length) / (m log L)
    bool passes = false;
};

/// count <= L^{c2 m} and max_length <= L^{-c3 m}. Requires a certified cover.
SSVPropertyReport ssv_property_check(const SSVCover& cover, int L, double c2, double c3);

/// Smallest c3 with |B|^{c3 - 1} >= L^{c2 + 1}.
double default_c3(int L, int B_size, double c2);

/// union over integers a of ((a - w) / K, (a + w) / K), clipped to [0, 1].
IntervalUnion<double> progression_neighborhoods(double K, double w);

struct SpacingFit {
    double C0 = 0;
    double alpha = 0;
    std::vector<std::pair<std::pair<int, int>, double>> samples; ///< ((j, j'), spacing)
};

/// min |L^{-j}(xi0 + k) - L^{-j'}(xi0 + k')| over roots in [0, 1], k < k_range.
double root_spacing(double xi0, int L, int j, int jp, std::int64_t k_range = std::int64_t{1} << 20);
Rational root_spacing(const Rational& xi0, int L, int j, int jp, std::int64_t k_range = std::int64_t{1} << 20);

/// Fits spacing(j, j') >= C0 L^{-j} L^{-(j'-j) alpha} over 0 <= j < j' <= max_level.
SpacingFit fit_root_spacing(double xi0, int L, int max_level);

/// Gamma = cap_j (Gamma_j + tau_j) cap (t^{-1} Gamma_j + tau'_j) cap [0, 1] with
/// Gamma_j = (L^{-j}/Q) Z + (0, L^{-j} eta / (2Q)). Endpoints are integers over `denominator`.
struct GammaSet {
    int L = 25;
    int Q = 6;
    int m = 0;
    Rational eta;
    Rational t;
    std::int64_t denominator = 1;
    std::vector<std::pair<std::int64_t, std::int64_t>> translations; ///< numerators of (tau_j, tau'_j)
    IntervalUnion<std::int64_t> numerators;

    Rational measure() const;
    IntervalUnion<double> intervals() const;
    double measure_double() const;
    Rational translation(int j, bool scaled) const;
};

inline constexpr std::int64_t kDefaultGammaBudget = std::int64_t{1} << 24;

/// Chooses every translation to maximize the measure kept at that level. The
/// kept fraction is at least the average eta / 2, so |Gamma| >= (eta/2)^{2m}.
GammaSet build_gamma(int L, const Rational& t, int m, const Rational& eta, int Q = 6,
                     std::int64_t search_budget = kDefaultGammaBudget);

/// Same construction from an explicit interval union (for checking non-structured sets).
GammaSet gamma_from_intervals(int L, const Rational& t, int m, const Rational& eta,
                              const std::vector<Interval<Rational>>& pieces, int Q = 6);

struct SLVReport {
    bool add1 = false;
    bool add1_by_components = false; ///< every piece sits inside one component at each level
    std::optional<double> add1_witness;
    double min_product = 0;       ///< certified lower bound of prod |phi_A phi_B|^2 over Delta cap [-1, 1]
    double min_product_upper = 0; ///< best sampled value
    double c_eta = 0;             ///< min(min of |phi_A| on Delta_0, min of |phi_B| on Delta_0)
    double C1 = 0;                ///< 4 log(1 / c_eta) / log L, so that c_eta^{4m} = L^{-C1 m}
    double C1_realized = 0;       ///< -log(min_product) / (m log L)
    bool add2 = false;
    double epsilon = 0;
    double C2 = 1;
    double measure = 0;
    double measure_bound = 0; ///< C2 L^{-(1 - epsilon) m}
    bool add3 = false;
    bool passes() const { return add1 && add2 && add3; }
};

/// Delta = cap_{j<m} Delta_j cap t^{-1} Delta_j, Delta_j = (L^{-j}/Q) Z + (-L^{-j} eta/(2Q), L^{-j} eta/(2Q)), on [-1, 1].
IntervalUnion<double> delta_set(const GammaSet& g);

/// dist(Q L^j xi, Z) <= eta / 2 and dist(Q L^j t xi, Z) <= eta / 2 for every j < m, in exact arithmetic.
bool in_delta(const GammaSet& g, const Rational& xi);

/// Certified minimum of |phi(xi)| over (1/Q) Z + [-eta/(2Q), eta/(2Q)].
double delta0_min(const std::vector<int>& digits, double eta, int Q = 6);

SLVReport verify_slv(const GammaSet& g, const std::vector<int>& A, const std::vector<int>& B, int L,
                     kernels::Exec exec = kernels::Exec::parallel);

/// h = |Gamma|^{-1} 1_Gamma * 1_{-Gamma} as exact piecewise-linear data.
struct Autocorrelation {
    std::vector<double> breakpoints;
    std::vector<double> left_values;
    std::vector<double> right_values;

    double evaluate(double x) const;
};

Autocorrelation autocorrelation(const GammaSet& g);

/// |1_Gamma^(xi)|^2 / |Gamma|
double hhat(const GammaSet& g, double xi);

/// The inequality chain behind the SLV lower bound, with P_2 = prod_{j<m} and P_1 = prod_{m<=j<n}.
struct GammaChain {
    double gamma_measure = 0;
    double diagonal = 0;       ///< L^{m-n} |Gamma|
    double with_h = 0;         ///< int |P_1|^2 h
    double on_difference = 0;  ///< int_{Gamma-Gamma} |P_1|^2
    double near_origin = 0;    ///< int over (Gamma-Gamma) cap [-L^{-m}, L^{-m}]
    double away = 0;           ///< on_difference - near_origin
    double min_product = 0;
    double chain_bound = 0;    ///< min_product * away / 2
    double final_integral = 0; ///< int_{L^{-m}}^1 |P_1|^2 |P_2|^2
    std::int64_t nodes = 0;
    bool links_hold = false;
};

GammaChain gamma_want_integral(const GammaSet& g, const sets::ProductSpec& spec, int n, double nodes_per_unit = 0,
                               kernels::Exec exec = kernels::Exec::parallel);

} // namespace buffon::ssv
