#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "buffon/rational.hpp"

namespace buffon::sets {

using Complex = std::complex<double>;

/// Rational product Cantor set: keep the squares with lower-left corners
/// (a/L, b/L), a in A, b in B, and iterate. Digits are stored sorted.
struct ProductSpec {
    int L = 0;
    std::vector<int> A;
    std::vector<int> B;

    friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

/// Self-similar set generated by T_j(z) = z/L + z_j.
///
/// E_n is realized as the n-fold IFS image of `base` (a convex polygon,
/// counter-clockwise), not as an L^{-n}-neighbourhood of the attractor; the
/// two agree up to bounded constants for every measure computed here.
struct SelfSimilarSpec {
    int L = 0;
    std::vector<Complex> centers;
    std::vector<Complex> base;
};

using SetSpec = std::variant<ProductSpec, SelfSimilarSpec>;

inline constexpr std::int64_t kDefaultCellBudget = std::int64_t{1} << 20; // 4^10

ProductSpec make_product_spec(int L, std::vector<int> A, std::vector<int> B);

/// Validates L >= 3, distinct and non-collinear centers. An empty `base`
/// means the unit square.
SelfSimilarSpec make_self_similar_spec(int L, std::vector<Complex> centers,
                                       std::vector<Complex> base = {});

std::vector<Complex> unit_square();

/// Built-in handles: fourcorner, gasket, fig4, slv25, baker25.
SetSpec named_spec(const std::string& name);

/// Product specs re-expressed as an IFS with centers (a + ib)/L on the unit square.
SelfSimilarSpec as_self_similar(const ProductSpec& spec);

int num_maps(const SetSpec& spec);
int scale_base(const SetSpec& spec);

/// Heuristic open-set check: the n = 1 cells have pairwise disjoint interiors.
/// Weaker than the open set condition; touching boundaries are allowed.
bool first_level_cells_disjoint(const SetSpec& spec);

/// The n-th Cantor iteration as a list of cells origin + L^{-n} * base.
///
/// For product specs the origins are exact: x = X / L^n, y = Y / L^n with
/// integer numerators. Immutable after construction.
class Iteration {
public:
    const SetSpec& spec() const { return spec_; }
    int n() const { return n_; }
    bool is_product() const { return std::holds_alternative<ProductSpec>(spec_); }
    std::size_t size() const { return origins_.size(); }

    /// L^n, the common denominator of exact origins (product specs only).
    std::int64_t denominator() const { return denom_; }
    Rational scale() const { return Rational(BigInt(1), BigInt(denom_)); }
    double scale_double() const { return scale_; }

    const std::vector<Complex>& base() const { return base_; }
    const std::vector<Complex>& origins() const { return origins_; }
    /// Integer numerators (X, Y) over denominator(); empty for non-product specs.
    const std::vector<std::array<std::int64_t, 2>>& exact_origins() const { return exact_; }
    std::pair<Rational, Rational> exact_origin(std::size_t i) const;

    /// Vertices of cell i in floating point.
    std::vector<Complex> cell_polygon(std::size_t i) const;

private:
    friend Iteration iterate(const SetSpec&, int, std::int64_t);
    SetSpec spec_;
    int n_ = 0;
    std::int64_t denom_ = 1;
    double scale_ = 1.0;
    std::vector<Complex> base_;
    std::vector<Complex> origins_;
    std::vector<std::array<std::int64_t, 2>> exact_;
};

/// Throws BudgetExceeded when the cell count exceeds `cell_budget`.
Iteration iterate(const SetSpec& spec, int n, std::int64_t cell_budget = kDefaultCellBudget);

/// Sorted integer numerators of sum_{j=1}^n L^{-j} D over denominator L^n.
std::vector<std::int64_t> digit_numerators(const std::vector<int>& digits, int L, int n,
                                           std::int64_t budget = kDefaultCellBudget);

/// (A_n, B_n) as sorted exact rationals; requires n >= 1.
std::pair<std::vector<Rational>, std::vector<Rational>>
digit_points(const ProductSpec& spec, int n, std::int64_t budget = kDefaultCellBudget);

} // namespace buffon::sets
