#include "buffon/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "buffon/errors.hpp"

namespace buffon::sets {

namespace {

constexpr double kGeomEps = 1e-12;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

void validate_digits(const std::vector<int>& D, int L, const char* name)
{
    require(D.size() >= 2, std::string("digit set ") + name + " needs at least 2 elements");
    std::set<int> seen;
    for (int d : D) {
        require(d >= 0 && d < L, std::string("digit out of range in ") + name);
        require(seen.insert(d).second, std::string("repeated digit in ") + name);
    }
}

// Separating-axis test for convex polygons; touching counts as disjoint.
bool interiors_disjoint(const std::vector<Complex>& P, const std::vector<Complex>& Q)
{
    auto separated_along_edges = [](const std::vector<Complex>& U, const std::vector<Complex>& V) {
        for (std::size_t i = 0; i < U.size(); ++i) {
            Complex edge = U[(i + 1) % U.size()] - U[i];
            Complex axis{-edge.imag(), edge.real()};
            double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
            for (auto p : U) {
                double d = p.real() * axis.real() + p.imag() * axis.imag();
                umin = std::min(umin, d);
                umax = std::max(umax, d);
            }
            for (auto p : V) {
                double d = p.real() * axis.real() + p.imag() * axis.imag();
                vmin = std::min(vmin, d);
                vmax = std::max(vmax, d);
            }
            double tol = kGeomEps * std::abs(edge);
            if (umax <= vmin + tol || vmax <= umin + tol)
                return true;
        }
        return false;
    };
    return separated_along_edges(P, Q) || separated_along_edges(Q, P);
}

} // namespace

std::vector<Complex> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

ProductSpec make_product_spec(int L, std::vector<int> A, std::vector<int> B)
{
    require(L >= 4, "product spec needs L >= 4");
    validate_digits(A, L, "A");
    validate_digits(B, L, "B");
    require(static_cast<long>(A.size()) * static_cast<long>(B.size()) == L, "|A||B| must equal L");
    std::sort(A.begin(), A.end());
    std::sort(B.begin(), B.end());
    return ProductSpec{L, std::move(A), std::move(B)};
}

SelfSimilarSpec make_self_similar_spec(int L, std::vector<Complex> centers, std::vector<Complex> base)
{
    require(L >= 3, "self-similar spec needs L >= 3");
    require(static_cast<int>(centers.size()) == L, "need exactly L centers");
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            require(std::abs(centers[i] - centers[j]) > kGeomEps, "centers must be distinct");
    bool collinear = true;
    for (std::size_t i = 2; i < centers.size() && collinear; ++i)
        for (std::size_t j = 1; j < i && collinear; ++j)
            if (std::abs(cross(centers[j] - centers[0], centers[i] - centers[0])) > kGeomEps)
                collinear = false;
    require(!collinear, "centers must not be collinear");
    if (base.empty())
        base = unit_square();
    require(base.size() >= 3, "base polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < base.size(); ++i) {
        Complex a = base[i], b = base[(i + 1) % base.size()], c = base[(i + 2) % base.size()];
        require(cross(b - a, c - b) > 0, "base polygon must be convex and counter-clockwise");
    }
    return SelfSimilarSpec{L, std::move(centers), std::move(base)};
}

SetSpec named_spec(const std::string& name)
{
    if (name == "fourcorner")
        return make_product_spec(4, {0, 3}, {0, 3});
    if (name == "fig4")
        return make_product_spec(6, {0, 2, 5}, {0, 3});
    if (name == "slv25")
        return make_product_spec(25, {0, 3, 4, 8, 9}, {0, 3, 4, 8, 9});
    if (name == "baker25")
        return make_product_spec(25, {0, 3, 4, 5, 8}, {0, 3, 4, 5, 8});
    if (name == "gasket") {
        // Side-1 triangle, corners of side 1/3 kept: T_j fixes vertex v_j, so z_j = 2 v_j / 3.
        const Complex apex = std::polar(1.0, std::numbers::pi / 3);
        std::vector<Complex> tri{{0, 0}, {1, 0}, apex};
        std::vector<Complex> centers;
        for (auto v : tri)
            centers.push_back(v * (2.0 / 3.0));
        return make_self_similar_spec(3, centers, tri);
    }
    throw InvalidArgument("unknown named spec '" + name + "'");
}

SelfSimilarSpec as_self_similar(const ProductSpec& spec)
{
    SelfSimilarSpec out{spec.L, {}, unit_square()};
    for (int a : spec.A)
        for (int b : spec.B)
            out.centers.emplace_back(double(a) / spec.L, double(b) / spec.L);
    return out;
}

int num_maps(const SetSpec& spec)
{
    return std::visit([](const auto& s) { return s.L; }, spec);
}

int scale_base(const SetSpec& spec) { return num_maps(spec); }

std::vector<std::int64_t> digit_numerators(const std::vector<int>& digits, int L, int n, std::int64_t budget)
{
    require(n >= 0, "n must be nonnegative");
    std::int64_t count = checked_pow(static_cast<std::int64_t>(digits.size()), n);
    if (count > budget)
        throw BudgetExceeded("digit enumeration exceeds budget");
    checked_pow(L, n);
    std::vector<std::int64_t> out{0};
    for (int level = 0; level < n; ++level) {
        std::vector<std::int64_t> next;
        next.reserve(out.size() * digits.size());
        for (auto v : out)
            for (int d : digits)
                next.push_back(v * L + d);
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<std::vector<Rational>, std::vector<Rational>>
digit_points(const ProductSpec& spec, int n, std::int64_t budget)
{
    require(n >= 1, "digit_points needs n >= 1");
    BigInt den = checked_pow(spec.L, n);
    auto conv = [&](const std::vector<int>& D) {
        std::vector<Rational> out;
        for (auto v : digit_numerators(D, spec.L, n, budget))
            out.emplace_back(BigInt(v), den);
        return out;
    };
    return {conv(spec.A), conv(spec.B)};
}

Iteration iterate(const SetSpec& spec, int n, std::int64_t cell_budget)
{
    require(n >= 0, "n must be nonnegative");
    const int L = num_maps(spec);
    std::int64_t cells = checked_pow(L, n);
    if (cells > cell_budget)
        throw BudgetExceeded("iteration needs " + std::to_string(cells) + " cells, budget " +
                             std::to_string(cell_budget));

    Iteration it;
    it.spec_ = spec;
    it.n_ = n;
    it.denom_ = checked_pow(scale_base(spec), n);
    it.scale_ = 1.0 / static_cast<double>(it.denom_);

    if (const auto* ps = std::get_if<ProductSpec>(&spec)) {
        it.base_ = unit_square();
        auto xs = digit_numerators(ps->A, ps->L, n, cell_budget);
        auto ys = digit_numerators(ps->B, ps->L, n, cell_budget);
        it.exact_.reserve(xs.size() * ys.size());
        it.origins_.reserve(xs.size() * ys.size());
        const double inv = it.scale_;
        for (auto x : xs)
            for (auto y : ys) {
                it.exact_.push_back({x, y});
                it.origins_.emplace_back(x * inv, y * inv);
            }
    } else {
        const auto& ss = std::get<SelfSimilarSpec>(spec);
        it.base_ = ss.base;
        // Offset of T_{j1} o ... o T_{jn}: sum_k L^{-(k-1)} z_{jk}. Built outermost map first.
        std::vector<Complex> offs{Complex{0, 0}};
        double weight = 1.0;
        for (int level = 0; level < n; ++level) {
            std::vector<Complex> next;
            next.reserve(offs.size() * ss.centers.size());
            for (auto o : offs)
                for (auto z : ss.centers)
                    next.push_back(o + weight * z);
            offs = std::move(next);
            weight /= ss.L;
        }
        it.origins_ = std::move(offs);
    }
    return it;
}

std::pair<Rational, Rational> Iteration::exact_origin(std::size_t i) const
{
    require(!exact_.empty(), "exact origins are only available for product specs");
    return {Rational(BigInt(exact_.at(i)[0]), BigInt(denom_)), Rational(BigInt(exact_.at(i)[1]), BigInt(denom_))};
}

std::vector<Complex> Iteration::cell_polygon(std::size_t i) const
{
    std::vector<Complex> out;
    out.reserve(base_.size());
    for (auto v : base_)
        out.push_back(origins_.at(i) + scale_ * v);
    return out;
}

bool first_level_cells_disjoint(const SetSpec& spec)
{
    auto it = iterate(spec, 1);
    for (std::size_t i = 0; i < it.size(); ++i)
        for (std::size_t j = i + 1; j < it.size(); ++j)
            if (!interiors_disjoint(it.cell_polygon(i), it.cell_polygon(j)))
                return false;
    return true;
}

} // namespace buffon::sets
