#include "buffon/project.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "buffon/errors.hpp"

namespace buffon::project {

namespace {

struct RationalParts {
    std::int64_t num;
    std::int64_t den;
};

RationalParts split(const Rational& t)
{
    const BigInt num = boost::multiprecision::numerator(t);
    const BigInt den = boost::multiprecision::denominator(t);
    const BigInt limit = BigInt(1) << 40;
    if (boost::multiprecision::abs(num) > limit || den > limit)
        throw BudgetExceeded("slope numerator/denominator too large for exact projection");
    return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::vector<Interval<std::int64_t>> exact_cell_projections(const sets::Iteration& it, const RationalParts& t)
{
    require(it.is_product(), "exact projection needs a product spec");
    const std::int64_t lo_off = std::min<std::int64_t>(0, t.num);
    const std::int64_t hi_off = checked_add(t.den, std::max<std::int64_t>(0, t.num));
    std::vector<Interval<std::int64_t>> out;
    out.reserve(it.size());
    for (const auto& [X, Y] : it.exact_origins()) {
        const std::int64_t s = checked_add(checked_mul(t.den, X), checked_mul(t.num, Y));
        out.push_back({checked_add(s, lo_off), checked_add(s, hi_off)});
    }
    return out;
}

// Piecewise-linear sweep. Each event adds `jump` to the value and `dslope`
// to the slope (per unit of Pos) from `pos` onwards.
template <class Pos, class Val>
struct Event {
    Pos pos;
    Val jump;
    Val dslope;
};

template <class Pos, class Val, class Acc, class ToT>
auto sweep(std::vector<Event<Pos, Val>> events, Kernel kernel, ToT to_t)
{
    using T = decltype(to_t(std::declval<Pos>()));
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.pos < b.pos; });
    CountingFunction<T> f;
    f.kernel = kernel;
    Acc value{0};
    Acc slope{0};
    std::size_t i = 0;
    while (i < events.size()) {
        const Pos x = events[i].pos;
        while (i < events.size() && events[i].pos == x) {
            value += Acc(events[i].jump);
            slope += Acc(events[i].dslope);
            ++i;
        }
        f.breakpoints.push_back(to_t(x));
        if (i < events.size()) {
            const Acc right = value + slope * Acc(events[i].pos - x);
            f.left_values.push_back(static_cast<T>(value));
            f.right_values.push_back(static_cast<T>(right));
            value = right;
        }
    }
    return f;
}

} // namespace

IntervalUnion<Rational> ExactUnion::to_rational() const
{
    const BigInt d = denominator;
    return numerators.transform([&](std::int64_t v) { return Rational(BigInt(v), d); });
}

IntervalUnion<double> ExactUnion::to_double() const
{
    const double d = static_cast<double>(denominator);
    return numerators.transform([&](std::int64_t v) { return static_cast<double>(v) / d; });
}

ExactUnion project_iteration(const sets::Iteration& it, const Rational& t)
{
    const auto parts = split(t);
    ExactUnion out;
    out.denominator = checked_mul(parts.den, it.denominator());
    out.numerators = IntervalUnion<std::int64_t>::from_unsorted(exact_cell_projections(it, parts));
    return out;
}

IntervalUnion<double> project_iteration(const sets::Iteration& it, double t)
{
    require(std::isfinite(t), "slope must be finite");
    double lo = 1e300, hi = -1e300;
    for (auto v : it.base()) {
        lo = std::min(lo, v.real() + t * v.imag());
        hi = std::max(hi, v.real() + t * v.imag());
    }
    const double s = it.scale_double();
    std::vector<Interval<double>> pieces;
    pieces.reserve(it.size());
    for (auto o : it.origins()) {
        const double p = o.real() + t * o.imag();
        pieces.push_back({p + s * lo, p + s * hi});
    }
    return IntervalUnion<double>::from_unsorted(std::move(pieces));
}

ExactUnion project_iteration_pairwise(const sets::Iteration& it, const Rational& t)
{
    const auto parts = split(t);
    std::vector<Interval<std::int64_t>> comps;
    for (auto piece : exact_cell_projections(it, parts)) {
        // Absorb every existing component that overlaps or touches the new piece.
        bool merged = true;
        while (merged) {
            merged = false;
            for (std::size_t k = 0; k < comps.size(); ++k) {
                if (comps[k].left <= piece.right && piece.left <= comps[k].right) {
                    piece.left = std::min(piece.left, comps[k].left);
                    piece.right = std::max(piece.right, comps[k].right);
                    comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(k));
                    merged = true;
                    break;
                }
            }
        }
        comps.push_back(piece);
    }
    ExactUnion out;
    out.denominator = checked_mul(parts.den, it.denominator());
    out.numerators = IntervalUnion<std::int64_t>::from_unsorted(std::move(comps));
    return out;
}

const char* to_string(Kernel k) { return k == Kernel::box ? "box" : "trapezoid"; }

Kernel parse_kernel(std::string_view s)
{
    if (s == "box")
        return Kernel::box;
    if (s == "trapezoid")
        return Kernel::trapezoid;
    throw InvalidArgument("kernel must be box or trapezoid");
}

template <class T>
T CountingFunction<T>::evaluate(const T& x) const
{
    if (breakpoints.size() < 2 || x < breakpoints.front() || breakpoints.back() < x)
        return T(0);
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    std::size_t seg = static_cast<std::size_t>(it - breakpoints.begin());
    seg = seg == 0 ? 0 : seg - 1;
    if (seg >= segments())
        seg = segments() - 1;
    const T w = breakpoints[seg + 1] - breakpoints[seg];
    return left_values[seg] + (right_values[seg] - left_values[seg]) * ((x - breakpoints[seg]) / w);
}

template <class T>
IntervalUnion<T> CountingFunction<T>::support() const
{
    T peak(0);
    for (std::size_t i = 0; i < segments(); ++i)
        peak = std::max({peak, left_values[i], right_values[i]});
    T floor(0);
    if constexpr (std::is_floating_point_v<T>)
        floor = peak * T(1e-12);
    std::vector<Interval<T>> pieces;
    for (std::size_t i = 0; i < segments(); ++i)
        if (floor < left_values[i] || floor < right_values[i])
            pieces.push_back({breakpoints[i], breakpoints[i + 1]});
    return IntervalUnion<T>::from_unsorted(std::move(pieces));
}

template struct CountingFunction<double>;
template struct CountingFunction<Rational>;

CountingFunction<double> counting_function(const sets::ProductSpec& spec, int n, double t, Kernel kernel)
{
    require(std::isfinite(t), "slope must be finite");
    const auto xs = sets::digit_numerators(spec.A, spec.L, n);
    const auto ys = sets::digit_numerators(spec.B, spec.L, n);
    const double denom = static_cast<double>(checked_pow(spec.L, n));
    const double ell = 1.0 / denom;
    const double tau = std::abs(t);

    std::vector<double> starts;
    starts.reserve(xs.size() * ys.size());
    for (auto X : xs)
        for (auto Y : ys)
            starts.push_back((static_cast<double>(X) + t * static_cast<double>(Y)) / denom);

    if (kernel == Kernel::box || tau == 0.0) {
        std::vector<Event<double, double>> events;
        events.reserve(2 * starts.size());
        for (double s : starts) {
            events.push_back({s, 1.0, 0.0});
            events.push_back({s + ell, -1.0, 0.0});
        }
        return sweep<double, double, long double>(std::move(events), kernel, [](double x) { return x; });
    }

    // Accumulating slopes loses accuracy when the ramps are steep (tau -> 0), so
    // every segment endpoint is evaluated directly from the kernels covering it.
    const double lo = std::min(1.0, tau) * ell, hi = std::max(1.0, tau) * ell;
    const double width = (1.0 + tau) * ell;
    const double height = 1.0 / std::max(1.0, tau);
    auto chi = [&](double u) {
        if (u <= 0 || u >= width)
            return 0.0;
        if (u < lo)
            return height * u / lo;
        if (u > hi)
            return height * (width - u) / lo;
        return height;
    };
    for (double& s : starts)
        s += std::min(0.0, t) * ell;
    std::sort(starts.begin(), starts.end());

    std::vector<double> knots;
    knots.reserve(4 * starts.size());
    for (double s : starts)
        for (double k : {s, s + lo, s + hi, s + width})
            knots.push_back(k);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    CountingFunction<double> f;
    f.kernel = kernel;
    f.breakpoints = knots;
    std::size_t first = 0, last = 0; // kernels [first, last) may overlap the current segment
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double a = knots[k], b = knots[k + 1];
        while (last < starts.size() && starts[last] < b)
            ++last;
        while (first < last && starts[first] + width <= a)
            ++first;
        kernels::CompensatedSum left, right;
        for (std::size_t i = first; i < last; ++i) {
            left.add(chi(a - starts[i]));
            right.add(chi(b - starts[i]));
        }
        f.left_values.push_back(left.value());
        f.right_values.push_back(right.value());
    }
    return f;
}

CountingFunction<Rational> counting_function(const sets::ProductSpec& spec, int n, const Rational& t,
                                             Kernel kernel)
{
    const auto parts = split(t);
    const auto xs = sets::digit_numerators(spec.A, spec.L, n);
    const auto ys = sets::digit_numerators(spec.B, spec.L, n);
    // Positions are numerators over D = q L^n; one cell has width q in those units.
    const std::int64_t q = parts.den;
    const std::int64_t p = parts.num;
    const std::int64_t D = checked_mul(q, checked_pow(spec.L, n));
    const std::int64_t ap = p < 0 ? -p : p;

    std::vector<Event<std::int64_t, Rational>> events;
    events.reserve(xs.size() * ys.size() * 4);
    const Rational one(1), zero(0);
    for (auto X : xs)
        for (auto Y : ys) {
            const std::int64_t s = checked_add(checked_mul(q, X), checked_mul(p, Y));
            if (kernel == Kernel::box || p == 0) {
                events.push_back({s, one, zero});
                events.push_back({s + q, -one, zero});
            } else {
                const std::int64_t lo = std::min(q, ap), hi = std::max(q, ap);
                const std::int64_t s0 = s + std::min<std::int64_t>(0, p);
                // Plateau height q/hi in density units; reached after lo numerator units.
                const Rational rise(BigInt(q) * D, BigInt(hi) * lo);
                const Rational per_unit = rise / D;
                events.push_back({s0, zero, per_unit});
                events.push_back({s0 + lo, zero, -per_unit});
                events.push_back({s0 + hi, zero, -per_unit});
                events.push_back({s0 + q + ap, zero, per_unit});
            }
        }
    const BigInt den = D;
    return sweep<std::int64_t, Rational, Rational>(std::move(events), kernel,
                                                   [&](std::int64_t v) { return Rational(BigInt(v), den); });
}

double lp_norm(const CountingFunction<double>& f, int p)
{
    require(p == 1 || p == 2, "p must be 1 or 2");
    kernels::CompensatedSum acc;
    for (std::size_t i = 0; i < f.segments(); ++i) {
        const double w = f.breakpoints[i + 1] - f.breakpoints[i];
        const double a = f.left_values[i], b = f.right_values[i];
        acc.add(p == 1 ? w * (a + b) / 2 : w * (a * a + a * b + b * b) / 3);
    }
    return acc.value();
}

Rational lp_norm(const CountingFunction<Rational>& f, int p)
{
    require(p == 1 || p == 2, "p must be 1 or 2");
    Rational total(0);
    for (std::size_t i = 0; i < f.segments(); ++i) {
        const Rational w = f.breakpoints[i + 1] - f.breakpoints[i];
        const Rational& a = f.left_values[i];
        const Rational& b = f.right_values[i];
        total += p == 1 ? Rational(w * (a + b) / 2) : Rational(w * (a * a + a * b + b * b) / 3);
    }
    return total;
}

HolderResult holder_check(const CountingFunction<double>& f, const IntervalUnion<double>& support)
{
    // Support pieces of f may differ from the given union by rounding at shared endpoints.
    const auto own = f.support();
    const double slack = 1e-12 * (1.0 + std::abs(own.empty() ? 0.0 : own.pieces().back().right));
    IntervalUnion<double> widened = support.transform([](double v) { return v; });
    std::vector<Interval<double>> grown;
    for (const auto& p : support.pieces())
        grown.push_back({p.left - slack, p.right + slack});
    widened = IntervalUnion<double>::from_unsorted(std::move(grown));
    require(own.subset_of(widened), "counting function is not supported on the given union");

    HolderResult r;
    r.l1_norm = lp_norm(f, 1);
    r.l2_norm = std::sqrt(lp_norm(f, 2));
    r.support_measure = support.measure();
    r.holds = r.l1_norm <= r.l2_norm * std::sqrt(r.support_measure) * (1 + 1e-12);
    return r;
}

bool holder_check(const CountingFunction<Rational>& f, const IntervalUnion<Rational>& support)
{
    require(f.support().subset_of(support), "counting function is not supported on the given union");
    const Rational l1 = lp_norm(f, 1);
    return l1 * l1 <= lp_norm(f, 2) * support.measure();
}

double favard_of_cells(std::span<const sets::Complex> origins, double scale, std::span<const sets::Complex> base,
                       int angle_count, kernels::Exec exec)
{
    require(angle_count >= 2, "angle_count must be >= 2");
    std::vector<std::array<double, 2>> dirs(static_cast<std::size_t>(angle_count));
    for (int k = 0; k < angle_count; ++k) {
        const double th = (k + 0.5) * std::numbers::pi / angle_count;
        dirs[static_cast<std::size_t>(k)] = {std::cos(th), std::sin(th)};
    }
    const auto m = kernels::projected_measures(exec, origins, scale, base, dirs);
    kernels::CompensatedSum acc;
    for (double v : m)
        acc.add(v);
    return acc.value() / angle_count;
}

FavardReport favard(const sets::SetSpec& spec, int n, int angle_count, kernels::Exec exec, std::int64_t cell_budget)
{
    require(angle_count >= 2, "angle_count must be >= 2");
    const auto it = sets::iterate(spec, n, cell_budget);

    FavardReport r;
    r.n = n;
    r.angle_count = angle_count;
    std::vector<std::array<double, 2>> dirs(static_cast<std::size_t>(angle_count));
    for (int k = 0; k < angle_count; ++k) {
        const double th = (k + 0.5) * std::numbers::pi / angle_count;
        dirs[static_cast<std::size_t>(k)] = {std::cos(th), std::sin(th)};
    }
    const auto measures = kernels::projected_measures(exec, it.origins(), it.scale_double(), it.base(), dirs);
    kernels::CompensatedSum acc;
    for (int k = 0; k < angle_count; ++k) {
        const double th = (k + 0.5) * std::numbers::pi / angle_count;
        r.angle_values.push_back({th, measures[static_cast<std::size_t>(k)]});
        acc.add(measures[static_cast<std::size_t>(k)]);
    }
    r.favard_estimate = acc.value() / angle_count;

    r.half_grid_estimate = favard_of_cells(it.origins(), it.scale_double(), it.base(), angle_count / 2, exec);
    // Midpoint error is O(h^2).
    r.richardson = r.favard_estimate + (r.favard_estimate - r.half_grid_estimate) / 3.0;

    std::vector<std::array<double, 2>> slopes(static_cast<std::size_t>(angle_count));
    for (int k = 0; k < angle_count; ++k)
        slopes[static_cast<std::size_t>(k)] = {1.0, (k + 0.5) / angle_count};
    const auto sm = kernels::projected_measures(exec, it.origins(), it.scale_double(), it.base(), slopes);
    kernels::CompensatedSum sacc;
    for (double v : sm)
        sacc.add(v);
    r.slope_integral = sacc.value() / angle_count;
    return r;
}

bool in_bad_set(const sets::ProductSpec& spec, double t, int N, double K, Kernel kernel)
{
    require(N >= 1, "N must be >= 1");
    for (int n = 1; n <= N; ++n)
        if (lp_norm(counting_function(spec, n, t, kernel), 2) > K)
            return false;
    return true;
}

} // namespace buffon::project
