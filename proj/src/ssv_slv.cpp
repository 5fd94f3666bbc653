#include "buffon/ssv_slv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "buffon/errors.hpp"

namespace buffon::ssv {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

double mean_digit(const std::vector<int>& d)
{
    return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

// |phi(digits, mult * xi)| with |d/dxi| <= lip
struct TrigFactor {
    const std::vector<int>* digits;
    long double mult;
    double lip;

    double abs(double xi) const { return std::abs(trig::phi_long(*digits, mult * static_cast<long double>(xi))); }
};

void add_factor(std::vector<TrigFactor>& out, const std::vector<int>& digits, long double mult)
{
    if (mult == 0)
        return;
    out.push_back({&digits, mult, kTwoPi * std::abs(static_cast<double>(mult)) * mean_digit(digits)});
}

struct CellBounds {
    double lower;
    double upper;
    double centre; // product of |f_i(c)|
};

CellBounds bounds(const std::vector<TrigFactor>& fs, double c, double hw)
{
    CellBounds b{1, 1, 1};
    for (const auto& f : fs) {
        const double v = f.abs(c);
        b.centre *= v;
        b.lower *= std::max(0.0, v - f.lip * hw);
        b.upper *= std::min(1.0, v + f.lip * hw);
    }
    return b;
}

struct MinResult {
    double lower = std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double argmin = 0;
};

// Certified minimum of (prod |f_i|)^2 over [a, b] by Lipschitz branch and bound.
MinResult certified_min(const std::vector<TrigFactor>& fs, double a, double b, double rel_tol = 1e-7,
                        double min_width = 1e-13)
{
    MinResult r;
    auto sample = [&](double x) {
        double v = 1;
        for (const auto& f : fs)
            v *= f.abs(x);
        v *= v;
        if (v < r.upper) {
            r.upper = v;
            r.argmin = x;
        }
    };
    sample(a);
    sample(b);
    std::vector<std::pair<double, double>> stack{{a, b}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
        const CellBounds cb = bounds(fs, c, hw);
        sample(c);
        const double lower = cb.lower * cb.lower;
        if (lower >= r.upper * (1 - rel_tol) || hi - lo <= min_width) {
            r.lower = std::min(r.lower, lower);
            continue;
        }
        stack.push_back({c, hi});
        stack.push_back({lo, c});
    }
    r.lower = std::min(r.lower, r.upper);
    return r;
}

MinResult certified_min(const std::vector<TrigFactor>& fs, const IntervalUnion<double>& set, kernels::Exec exec)
{
    const auto pieces = set.pieces();
    std::vector<MinResult> parts(pieces.size());
    const auto count = static_cast<std::int64_t>(pieces.size());
#pragma omp parallel for schedule(dynamic) if (exec == kernels::Exec::parallel)
    for (std::int64_t i = 0; i < count; ++i)
        parts[static_cast<std::size_t>(i)] = certified_min(fs, pieces[i].left, pieces[i].right);
    MinResult r;
    for (const auto& p : parts) {
        r.lower = std::min(r.lower, p.lower);
        if (p.upper < r.upper) {
            r.upper = p.upper;
            r.argmin = p.argmin;
        }
    }
    return r;
}

// The factors of prod_{j=j_lo}^{j_hi} phi_A(L^j xi) phi_B(t L^j xi).
std::vector<TrigFactor> level_factors(const std::vector<int>& A, const std::vector<int>& B, int L, long double t,
                                      int j_lo, int j_hi, bool with_A = true, bool with_B = true)
{
    std::vector<TrigFactor> fs;
    for (int j = j_lo; j <= j_hi; ++j) {
        const long double Lj = std::pow(static_cast<long double>(L), j);
        if (with_A)
            add_factor(fs, A, Lj);
        if (with_B)
            add_factor(fs, B, t * Lj);
    }
    return fs;
}

IntervalUnion<double> scaled_down(const IntervalUnion<std::int64_t>& u, std::int64_t D)
{
    const double d = static_cast<double>(D);
    return u.transform([d](std::int64_t x) { return static_cast<double>(x) / d; });
}

// Complement of u inside [lo, hi].
IntervalUnion<std::int64_t> complement(const IntervalUnion<std::int64_t>& u, std::int64_t lo, std::int64_t hi)
{
    std::vector<Interval<std::int64_t>> out;
    std::int64_t cur = lo;
    for (const auto& p : u.pieces()) {
        if (p.left > cur)
            out.push_back({cur, std::min(p.left, hi)});
        cur = std::max(cur, p.right);
    }
    if (cur < hi)
        out.push_back({cur, hi});
    return IntervalUnion<std::int64_t>::from_unsorted(std::move(out));
}

struct Progression {
    std::int64_t period;
    std::int64_t length;
};

// (Gamma_j, t^{-1} Gamma_j) periods and lengths as numerators over D.
struct Lattice {
    std::int64_t D = 1;
    std::int64_t p = 1, q = 1; // t = p / q
    std::int64_t a = 1, b = 1; // eta = a / b
    std::vector<std::pair<Progression, Progression>> levels;
};

std::int64_t as_int64(const BigInt& v, const char* what)
{
    if (boost::multiprecision::abs(v) > BigInt(std::numeric_limits<std::int64_t>::max()))
        throw BudgetExceeded(std::string(what) + " does not fit in 64 bits");
    return static_cast<std::int64_t>(v);
}

Lattice make_lattice(int L, const Rational& t, int m, const Rational& eta, int Q)
{
    require(L >= 2, "L must be >= 2");
    require(Q >= 1, "Q must be >= 1");
    require(m >= 0, "m must be nonnegative");
    require(t > 0, "t must be positive");
    require(eta > 0 && eta < 1, "eta must lie in (0, 1)");
    Lattice lat;
    lat.p = as_int64(boost::multiprecision::numerator(t), "t numerator");
    lat.q = as_int64(boost::multiprecision::denominator(t), "t denominator");
    lat.a = as_int64(boost::multiprecision::numerator(eta), "eta numerator");
    lat.b = as_int64(boost::multiprecision::denominator(eta), "eta denominator");
    if (m == 0)
        return lat;
    const std::int64_t base = checked_mul(checked_mul(2 * lat.b, Q), lat.p);
    lat.D = checked_mul(checked_pow(L, m - 1), base);
    for (int j = 0; j < m; ++j) {
        const std::int64_t s = checked_pow(L, m - 1 - j);
        Progression g{checked_mul(s, 2 * lat.b * lat.p), checked_mul(s, lat.a * lat.p)};
        Progression h{checked_mul(s, 2 * lat.b * lat.q), checked_mul(s, lat.a * lat.q)};
        lat.levels.push_back({g, h});
    }
    return lat;
}

Lattice rescale(Lattice lat, std::int64_t factor)
{
    lat.D = checked_mul(lat.D, factor);
    for (auto& [g, h] : lat.levels) {
        g.period = checked_mul(g.period, factor);
        g.length = checked_mul(g.length, factor);
        h.period = checked_mul(h.period, factor);
        h.length = checked_mul(h.length, factor);
    }
    return lat;
}

// [tau + k P, tau + k P + len] over [lo, hi]
IntervalUnion<std::int64_t> teeth(const Progression& pr, std::int64_t tau, std::int64_t lo, std::int64_t hi,
                                  std::int64_t budget)
{
    const std::int64_t k0 = floor_div(lo - tau - pr.length, pr.period);
    const std::int64_t k1 = ceil_div(hi - tau, pr.period);
    if (k1 - k0 > budget)
        throw BudgetExceeded("progression has too many components for the budget");
    std::vector<Interval<std::int64_t>> out;
    out.reserve(static_cast<std::size_t>(k1 - k0 + 1));
    for (std::int64_t k = k0; k <= k1; ++k) {
        const std::int64_t l = checked_add(tau, checked_mul(k, pr.period));
        out.push_back({std::max(l, lo), std::min(l + pr.length, hi)});
    }
    return IntervalUnion<std::int64_t>::from_unsorted(std::move(out));
}

// |S cap [0, x)| for S = union_k [kP, kP + len)
std::int64_t cumulative(const Progression& pr, std::int64_t x)
{
    return floor_div(x, pr.period) * pr.length + std::min(mod(x, pr.period), pr.length);
}

// #{k : x + kP in [u, v)} summed over pieces
std::int64_t periodic_count(const IntervalUnion<std::int64_t>& S, std::int64_t P, std::int64_t x)
{
    std::int64_t c = 0;
    for (const auto& piece : S.pieces())
        c += floor_div(piece.right - 1 - x, P) - ceil_div(piece.left - x, P) + 1;
    return c;
}

// tau in [0, P) maximizing |S cap (G + tau)|; ties to the smallest tau.
std::pair<std::int64_t, std::int64_t> best_translation(const IntervalUnion<std::int64_t>& S, const Progression& pr)
{
    const std::int64_t P = pr.period, len = pr.length;
    std::int64_t value = 0;
    for (const auto& piece : S.pieces())
        value += cumulative(pr, piece.right) - cumulative(pr, piece.left);
    std::int64_t slope = periodic_count(S, P, len) - periodic_count(S, P, 0);

    std::vector<std::pair<std::int64_t, int>> events;
    events.reserve(4 * S.size());
    for (const auto& piece : S.pieces()) {
        events.push_back({mod(piece.left - len, P), +1});
        events.push_back({mod(piece.right - len, P), -1});
        events.push_back({mod(piece.left, P), -1});
        events.push_back({mod(piece.right, P), +1});
    }
    std::sort(events.begin(), events.end());

    std::int64_t best_tau = 0, best = value, x = 0;
    std::size_t i = 0;
    while (i < events.size() && events[i].first == 0)
        ++i;
    while (i < events.size()) {
        const std::int64_t pos = events[i].first;
        value += slope * (pos - x);
        x = pos;
        if (value > best) {
            best = value;
            best_tau = pos;
        }
        while (i < events.size() && events[i].first == pos)
            slope += events[i++].second;
    }
    return {best_tau, best};
}

bool piece_in_one_tooth(const Interval<std::int64_t>& piece, const Progression& pr, std::int64_t tau)
{
    const std::int64_t k = floor_div(piece.left - tau, pr.period);
    return piece.right <= tau + k * pr.period + pr.length;
}

IntervalUnion<std::int64_t> delta_exact(const Lattice& lat, std::int64_t budget)
{
    const std::int64_t D = lat.D;
    auto out = IntervalUnion<std::int64_t>::single(-D, D);
    for (const auto& [g, h] : lat.levels) {
        for (const Progression& pr : {g, h}) {
            const Progression sym{pr.period, 2 * pr.length};
            out = out.intersect(teeth(sym, -pr.length, -D, D, budget));
        }
    }
    return out;
}

Lattice lattice_of(const GammaSet& g)
{
    Lattice lat = make_lattice(g.L, g.t, g.m, g.eta, g.Q);
    if (g.m == 0) {
        lat.D = g.denominator;
        return lat;
    }
    require(g.denominator % lat.D == 0, "Gamma denominator does not refine the lattice");
    return rescale(lat, g.denominator / lat.D);
}

double product_abs2(const std::vector<TrigFactor>& fs, double x)
{
    double v = 1;
    for (const auto& f : fs)
        v *= f.abs(x);
    return v * v;
}

} // namespace

Factor parse_factor(std::string_view s)
{
    if (s == "product")
        return Factor::product;
    if (s == "A")
        return Factor::A;
    if (s == "B")
        return Factor::B;
    throw InvalidArgument("factor must be product, A or B");
}

const char* to_string(Factor f)
{
    switch (f) {
    case Factor::A:
        return "A";
    case Factor::B:
        return "B";
    default:
        return "product";
    }
}

SSVCover ssv_cover(const sets::ProductSpec& spec, double t, int m, double psi, Factor factor,
                   std::int64_t cell_budget, double resolution, kernels::Exec exec)
{
    require(m >= 0, "m must be nonnegative");
    require(psi >= 0, "psi must be nonnegative");
    require(resolution > 0, "resolution must be positive");
    require(cell_budget > 0, "cell budget must be positive");
    if (m > 0 && std::pow(double(spec.L), m) > 1e12)
        throw BudgetExceeded("m too large for the SSV cover");
    const auto fs = level_factors(spec.A, spec.B, spec.L, t, 1, m, factor != Factor::B, factor != Factor::A);

    SSVCover cover;
    cover.m = m;
    cover.t = t;
    cover.factor = factor;
    cover.psi_value = psi;
    cover.resolution = resolution;

    constexpr std::int64_t chunks = 4096;
    const std::int64_t per_chunk = std::max<std::int64_t>(1, cell_budget / chunks);
    std::vector<std::vector<Interval<double>>> kept(chunks);
    std::vector<std::int64_t> used(chunks, 0);
    std::vector<char> exhausted(chunks, 0);
    const double eps = 1e-13;

#pragma omp parallel for schedule(dynamic) if (exec == kernels::Exec::parallel)
    for (std::int64_t c = 0; c < chunks; ++c) {
        auto& out = kept[static_cast<std::size_t>(c)];
        std::vector<std::pair<double, double>> stack{
            {static_cast<double>(c) / chunks, static_cast<double>(c + 1) / chunks}};
        std::int64_t n = 0;
        while (!stack.empty()) {
            auto [lo, hi] = stack.back();
            stack.pop_back();
            if (n >= per_chunk) {
                exhausted[static_cast<std::size_t>(c)] = 1;
                out.push_back({lo, hi});
                continue;
            }
            ++n;
            const double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
            const CellBounds b = bounds(fs, mid, hw);
            if (b.lower - eps > psi)
                continue;
            if (b.upper <= psi || hi - lo <= resolution) {
                out.push_back({lo, hi});
                continue;
            }
            stack.push_back({mid, hi});
            stack.push_back({lo, mid});
        }
        used[static_cast<std::size_t>(c)] = n;
    }

    std::vector<Interval<double>> all;
    for (auto& v : kept)
        all.insert(all.end(), v.begin(), v.end());
    cover.intervals = IntervalUnion<double>::from_unsorted(std::move(all));
    cover.cells = std::accumulate(used.begin(), used.end(), std::int64_t{0});
    cover.certified = std::none_of(exhausted.begin(), exhausted.end(), [](char e) { return e != 0; });
    return cover;
}

SSVPropertyReport ssv_property_check(const SSVCover& cover, int L, double c2, double c3)
{
    if (!cover.certified)
        throw CertificationFailure("SSV cover is not certified (cell budget exhausted)");
    require(L >= 2, "L must be >= 2");
    SSVPropertyReport r;
    r.c2 = c2;
    r.c3 = c3;
    r.interval_count = static_cast<std::int64_t>(cover.intervals.size());
    for (const auto& p : cover.intervals.pieces())
        r.max_length = std::max(r.max_length, p.right - p.left);
    const double scale = cover.m * std::log(double(L));
    if (scale > 0) {
        r.c2_fit = r.interval_count > 0 ? std::log(double(r.interval_count)) / scale : 0;
        r.c3_fit = r.max_length > 0 ? -std::log(r.max_length) / scale : 0;
    }
    const double count_cap = std::pow(double(L), c2 * cover.m);
    const double length_cap = std::pow(double(L), -c3 * cover.m);
    r.passes = r.interval_count == 0 ||
               (double(r.interval_count) <= count_cap * (1 + 1e-12) && r.max_length <= length_cap * (1 + 1e-12));
    return r;
}

double default_c3(int L, int B_size, double c2)
{
    require(L >= 2 && B_size >= 2, "need L >= 2 and |B| >= 2");
    return 1 + (c2 + 1) * std::log(double(L)) / std::log(double(B_size));
}

IntervalUnion<double> progression_neighborhoods(double K, double w)
{
    require(K > 0 && w >= 0, "need K > 0 and w >= 0");
    std::vector<Interval<double>> out;
    const auto top = static_cast<std::int64_t>(std::ceil(K + w));
    for (std::int64_t a = 0; a <= top; ++a)
        out.push_back({std::max(0.0, (double(a) - w) / K), std::min(1.0, (double(a) + w) / K)});
    return IntervalUnion<double>::from_unsorted(std::move(out));
}

double root_spacing(double xi0, int L, int j, int jp, std::int64_t k_range)
{
    require(0 <= j && j < jp, "need 0 <= j < jp");
    require(0 <= xi0 && xi0 < 1, "xi0 must lie in [0, 1)");
    require(k_range >= 1, "k_range must be positive");
    const std::int64_t top = checked_pow(L, jp);
    const std::int64_t kmax = std::min(checked_pow(L, j), k_range);
    const long double x0 = xi0;
    const long double d = std::pow(static_cast<long double>(L), jp - j);
    long double best = std::numeric_limits<long double>::infinity();
    for (std::int64_t k = 0; k < kmax; ++k) {
        const long double y = d * (x0 + static_cast<long double>(k)) - x0;
        const auto base = static_cast<std::int64_t>(std::floor(y));
        for (std::int64_t kp : {base, base + 1}) {
            if (kp < 0 || kp >= top)
                continue;
            best = std::min(best, std::abs(y - static_cast<long double>(kp)));
        }
    }
    return static_cast<double>(best / std::pow(static_cast<long double>(L), jp));
}

Rational root_spacing(const Rational& xi0, int L, int j, int jp, std::int64_t k_range)
{
    require(0 <= j && j < jp, "need 0 <= j < jp");
    require(xi0 >= 0 && xi0 < 1, "xi0 must lie in [0, 1)");
    require(k_range >= 1, "k_range must be positive");
    const BigInt top = boost::multiprecision::pow(BigInt(L), jp);
    const BigInt Lj = boost::multiprecision::pow(BigInt(L), j);
    const BigInt d = boost::multiprecision::pow(BigInt(L), jp - j);
    const BigInt kmax = std::min(Lj, BigInt(k_range));
    std::optional<Rational> best;
    for (BigInt k = 0; k < kmax; ++k) {
        const Rational y = Rational(d) * (xi0 + Rational(k)) - xi0;
        const BigInt base = boost::multiprecision::numerator(y) / boost::multiprecision::denominator(y);
        for (const BigInt& kp : {BigInt(base), BigInt(base + 1)}) {
            if (kp < 0 || kp >= top)
                continue;
            Rational diff = y - Rational(kp);
            if (diff < 0)
                diff = -diff;
            if (!best || diff < *best)
                best = diff;
        }
    }
    return *best / Rational(top);
}

SpacingFit fit_root_spacing(double xi0, int L, int max_level)
{
    require(max_level >= 1, "max_level must be >= 1");
    SpacingFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool degenerate = false;
    for (int j = 0; j < max_level; ++j)
        for (int jp = j + 1; jp <= max_level; ++jp) {
            const double s = root_spacing(xi0, L, j, jp, 1 << 12);
            fit.samples.push_back({{j, jp}, s});
            if (s <= 0) {
                degenerate = true;
                continue;
            }
            const double x = jp - j;
            const double y = std::log(s * std::pow(double(L), j)) / std::log(double(L));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
    if (degenerate)
        return fit;
    const double n = static_cast<double>(fit.samples.size());
    const double denom = n * sxx - sx * sx;
    fit.alpha = denom > 0 ? -(n * sxy - sx * sy) / denom : -sy / sx;
    fit.C0 = std::numeric_limits<double>::infinity();
    for (const auto& [jj, s] : fit.samples) {
        const auto [j, jp] = jj;
        fit.C0 = std::min(fit.C0, s * std::pow(double(L), j) * std::pow(double(L), (jp - j) * fit.alpha));
    }
    return fit;
}

Rational GammaSet::measure() const { return Rational(BigInt(numerators.measure()), BigInt(denominator)); }

IntervalUnion<double> GammaSet::intervals() const { return scaled_down(numerators, denominator); }

double GammaSet::measure_double() const
{
    return static_cast<double>(numerators.measure()) / static_cast<double>(denominator);
}

Rational GammaSet::translation(int j, bool scaled) const
{
    require(0 <= j && j < static_cast<int>(translations.size()), "translation level out of range");
    const auto& tr = translations[static_cast<std::size_t>(j)];
    return Rational(BigInt(scaled ? tr.second : tr.first), BigInt(denominator));
}

GammaSet build_gamma(int L, const Rational& t, int m, const Rational& eta, int Q, std::int64_t search_budget)
{
    require(search_budget > 0, "search budget must be positive");
    const Lattice lat = make_lattice(L, t, m, eta, Q);
    GammaSet g;
    g.L = L;
    g.Q = Q;
    g.m = m;
    g.eta = eta;
    g.t = t;
    g.denominator = lat.D;
    auto S = IntervalUnion<std::int64_t>::single(0, lat.D);
    for (const auto& [gj, hj] : lat.levels) {
        std::int64_t taus[2];
        int slot = 0;
        for (const Progression& pr : {gj, hj}) {
            const auto [tau, kept] = best_translation(S, pr);
            S = S.intersect(teeth(pr, tau, 0, lat.D, search_budget));
            if (S.measure() != kept)
                throw CertificationFailure("translation search disagrees with the interval intersection");
            if (static_cast<std::int64_t>(S.size()) > search_budget)
                throw BudgetExceeded("Gamma has more pieces than the search budget");
            taus[slot++] = tau;
        }
        g.translations.push_back({taus[0], taus[1]});
    }
    g.numerators = std::move(S);
    if (g.numerators.empty())
        throw CertificationFailure("Gamma is empty");
    return g;
}

GammaSet gamma_from_intervals(int L, const Rational& t, int m, const Rational& eta,
                              const std::vector<Interval<Rational>>& pieces, int Q)
{
    Lattice lat = make_lattice(L, t, m, eta, Q);
    std::int64_t D = lat.D;
    for (const auto& p : pieces)
        for (const Rational* r : {&p.left, &p.right}) {
            const std::int64_t den = as_int64(boost::multiprecision::denominator(*r), "endpoint denominator");
            D = checked_mul(D / std::gcd(D, den), den);
        }
    GammaSet g;
    g.L = L;
    g.Q = Q;
    g.m = m;
    g.eta = eta;
    g.t = t;
    g.denominator = D;
    std::vector<Interval<std::int64_t>> num;
    for (const auto& p : pieces) {
        const Rational l = std::max(p.left, Rational(0)) * D, r = std::min(p.right, Rational(1)) * D;
        num.push_back({as_int64(boost::multiprecision::numerator(l), "endpoint"),
                       as_int64(boost::multiprecision::numerator(r), "endpoint")});
    }
    g.numerators = IntervalUnion<std::int64_t>::from_unsorted(std::move(num));
    require(!g.numerators.empty(), "Gamma must have positive measure");
    return g;
}

IntervalUnion<double> delta_set(const GammaSet& g)
{
    const Lattice lat = lattice_of(g);
    if (g.m == 0)
        return IntervalUnion<double>::single(-1, 1);
    return scaled_down(delta_exact(lat, kDefaultGammaBudget), lat.D);
}

bool in_delta(const GammaSet& g, const Rational& xi)
{
    const Rational half = g.eta / 2;
    auto near_int = [&](const Rational& y) {
        const BigInt fl = boost::multiprecision::numerator(y) / boost::multiprecision::denominator(y);
        Rational f = y - Rational(fl);
        if (f < 0)
            f += 1;
        return std::min(f, Rational(1 - f)) <= half;
    };
    Rational x = xi * g.Q;
    for (int j = 0; j < g.m; ++j) {
        if (!near_int(x) || !near_int(x * g.t))
            return false;
        x *= g.L;
    }
    return true;
}

double delta0_min(const std::vector<int>& digits, double eta, int Q)
{
    require(!digits.empty(), "empty digit set");
    require(eta > 0 && eta <= 1, "eta must lie in (0, 1]");
    require(Q >= 1, "Q must be >= 1");
    std::vector<TrigFactor> fs;
    add_factor(fs, digits, 1);
    const double w = eta / (2 * Q);
    std::vector<Interval<double>> pieces;
    for (int k = 0; k <= Q; ++k)
        pieces.push_back({std::max(0.0, double(k) / Q - w), std::min(1.0, double(k) / Q + w)});
    const MinResult r =
        certified_min(fs, IntervalUnion<double>::from_unsorted(std::move(pieces)), kernels::Exec::serial);
    return std::sqrt(std::max(0.0, r.lower));
}

SLVReport verify_slv(const GammaSet& g, const std::vector<int>& A, const std::vector<int>& B, int L,
                     kernels::Exec exec)
{
    require(L == g.L, "L does not match the Gamma set");
    require(!A.empty() && !B.empty(), "empty digit set");
    SLVReport r;
    r.measure = g.measure_double();
    const double logL = std::log(double(L));
    const double eta = to_double(g.eta);
    r.epsilon = 0.5 * (1 - (std::log(4.0) - 2 * std::log(eta)) / logL);
    r.measure_bound = r.C2 * std::pow(double(L), -(1 - r.epsilon) * g.m);
    r.add3 = r.measure >= r.measure_bound;
    if (g.m == 0) {
        r.add1 = r.add1_by_components = true;
        r.min_product = r.min_product_upper = 1;
        r.c_eta = 1;
        r.add2 = true;
        return r;
    }

    const Lattice lat = lattice_of(g);
    const long double t = to_double(g.t);
    const auto fs = level_factors(A, B, L, t, 0, g.m - 1);

    // differences of Gamma stay in Delta
    if (g.translations.size() == lat.levels.size()) {
        bool ok = true;
        for (const auto& piece : g.numerators.pieces())
            for (std::size_t j = 0; ok && j < lat.levels.size(); ++j)
                ok = piece_in_one_tooth(piece, lat.levels[j].first, g.translations[j].first) &&
                     piece_in_one_tooth(piece, lat.levels[j].second, g.translations[j].second);
        r.add1_by_components = ok;
    }
    const auto delta = delta_exact(lat, kDefaultGammaBudget);
    if (r.add1_by_components) {
        r.add1 = true;
    } else {
        const auto pieces = g.numerators.pieces();
        if (static_cast<std::int64_t>(pieces.size()) * static_cast<std::int64_t>(pieces.size()) > (1 << 24))
            throw BudgetExceeded("too many Gamma pieces for the pairwise difference check");
        std::vector<Interval<std::int64_t>> diffs;
        for (const auto& I : pieces)
            for (const auto& J : pieces)
                diffs.push_back({I.left - J.right, I.right - J.left});
        const auto diff = IntervalUnion<std::int64_t>::from_unsorted(std::move(diffs));
        r.add1 = diff.subset_of(delta);
        if (!r.add1) {
            const auto bad = scaled_down(diff.intersect(complement(delta, -lat.D, lat.D)), lat.D);
            double best = std::numeric_limits<double>::infinity(), arg = 0;
            // the product is even, so the positive side is searched first
            for (int side : {+1, -1}) {
                if (best < std::numeric_limits<double>::infinity())
                    break;
                for (const auto& p : bad.pieces()) {
                    if ((side > 0) != (p.left >= 0))
                        continue;
                    constexpr int samples = 2048;
                    for (int k = 0; k <= samples; ++k) {
                        const double x = p.left + (p.right - p.left) * k / samples;
                        const double v = product_abs2(fs, x);
                        if (v < best) {
                            best = v;
                            arg = x;
                        }
                    }
                }
            }
            r.add1_witness = arg;
        }
    }

    // min of the product over Delta
    const auto positive = scaled_down(delta.intersect(IntervalUnion<std::int64_t>::single(0, lat.D)), lat.D);
    const MinResult mr = certified_min(fs, positive, exec);
    r.min_product = std::max(0.0, mr.lower);
    r.min_product_upper = mr.upper;
    r.c_eta = std::min(delta0_min(A, eta, g.Q), delta0_min(B, eta, g.Q));
    r.C1 = r.c_eta > 0 ? 4 * std::log(1 / r.c_eta) / logL : std::numeric_limits<double>::infinity();
    r.C1_realized =
        r.min_product > 0 ? -std::log(r.min_product) / (g.m * logL) : std::numeric_limits<double>::infinity();
    r.add2 = r.c_eta > 0 && r.min_product >= std::pow(r.c_eta, 4 * g.m) * (1 - 1e-4);
    return r;
}

double Autocorrelation::evaluate(double x) const
{
    if (breakpoints.empty() || x <= breakpoints.front() || x >= breakpoints.back())
        return 0;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    const auto i = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    const double w = (x - breakpoints[i]) / (breakpoints[i + 1] - breakpoints[i]);
    return left_values[i] + w * (right_values[i] - left_values[i]);
}

Autocorrelation autocorrelation(const GammaSet& g)
{
    const auto pieces = g.numerators.pieces();
    const auto N = static_cast<std::int64_t>(pieces.size());
    if (N * N > (std::int64_t{1} << 24))
        throw BudgetExceeded("too many Gamma pieces for the autocorrelation");
    std::vector<std::pair<std::int64_t, std::int64_t>> events;
    events.reserve(static_cast<std::size_t>(4 * N * N));
    for (const auto& I : pieces)
        for (const auto& J : pieces) {
            const std::int64_t k1 = std::min(I.right - J.right, I.left - J.left);
            const std::int64_t k2 = std::max(I.right - J.right, I.left - J.left);
            events.push_back({I.left - J.right, +1});
            events.push_back({k1, -1});
            events.push_back({k2, -1});
            events.push_back({I.right - J.left, +1});
        }
    std::sort(events.begin(), events.end());
    const double D = static_cast<double>(g.denominator);
    const double scale = static_cast<double>(g.numerators.measure());
    Autocorrelation h;
    std::int64_t value = 0, slope = 0;
    std::size_t i = 0;
    while (i < events.size()) {
        const std::int64_t x = events[i].first;
        while (i < events.size() && events[i].first == x)
            slope += events[i++].second;
        h.breakpoints.push_back(static_cast<double>(x) / D);
        if (i < events.size()) {
            const std::int64_t next = value + slope * (events[i].first - x);
            h.left_values.push_back(static_cast<double>(value) / scale);
            h.right_values.push_back(static_cast<double>(next) / scale);
            value = next;
        }
    }
    return h;
}

double hhat(const GammaSet& g, double xi)
{
    std::complex<double> s{0, 0};
    const auto gamma = g.intervals();
    for (const auto& p : gamma.pieces()) {
        const double len = p.right - p.left;
        if (std::abs(xi * len) < 1e-9) {
            s += std::polar(len, -kTwoPi * xi * 0.5 * (p.left + p.right));
            continue;
        }
        const auto e = [&](double x) { return std::polar(1.0, -kTwoPi * xi * x); };
        s += (e(p.right) - e(p.left)) / std::complex<double>(0, -kTwoPi * xi);
    }
    return std::norm(s) / g.measure_double();
}

GammaChain gamma_want_integral(const GammaSet& g, const sets::ProductSpec& spec, int n, double nodes_per_unit,
                               kernels::Exec exec)
{
    require(n > g.m, "need n > m");
    require(spec.L == g.L, "L does not match the Gamma set");
    const double t = to_double(g.t);
    const double need = 16 * std::pow(double(g.L), n - 1);
    if (nodes_per_unit == 0)
        nodes_per_unit = 8 * need;
    if (nodes_per_unit < need)
        throw InvalidArgument("under-resolved grid: " + std::to_string(nodes_per_unit) + " < " +
                              std::to_string(need) + " nodes per unit");

    GammaChain c;
    c.gamma_measure = g.measure_double();
    c.diagonal = std::pow(double(g.L), g.m - n) * c.gamma_measure;

    const Autocorrelation h = autocorrelation(g);
    const trig::ProductEvaluator P1{spec, t, g.m, n - 1};
    const double cut = std::pow(double(g.L), -g.m);

    struct Segment {
        double x0, x1, v0, v1;
    };
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < h.breakpoints.size(); ++i) {
        if (h.left_values[i] == 0 && h.right_values[i] == 0)
            continue;
        const Segment s{h.breakpoints[i], h.breakpoints[i + 1], h.left_values[i], h.right_values[i]};
        // split at +-cut so the near-origin part is a union of whole segments
        double knots[4] = {s.x0, -cut, cut, s.x1};
        std::sort(knots + 1, knots + 3);
        double lo = s.x0;
        for (double k : {knots[1], knots[2], s.x1}) {
            if (k <= lo || k > s.x1)
                continue;
            const auto at = [&](double x) { return s.v0 + (s.v1 - s.v0) * (x - s.x0) / (s.x1 - s.x0); };
            segs.push_back({lo, k, at(lo), at(k)});
            lo = k;
        }
    }

    const auto count = static_cast<std::int64_t>(segs.size());
    std::vector<double> with_h(segs.size()), plain(segs.size());
    std::vector<std::int64_t> nodes(segs.size());
#pragma omp parallel for schedule(dynamic, 64) if (exec == kernels::Exec::parallel)
    for (std::int64_t i = 0; i < count; ++i) {
        const Segment& s = segs[static_cast<std::size_t>(i)];
        const double len = s.x1 - s.x0;
        const auto k = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(len * nodes_per_unit)));
        const double step = len / static_cast<double>(k);
        kernels::CompensatedSum a, b;
        for (std::int64_t q = 0; q < k; ++q) {
            const double x = s.x0 + (static_cast<double>(q) + 0.5) * step;
            const double w = s.v0 + (s.v1 - s.v0) * (x - s.x0) / len;
            const double p = P1.abs2(x);
            a.add(p * w);
            b.add(p);
        }
        with_h[static_cast<std::size_t>(i)] = a.value() * step;
        plain[static_cast<std::size_t>(i)] = b.value() * step;
        nodes[static_cast<std::size_t>(i)] = k;
    }
    kernels::CompensatedSum wh, on, near;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        wh.add(with_h[i]);
        on.add(plain[i]);
        if (segs[i].x0 >= -cut && segs[i].x1 <= cut)
            near.add(plain[i]);
        c.nodes += nodes[i];
    }
    c.with_h = wh.value();
    c.on_difference = on.value();
    c.near_origin = near.value();
    c.away = c.on_difference - c.near_origin;

    std::vector<Interval<double>> pos;
    for (const auto& s : segs)
        if (s.x0 >= 0)
            pos.push_back({s.x0, s.x1});
    const auto diff_pos = IntervalUnion<double>::from_unsorted(std::move(pos));
    if (g.m == 0) {
        c.min_product = 1;
    } else {
        const auto fs = level_factors(spec.A, spec.B, spec.L, t, 0, g.m - 1);
        c.min_product = std::max(0.0, certified_min(fs, diff_pos, exec).lower);
    }
    c.chain_bound = c.min_product * c.away / 2;

    const trig::ProductEvaluator full{spec, t, 0, n - 1};
    c.final_integral = trig::integrate_abs2(full, cut, 1.0, 0, exec).value;
    c.links_hold = c.with_h >= c.diagonal * (1 - 1e-6) && c.on_difference >= c.with_h * (1 - 1e-9) &&
                   c.final_integral >= c.chain_bound * (1 - 1e-6);
    return c;
}

} // namespace buffon::ssv
