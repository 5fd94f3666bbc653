#include "buffon/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "buffon/errors.hpp"

namespace buffon::cyclo {

namespace {

using LComplex = std::complex<long double>;

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

// Pseudo-remainder of a by b: lc(b)^{da - db + 1} a mod b.
IntPoly pseudo_rem(IntPoly a, const IntPoly& b)
{
    const int db = b.degree();
    const BigInt lb = b.leading();
    while (!a.is_zero() && a.degree() >= db) {
        const int shift = a.degree() - db;
        const BigInt la = a.leading();
        a = a * IntPoly::constant(lb) - IntPoly::monomial(static_cast<std::size_t>(shift), la) * b;
    }
    return a;
}

struct ExtGcd {
    BigInt g, x, y;
};

ExtGcd ext_gcd(BigInt a, BigInt b)
{
    BigInt x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        BigInt q = a / b;
        BigInt t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0)
        return {BigInt(-a), BigInt(-x0), BigInt(-y0)};
    return {a, x0, y0};
}

std::vector<LComplex> durand_kerner(const IntPoly& p)
{
    const int d = p.degree();
    std::vector<LComplex> roots;
    if (d < 1)
        return roots;
    std::vector<long double> c(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k)
        c[static_cast<std::size_t>(k)] = p.coeff(static_cast<std::size_t>(k)).convert_to<long double>();
    const long double lead = c.back();
    for (auto& v : c)
        v /= lead;
    auto eval = [&](LComplex z) {
        LComplex s = 0;
        for (int k = d; k >= 0; --k)
            s = s * z + c[static_cast<std::size_t>(k)];
        return s;
    };
    const LComplex seed(0.4L, 0.9L);
    LComplex w = 1;
    for (int k = 0; k < d; ++k) {
        roots.push_back(w);
        w *= seed;
    }
    for (int iter = 0; iter < 5000; ++iter) {
        long double change = 0;
        for (int i = 0; i < d; ++i) {
            LComplex den = 1;
            for (int j = 0; j < d; ++j)
                if (j != i)
                    den *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
            const LComplex step = eval(roots[static_cast<std::size_t>(i)]) / den;
            roots[static_cast<std::size_t>(i)] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-17L)
            break;
    }
    return roots;
}

// e^{-i d theta / 2} g(e^{i theta}) for palindromic g of even degree d; real-valued.
double palindromic_trig(const IntPoly& g, double theta)
{
    const int half = g.degree() / 2;
    long double s = g.coeff(static_cast<std::size_t>(half)).convert_to<long double>();
    for (int k = 0; k < half; ++k)
        s += 2 * g.coeff(static_cast<std::size_t>(k)).convert_to<long double>() *
             std::cos(static_cast<long double>(half - k) * theta);
    return static_cast<double>(s);
}

// Angles theta in (0, 2 pi) of simple circle roots, located by sign changes.
std::vector<double> circle_root_angles(const IntPoly& g)
{
    std::vector<double> out;
    if (g.degree() < 2)
        return out;
    const double two_pi = 2 * std::numbers::pi;
    const int grid = 4096 * (g.degree() + 1);
    double prev_x = 0, prev_v = palindromic_trig(g, 0);
    for (int k = 1; k <= grid; ++k) {
        const double x = two_pi * k / grid;
        const double v = palindromic_trig(g, x);
        if ((prev_v < 0) != (v < 0)) {
            double lo = prev_x, hi = x, flo = prev_v;
            while (hi - lo > 1e-14) {
                const double mid = 0.5 * (lo + hi);
                const double fm = palindromic_trig(g, mid);
                if ((fm < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_v = v;
    }
    return out;
}

// Certifies min |p(e^{i theta})| > 0 by Lipschitz branch and bound.
bool certify_no_circle_roots(const IntPoly& p)
{
    if (p.degree() < 1)
        return !p.is_zero();
    double lip = 0, scale = 0;
    for (int k = 0; k <= p.degree(); ++k) {
        const double a = std::abs(p.coeff(static_cast<std::size_t>(k)).convert_to<double>());
        lip += k * a;
        scale += a;
    }
    const double two_pi = 2 * std::numbers::pi;
    std::vector<std::pair<double, double>> stack; // (center, half width)
    const int cells = 256;
    for (int k = 0; k < cells; ++k)
        stack.push_back({two_pi * (k + 0.5) / cells, two_pi / (2 * cells)});
    while (!stack.empty()) {
        auto [c, hw] = stack.back();
        stack.pop_back();
        const double v = std::abs(p.evaluate(std::polar(1.0, c)));
        if (v - lip * hw > 1e-12 * scale)
            continue;
        if (hw < 1e-12)
            return false;
        stack.push_back({c - hw / 2, hw / 2});
        stack.push_back({c + hw / 2, hw / 2});
    }
    return true;
}

std::optional<IntPoly> round_to_intpoly(const std::vector<LComplex>& roots)
{
    std::vector<LComplex> c{1};
    for (auto z : roots) {
        std::vector<LComplex> next(c.size() + 1, 0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= z * c[k];
        }
        c = std::move(next);
    }
    std::vector<BigInt> out;
    for (auto v : c) {
        const long double r = std::round(v.real());
        if (std::abs(v.imag()) > 1e-6L || std::abs(v.real() - r) > 1e-6L)
            return std::nullopt;
        out.emplace_back(static_cast<long long>(r));
    }
    return IntPoly(out);
}

} // namespace

IntPoly::IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

void IntPoly::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

IntPoly IntPoly::constant(const BigInt& c) { return IntPoly({c}); }

IntPoly IntPoly::monomial(std::size_t degree, const BigInt& c)
{
    std::vector<BigInt> v(degree + 1, 0);
    v[degree] = c;
    return IntPoly(std::move(v));
}

IntPoly IntPoly::from_digits(const std::vector<int>& digits)
{
    std::vector<BigInt> v;
    for (int a : digits) {
        require(a >= 0, "digits must be nonnegative");
        if (v.size() <= static_cast<std::size_t>(a))
            v.resize(static_cast<std::size_t>(a) + 1, 0);
        v[static_cast<std::size_t>(a)] += 1;
    }
    return IntPoly(std::move(v));
}

IntPoly IntPoly::binomial(std::size_t n) { return monomial(n) - constant(1); }

IntPoly IntPoly::compose_power(std::size_t r) const
{
    require(r >= 1, "power must be >= 1");
    if (is_zero())
        return {};
    std::vector<BigInt> v((c_.size() - 1) * r + 1, 0);
    for (std::size_t k = 0; k < c_.size(); ++k)
        v[k * r] = c_[k];
    return IntPoly(std::move(v));
}

IntPoly IntPoly::reciprocal() const
{
    std::vector<BigInt> v(c_.rbegin(), c_.rend());
    return IntPoly(std::move(v));
}

IntPoly IntPoly::derivative() const
{
    std::vector<BigInt> v;
    for (std::size_t k = 1; k < c_.size(); ++k)
        v.push_back(c_[k] * static_cast<long long>(k));
    return IntPoly(std::move(v));
}

BigInt IntPoly::content() const
{
    BigInt g = 0;
    for (const auto& v : c_)
        g = boost::multiprecision::gcd(g, abs_big(v));
    return g;
}

IntPoly IntPoly::primitive() const
{
    if (is_zero())
        return {};
    BigInt g = content();
    if (leading() < 0)
        g = -g;
    std::vector<BigInt> v;
    for (const auto& x : c_)
        v.push_back(x / g);
    return IntPoly(std::move(v));
}

std::complex<double> IntPoly::evaluate(std::complex<double> z) const
{
    std::complex<double> s = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        s = s * z + it->convert_to<double>();
    return s;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b)
{
    std::vector<BigInt> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t k = 0; k < a.c_.size(); ++k)
        v[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k)
        v[k] += b.c_[k];
    return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b)
{
    std::vector<BigInt> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t k = 0; k < a.c_.size(); ++k)
        v[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k)
        v[k] -= b.c_[k];
    return IntPoly(std::move(v));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<BigInt> v(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            v[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPoly(std::move(v));
}

std::string IntPoly::to_string() const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0)
            continue;
        BigInt c = c_[k];
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        c = abs_big(c);
        if (k == 0 || c != 1)
            os << c;
        if (k >= 1)
            os << "x";
        if (k >= 2)
            os << "^" << k;
        first = false;
    }
    return os.str();
}

DivResult divmod(const IntPoly& a, const IntPoly& b)
{
    require(!b.is_zero(), "division by zero polynomial");
    require(b.leading() == 1 || b.leading() == -1, "divisor must be monic up to sign");
    std::vector<BigInt> rem = a.coeffs();
    const int db = b.degree();
    std::vector<BigInt> quo(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0, 0);
    const auto& bc = b.coeffs();
    for (int k = a.degree(); k >= db; --k) {
        const BigInt q = rem[static_cast<std::size_t>(k)] * b.leading();
        if (q == 0)
            continue;
        quo[static_cast<std::size_t>(k - db)] = q;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k - db + j)] -= q * bc[static_cast<std::size_t>(j)];
    }
    return {IntPoly(std::move(quo)), IntPoly(std::move(rem))};
}

bool divides(const IntPoly& b, const IntPoly& a) { return divmod(a, b).remainder.is_zero(); }

IntPoly exact_div(const IntPoly& a, const IntPoly& b)
{
    auto r = divmod(a, b);
    require(r.remainder.is_zero(), "polynomial does not divide");
    return r.quotient;
}

IntPoly gcd(const IntPoly& a, const IntPoly& b)
{
    IntPoly x = a.primitive(), y = b.primitive();
    if (x.is_zero())
        return y;
    if (y.is_zero())
        return x;
    if (x.degree() < y.degree())
        std::swap(x, y);
    while (!y.is_zero()) {
        IntPoly r = pseudo_rem(x, y).primitive();
        x = std::move(y);
        y = std::move(r);
    }
    return x.primitive();
}

std::int64_t totient(std::int64_t s)
{
    require(s >= 1, "totient needs s >= 1");
    std::int64_t out = s;
    for (std::int64_t p = 2; p * p <= s; ++p)
        if (s % p == 0) {
            while (s % p == 0)
                s /= p;
            out -= out / p;
        }
    if (s > 1)
        out -= out / s;
    return out;
}

const IntPoly& cyclotomic(int s)
{
    require(s >= 1, "cyclotomic index must be >= 1");
    static std::map<int, IntPoly> cache;
    static std::recursive_mutex mu;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = cache.find(s);
    if (it != cache.end())
        return it->second;
    IntPoly p = IntPoly::binomial(static_cast<std::size_t>(s));
    for (int d = 1; d < s; ++d)
        if (s % d == 0)
            p = exact_div(p, cyclotomic(d));
    return cache.emplace(s, std::move(p)).first->second;
}

std::pair<std::map<int, int>, IntPoly> strip_cyclotomic(const IntPoly& p)
{
    require(!p.is_zero(), "zero polynomial");
    std::map<int, int> mult;
    IntPoly rest = p;
    const int deg = p.degree();
    // phi(s) >= sqrt(s / 2), so phi(s) <= deg forces s <= 2 deg^2.
    const int limit = std::max(2, 2 * deg * deg + 2);
    for (int s = 1; s <= limit && rest.degree() >= 1; ++s) {
        if (totient(s) > rest.degree())
            continue;
        const IntPoly& phi = cyclotomic(s);
        while (rest.degree() >= phi.degree()) {
            auto r = divmod(rest, phi);
            if (!r.remainder.is_zero())
                break;
            rest = std::move(r.quotient);
            ++mult[s];
        }
    }
    return {mult, rest};
}

IntPoly Factorization::reassemble() const
{
    IntPoly out = A3 * A4;
    for (const auto& [s, k] : multiplicities)
        for (int i = 0; i < k; ++i)
            out = out * cyclotomic(s);
    return out;
}

Factorization factorize(const std::vector<int>& A, int gcd_reference)
{
    require(!A.empty(), "digit set must be nonempty");
    require(gcd_reference >= 1, "gcd reference must be >= 1");
    Factorization f;
    f.gcd_reference = gcd_reference;
    auto [mult, rest] = strip_cyclotomic(IntPoly::from_digits(A));
    f.multiplicities = mult;
    for (const auto& [s, k] : mult)
        (std::gcd(s, gcd_reference) == 1 ? f.S2 : f.S1).push_back(s);

    f.A3 = IntPoly::constant(1);
    f.A4 = rest;
    IntPoly g = gcd(rest, rest.reciprocal());
    if (g.degree() >= 2) {
        const IntPoly sq = exact_div(g, gcd(g, g.derivative()));
        const auto angles = circle_root_angles(sq);
        const auto roots = durand_kerner(sq);
        std::vector<LComplex> on_circle, off_circle;
        for (auto z : roots)
            (std::abs(std::abs(z) - 1.0L) < 1e-6L ? on_circle : off_circle).push_back(z);
        if (on_circle.size() != angles.size())
            throw CertificationFailure("circle root classification failed: " + std::to_string(on_circle.size()) +
                                       " numeric vs " + std::to_string(angles.size()) + " certified");
        if (!angles.empty()) {
            // Conjugation-closed groups of off-circle roots.
            std::vector<std::vector<LComplex>> groups;
            std::vector<bool> used(off_circle.size(), false);
            for (std::size_t i = 0; i < off_circle.size(); ++i) {
                if (used[i])
                    continue;
                used[i] = true;
                std::vector<LComplex> grp{off_circle[i]};
                if (std::abs(off_circle[i].imag()) > 1e-9L) {
                    std::size_t best = off_circle.size();
                    long double bd = 1e9L;
                    for (std::size_t j = 0; j < off_circle.size(); ++j)
                        if (!used[j] && std::abs(off_circle[j] - std::conj(off_circle[i])) < bd) {
                            bd = std::abs(off_circle[j] - std::conj(off_circle[i]));
                            best = j;
                        }
                    if (best == off_circle.size())
                        throw CertificationFailure("unpaired complex root");
                    used[best] = true;
                    grp.push_back(off_circle[best]);
                }
                groups.push_back(grp);
            }
            if (groups.size() > 20)
                throw BudgetExceeded("too many off-circle roots for the minimal-factor search");
            std::optional<IntPoly> best;
            const std::uint32_t total = 1u << groups.size();
            for (std::uint32_t mask = 0; mask < total; ++mask) {
                std::vector<LComplex> pick = on_circle;
                for (std::size_t k = 0; k < groups.size(); ++k)
                    if (mask >> k & 1u)
                        pick.insert(pick.end(), groups[k].begin(), groups[k].end());
                if (best && static_cast<int>(pick.size()) >= best->degree())
                    continue;
                auto cand = round_to_intpoly(pick);
                if (cand && divides(*cand, rest))
                    best = cand;
            }
            if (!best)
                throw CertificationFailure("no integer factor carries the circle roots");
            IntPoly a3 = *best;
            IntPoly power = a3;
            IntPoly remaining = exact_div(rest, a3);
            while (remaining.degree() >= a3.degree() && divides(a3, remaining)) {
                remaining = exact_div(remaining, a3);
                power = power * a3;
            }
            f.A3 = power;
            f.A4 = remaining;
            for (double th : angles)
                f.A3_roots.push_back(th / (2 * std::numbers::pi));
            std::sort(f.A3_roots.begin(), f.A3_roots.end());
        }
    }
    f.A4_certified = certify_no_circle_roots(f.A4);
    if (!f.A4_certified)
        throw CertificationFailure("could not certify that A4 has no roots on the unit circle");
    return f;
}

bool telescope_check(const std::vector<int>& A, const std::vector<int>& B, int r, int k_num, int k_den)
{
    require(r >= 1 && k_num >= 0 && k_den >= 0, "exponents must be nonnegative, r >= 1");
    const IntPoly lhs = IntPoly::from_digits(A) * IntPoly::from_digits(B).compose_power(static_cast<std::size_t>(r)) *
                        IntPoly::binomial(static_cast<std::size_t>(k_den));
    return lhs == IntPoly::binomial(static_cast<std::size_t>(k_num));
}

IntPoly telescope_product(const std::vector<int>& A, const std::vector<int>& B, int L, int r, int m)
{
    require(L >= 2 && r >= 1 && m >= 0, "bad telescoping parameters");
    const IntPoly a = IntPoly::from_digits(A), b = IntPoly::from_digits(B);
    IntPoly out = IntPoly::constant(1);
    std::size_t Lj = 1;
    for (int j = 1; j <= m; ++j) {
        Lj = static_cast<std::size_t>(checked_mul(static_cast<std::int64_t>(Lj), L));
        out = out * a.compose_power(Lj) * b.compose_power(Lj * static_cast<std::size_t>(r));
    }
    return out;
}

bool vanishing_sum_check(const std::vector<int>& A, int N)
{
    require(N >= 1, "N must be >= 1");
    const IntPoly p = IntPoly::from_digits(A);
    return p.is_zero() || divides(cyclotomic(N), p);
}

bool vanishing_weights(const std::vector<std::int64_t>& weights)
{
    require(!weights.empty(), "empty weight vector");
    std::vector<BigInt> c(weights.begin(), weights.end());
    const IntPoly p(std::move(c));
    return p.is_zero() || divides(cyclotomic(static_cast<int>(weights.size())), p);
}

std::vector<BigInt> PolygonDecomposition::resum() const
{
    std::vector<BigInt> w(static_cast<std::size_t>(N), 0);
    for (const auto& t : terms)
        for (int k = 0; k < t.p; ++k)
            w[static_cast<std::size_t>(t.r + k * (N / t.p))] += t.c;
    return w;
}

std::vector<int> prime_factors(std::int64_t n)
{
    require(n >= 1, "n must be >= 1");
    std::vector<int> out;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(static_cast<int>(p));
            while (n % p == 0)
                n /= p;
        }
    if (n > 1)
        out.push_back(static_cast<int>(n));
    return out;
}

PolygonDecomposition rdbs_decompose(const std::vector<std::int64_t>& weights)
{
    const int N = static_cast<int>(weights.size());
    require(N >= 1, "empty weight vector");
    require(vanishing_weights(weights), "not a vanishing sum");

    std::vector<std::pair<int, int>> columns; // (p, r)
    for (int p : prime_factors(N))
        for (int r = 0; r < N / p; ++r)
            columns.push_back({p, r});
    const std::size_t K = columns.size();

    // M (N x K) with column operations mirrored in U (K x K): M_orig U = M.
    std::vector<std::vector<BigInt>> M(static_cast<std::size_t>(N), std::vector<BigInt>(K, 0));
    for (std::size_t j = 0; j < K; ++j)
        for (int k = 0; k < columns[j].first; ++k)
            M[static_cast<std::size_t>(columns[j].second + k * (N / columns[j].first))][j] = 1;
    std::vector<std::vector<BigInt>> U(K, std::vector<BigInt>(K, 0));
    for (std::size_t j = 0; j < K; ++j)
        U[j][j] = 1;

    auto combine = [&](std::size_t c1, std::size_t c2, const BigInt& a, const BigInt& b, const BigInt& c,
                       const BigInt& d) {
        // (col c1, col c2) <- (a c1 + b c2, c c1 + d c2)
        for (auto* mat : {&M, &U})
            for (auto& row : *mat) {
                BigInt x = row[c1], y = row[c2];
                row[c1] = a * x + b * y;
                row[c2] = c * x + d * y;
            }
    };

    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col)
    std::size_t col = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(N) && col < K; ++i) {
        for (std::size_t j = col + 1; j < K; ++j) {
            if (M[i][j] == 0)
                continue;
            if (M[i][col] == 0) {
                combine(col, j, 0, 1, 1, 0);
                continue;
            }
            auto e = ext_gcd(M[i][col], M[i][j]);
            const BigInt a = M[i][col] / e.g, b = M[i][j] / e.g;
            combine(col, j, e.x, e.y, -b, a);
        }
        if (M[i][col] != 0) {
            pivots.push_back({i, col});
            ++col;
        }
    }

    std::vector<BigInt> y(K, 0);
    std::size_t next = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(N); ++i) {
        BigInt residual = weights[i];
        for (std::size_t q = 0; q < K; ++q)
            if (y[q] != 0)
                residual -= M[i][q] * y[q];
        if (next < pivots.size() && pivots[next].first == i) {
            const std::size_t p = pivots[next].second;
            if (residual % M[i][p] != 0)
                throw CertificationFailure("no integral polygon decomposition found");
            y[p] = residual / M[i][p];
            ++next;
        } else if (residual != 0) {
            throw CertificationFailure("no integral polygon decomposition found");
        }
    }

    PolygonDecomposition out;
    out.N = N;
    for (std::size_t j = 0; j < K; ++j) {
        BigInt c = 0;
        for (std::size_t q = 0; q < K; ++q)
            c += U[j][q] * y[q];
        if (c != 0)
            out.terms.push_back({columns[j].first, columns[j].second, c});
    }
    const auto back = out.resum();
    for (int k = 0; k < N; ++k)
        if (back[static_cast<std::size_t>(k)] != weights[static_cast<std::size_t>(k)])
            throw CertificationFailure("polygon decomposition does not re-sum to the input");
    return out;
}

std::optional<PolygonDecomposition> de_bruijn_decompose(const std::vector<std::int64_t>& weights, int N)
{
    require(N >= 1 && static_cast<int>(weights.size()) == N, "weights must have length N");
    const auto primes = prime_factors(N);
    require(primes.size() <= 2, "N must be of the form p^a q^b");
    for (auto w : weights)
        require(w >= 0, "weights must be nonnegative");
    require(vanishing_weights(weights), "not a vanishing sum");

    std::vector<std::int64_t> w = weights;
    std::vector<PolygonTerm> chosen;
    std::function<bool()> dfs = [&]() -> bool {
        auto it = std::find_if(w.begin(), w.end(), [](std::int64_t v) { return v > 0; });
        if (it == w.end())
            return true;
        const int i = static_cast<int>(it - w.begin());
        for (int p : primes) {
            const int step = N / p;
            const int r = i % step;
            bool ok = true;
            for (int k = 0; k < p && ok; ++k)
                ok = w[static_cast<std::size_t>(r + k * step)] > 0;
            if (!ok)
                continue;
            for (int k = 0; k < p; ++k)
                --w[static_cast<std::size_t>(r + k * step)];
            chosen.push_back({p, r, 1});
            if (dfs())
                return true;
            chosen.pop_back();
            for (int k = 0; k < p; ++k)
                ++w[static_cast<std::size_t>(r + k * step)];
        }
        return false;
    };
    if (!dfs())
        return std::nullopt;

    PolygonDecomposition out;
    out.N = N;
    std::map<std::pair<int, int>, BigInt> merged;
    for (const auto& t : chosen)
        merged[{t.p, t.r}] += 1;
    for (const auto& [key, c] : merged)
        out.terms.push_back({key.first, key.second, c});
    return out;
}

bool lam_leung_check(std::int64_t k, std::int64_t N)
{
    require(k >= 0 && N >= 1, "need k >= 0 and N >= 1");
    const auto primes = prime_factors(N);
    std::vector<bool> reach(static_cast<std::size_t>(k) + 1, false);
    reach[0] = true;
    for (std::int64_t v = 1; v <= k; ++v)
        for (int p : primes)
            if (v >= p && reach[static_cast<std::size_t>(v - p)]) {
                reach[static_cast<std::size_t>(v)] = true;
                break;
            }
    return reach[static_cast<std::size_t>(k)];
}

std::vector<int> slv_indices(const std::vector<int>& A, int gcd_reference)
{
    require(gcd_reference >= 1, "gcd reference must be >= 1");
    std::vector<int> out;
    for (const auto& [s, k] : strip_cyclotomic(IntPoly::from_digits(A)).first)
        if (std::gcd(s, gcd_reference) == 1)
            out.push_back(s);
    return out;
}

const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::witness:
        return "witness";
    case CheckStatus::none:
        return "none";
    case CheckStatus::vacuous:
        return "vacuous";
    }
    return "?";
}

namespace {

std::int64_t lcm_of(const std::vector<int>& S)
{
    std::int64_t N = 1;
    for (int s : S)
        N = checked_mul(N / gcd64(N, s), s);
    return N;
}

bool avoids(const std::vector<int>& S, std::int64_t Q)
{
    return std::none_of(S.begin(), S.end(), [&](int s) { return Q % s == 0; });
}

} // namespace

std::int64_t conjecture_T(const std::vector<int>& S, std::int64_t Q)
{
    std::int64_t T = 1;
    for (int s : S)
        T = std::max<std::int64_t>(T, s / gcd64(s, Q));
    return T;
}

CompatibleResult compatible_check(const std::vector<int>& A, int gcd_reference)
{
    require(!A.empty(), "digit set must be nonempty");
    CompatibleResult r;
    r.S = slv_indices(A, gcd_reference == 0 ? static_cast<int>(A.size()) : gcd_reference);
    if (r.S.empty()) {
        r.status = CheckStatus::vacuous;
        return r;
    }
    r.N = lcm_of(r.S);
    const auto size = static_cast<std::int64_t>(A.size());
    for (std::int64_t P = 2; P < r.N; ++P) {
        if (r.N % P != 0)
            continue;
        const std::int64_t Q = r.N / P;
        if (Q > 1 && avoids(r.S, Q) && size > P) {
            r.status = CheckStatus::witness;
            r.P = P;
            r.Q = Q;
            return r;
        }
    }
    return r;
}

ConjectureResult conjecture_check(const std::vector<int>& A, int gcd_reference)
{
    require(!A.empty(), "digit set must be nonempty");
    ConjectureResult r;
    r.S = slv_indices(A, gcd_reference == 0 ? static_cast<int>(A.size()) : gcd_reference);
    if (r.S.empty()) {
        r.status = CheckStatus::vacuous;
        return r;
    }
    r.N = lcm_of(r.S);
    const auto size = static_cast<std::int64_t>(A.size());
    for (std::int64_t Q = 1; Q <= r.N; ++Q) {
        if (r.N % Q != 0 || !avoids(r.S, Q))
            continue;
        const std::int64_t T = conjecture_T(r.S, Q);
        if (size > T && (r.status != CheckStatus::witness || T < r.T)) {
            r.status = CheckStatus::witness;
            r.Q = Q;
            r.T = T;
        }
    }
    return r;
}

} // namespace buffon::cyclo
