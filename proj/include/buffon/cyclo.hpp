#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "buffon/rational.hpp"

namespace buffon::cyclo {

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs);

    static IntPoly constant(const BigInt& c);
    static IntPoly monomial(std::size_t degree, const BigInt& c = 1);
    /// sum_{a in A} x^a; repeated digits add up.
    static IntPoly from_digits(const std::vector<int>& digits);
    /// x^n - 1
    static IntPoly binomial(std::size_t n);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<BigInt>& coeffs() const { return c_; }
    BigInt coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }
    const BigInt& leading() const { return c_.back(); }

    /// p(x^r)
    IntPoly compose_power(std::size_t r) const;
    /// x^deg p(1/x)
    IntPoly reciprocal() const;
    IntPoly derivative() const;
    /// gcd of the coefficients (positive), 0 for the zero polynomial.
    BigInt content() const;
    IntPoly primitive() const;

    std::complex<double> evaluate(std::complex<double> z) const;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend bool operator==(const IntPoly& a, const IntPoly& b) = default;

    std::string to_string() const;

private:
    void trim();
    std::vector<BigInt> c_;
};

struct DivResult {
    IntPoly quotient;
    IntPoly remainder;
};

/// Division over Z; requires the divisor's leading coefficient to be +-1.
DivResult divmod(const IntPoly& a, const IntPoly& b);

/// True when b divides a over Z (b monic up to sign).
bool divides(const IntPoly& b, const IntPoly& a);

/// Exact quotient a / b; throws InvalidArgument when b does not divide a.
IntPoly exact_div(const IntPoly& a, const IntPoly& b);

/// Primitive gcd over Q[x], normalized to positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// Euler totient.
std::int64_t totient(std::int64_t s);

/// Phi_s, memoized.
const IntPoly& cyclotomic(int s);

/// All s with Phi_s | p (p nonzero), with multiplicity; the cyclotomic-free cofactor is returned.
std::pair<std::map<int, int>, IntPoly> strip_cyclotomic(const IntPoly& p);

/// Definition-1.4 split of A(x). S1 holds indices with gcd(s, ref) != 1, S2 those
/// with gcd(s, ref) == 1, where ref is `gcd_reference` (L in the definition).
struct Factorization {
    int gcd_reference = 0;
    std::vector<int> S1;
    std::vector<int> S2;
    std::map<int, int> multiplicities;
    IntPoly A3;                       ///< integer factor carrying the non-cyclotomic circle roots
    std::vector<double> A3_roots;     ///< angles xi in (0, 1) of those roots, ascending
    IntPoly A4;                       ///< no roots on the unit circle (certified)
    bool A4_certified = false;

    /// Product of every reported factor; equals A(x).
    IntPoly reassemble() const;
};

/// Throws CertificationFailure when circle roots cannot be classified.
Factorization factorize(const std::vector<int>& A, int gcd_reference);

/// True when A(x) B(x^r) (x^{k_den} - 1) == x^{k_num} - 1.
bool telescope_check(const std::vector<int>& A, const std::vector<int>& B, int r, int k_num, int k_den);

/// prod_{j=1}^m A(x^{L^j}) B(x^{r L^j}).
IntPoly telescope_product(const std::vector<int>& A, const std::vector<int>& B, int L, int r, int m);

/// sum_{a in A} e^{2 pi i a / N} == 0, decided by Phi_N | A(x).
bool vanishing_sum_check(const std::vector<int>& A, int N);
/// Same for a weight vector over Z_N.
bool vanishing_weights(const std::vector<std::int64_t>& weights);

struct PolygonTerm {
    int p = 0;       ///< prime
    int r = 0;       ///< rotation, 0 <= r < N / p
    BigInt c = 0;    ///< coefficient

    friend bool operator==(const PolygonTerm&, const PolygonTerm&) = default;
};

struct PolygonDecomposition {
    int N = 0;
    std::vector<PolygonTerm> terms;

    /// sum of c * indicator{r, r + N/p, ...}
    std::vector<BigInt> resum() const;
};

std::vector<int> prime_factors(std::int64_t n);

/// Integer combination of rotated prime polygons reproducing `weights` (length N).
/// Throws InvalidArgument when the weights are not a vanishing sum.
PolygonDecomposition rdbs_decompose(const std::vector<std::int64_t>& weights);

/// Nonnegative decomposition for N = p^a q^b. nullopt only if the search fails,
/// which the de Bruijn theorem rules out for vanishing nonnegative weights.
std::optional<PolygonDecomposition> de_bruijn_decompose(const std::vector<std::int64_t>& weights, int N);

/// k in the numerical semigroup generated by the primes dividing N.
bool lam_leung_check(std::int64_t k, std::int64_t N);

/// {s : Phi_s | A(x), gcd(s, ref) == 1}
std::vector<int> slv_indices(const std::vector<int>& A, int gcd_reference);

enum class CheckStatus { witness, none, vacuous };

const char* to_string(CheckStatus s);

struct CompatibleResult {
    CheckStatus status = CheckStatus::none;
    std::vector<int> S;
    std::int64_t N = 1;
    std::int64_t P = 0;
    std::int64_t Q = 0;
};

/// Searches N = P Q (P, Q > 1) with s not dividing Q for all s in S and |A| > P; smallest P wins.
/// gcd_reference 0 means |A|.
CompatibleResult compatible_check(const std::vector<int>& A, int gcd_reference = 0);

struct ConjectureResult {
    CheckStatus status = CheckStatus::none;
    std::vector<int> S;
    std::int64_t N = 1;
    std::int64_t Q = 0;
    std::int64_t T = 0;
};

/// T(Q) = max_s s / gcd(s, Q) over S; returns the admissible Q | N with |A| > T(Q)
/// minimizing T, ties to the smaller Q. gcd_reference 0 means |A|.
ConjectureResult conjecture_check(const std::vector<int>& A, int gcd_reference = 0);

/// T(Q) as above.
std::int64_t conjecture_T(const std::vector<int>& S, std::int64_t Q);

} // namespace buffon::cyclo
