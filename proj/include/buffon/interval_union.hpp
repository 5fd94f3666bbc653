#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "buffon/errors.hpp"

namespace buffon {

template <class T>
struct Interval {
    T left;
    T right;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals, kept sorted and pairwise disjoint.
///
/// Touching intervals are merged, so `left < right` within each piece and
/// `right_i < left_{i+1}` between consecutive pieces. T may be an exact type
/// (int64 numerators over an external denominator, Rational) or double.
template <class T>
class IntervalUnion {
public:
    IntervalUnion() = default;

    /// Sorts and merges arbitrary intervals; degenerate or empty pieces are dropped.
    static IntervalUnion from_unsorted(std::vector<Interval<T>> pieces)
    {
        std::sort(pieces.begin(), pieces.end(),
                  [](const Interval<T>& a, const Interval<T>& b) { return a.left < b.left; });
        IntervalUnion out;
        for (auto& p : pieces) {
            if (!(p.left < p.right))
                continue;
            if (!out.pieces_.empty() && !(out.pieces_.back().right < p.left)) {
                if (out.pieces_.back().right < p.right)
                    out.pieces_.back().right = p.right;
            } else {
                out.pieces_.push_back(std::move(p));
            }
        }
        return out;
    }

    /// Takes already sorted, disjoint pieces; validated.
    static IntervalUnion from_sorted(std::vector<Interval<T>> pieces)
    {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            require(pieces[i].left < pieces[i].right, "interval with left >= right");
            if (i > 0)
                require(pieces[i - 1].right < pieces[i].left, "intervals not sorted and disjoint");
        }
        IntervalUnion out;
        out.pieces_ = std::move(pieces);
        return out;
    }

    static IntervalUnion single(T left, T right) { return from_unsorted({{std::move(left), std::move(right)}}); }

    std::span<const Interval<T>> pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    bool empty() const { return pieces_.empty(); }

    T measure() const
    {
        T total{};
        for (const auto& p : pieces_)
            total += p.right - p.left;
        return total;
    }

    bool contains(const T& x) const
    {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const T& v, const Interval<T>& p) { return v < p.left; });
        if (it == pieces_.begin())
            return false;
        --it;
        return !(it->right < x);
    }

    /// True when every piece of `this` lies inside some piece of `outer`.
    bool subset_of(const IntervalUnion& outer) const
    {
        std::size_t j = 0;
        for (const auto& p : pieces_) {
            while (j < outer.pieces_.size() && outer.pieces_[j].right < p.right)
                ++j;
            if (j == outer.pieces_.size() || p.left < outer.pieces_[j].left)
                return false;
        }
        return true;
    }

    IntervalUnion intersect(const IntervalUnion& other) const
    {
        IntervalUnion out;
        std::size_t i = 0, j = 0;
        while (i < pieces_.size() && j < other.pieces_.size()) {
            const auto& a = pieces_[i];
            const auto& b = other.pieces_[j];
            const T& lo = a.left < b.left ? b.left : a.left;
            const T& hi = a.right < b.right ? a.right : b.right;
            if (lo < hi)
                out.pieces_.push_back({lo, hi});
            if (a.right < b.right)
                ++i;
            else
                ++j;
        }
        return out;
    }

    /// Measure of the intersection without materializing it.
    T intersection_measure(const IntervalUnion& other) const
    {
        T total{};
        std::size_t i = 0, j = 0;
        while (i < pieces_.size() && j < other.pieces_.size()) {
            const auto& a = pieces_[i];
            const auto& b = other.pieces_[j];
            const T& lo = a.left < b.left ? b.left : a.left;
            const T& hi = a.right < b.right ? a.right : b.right;
            if (lo < hi)
                total += hi - lo;
            if (a.right < b.right)
                ++i;
            else
                ++j;
        }
        return total;
    }

    IntervalUnion shifted(const T& by) const
    {
        IntervalUnion out = *this;
        for (auto& p : out.pieces_) {
            p.left += by;
            p.right += by;
        }
        return out;
    }

    template <class F>
    auto transform(F&& f) const
    {
        using U = decltype(f(std::declval<const T&>()));
        std::vector<Interval<U>> mapped;
        mapped.reserve(pieces_.size());
        for (const auto& p : pieces_) {
            U l = f(p.left), r = f(p.right);
            if (r < l)
                std::swap(l, r);
            mapped.push_back({std::move(l), std::move(r)});
        }
        return IntervalUnion<U>::from_unsorted(std::move(mapped));
    }

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    std::vector<Interval<T>> pieces_;
};

} // namespace buffon
