#pragma once

// Upper and lower bound evaluators for AW(k;r).
//
// Integer-valued bounds are exact (boost::multiprecision::cpp_int). The
// asymptotic forms are leading-term evaluations in double precision; their
// (1+o(1)) factors and "k sufficiently large" thresholds are not modeled.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ascwave/errors.hpp"

namespace ascwave {

using bigint = boost::multiprecision::cpp_int;

/// M(k;r) from the recursive upper bound, iterated jointly with D(k;r), an
/// upper bound on the largest minimal last difference Delta^{M(k;r)}(k;r).
///
///   M(k;1) = k, M(1;r) = 1, M(2;r) = r + 1
///   D(k;1) = 1, D(2;r) = r
///   M(k;r) = M(k-1;r) + D(k-1;r) + M(k;r-1) - 1      k >= 3, r >= 2
///   D(k;r) = D(k-1;r) + M(k;r-1) - 1                 k >= 3, r >= 2
///
/// D(1;r) is stored as 0; a one-term wave has no last difference.
class BoundTable {
public:
    BoundTable(int max_k, int max_r) : max_k_(max_k), max_r_(max_r) {
        detail::require(max_k >= 1 && max_r >= 1, "bound table extents must be at least 1");
        const auto cols = static_cast<std::size_t>(max_r + 1);
        m_.assign(static_cast<std::size_t>(max_k + 1) * cols, 0);
        d_ = m_;
        for (int r = 1; r <= max_r; ++r) {
            for (int k = 1; k <= max_k; ++k) {
                bigint m, d;
                if (k == 1) {
                    m = 1;
                    d = 0;
                } else if (r == 1) {
                    m = k;
                    d = 1;
                } else if (k == 2) {
                    m = r + 1;
                    d = r;
                } else {
                    m = at(m_, k - 1, r) + at(d_, k - 1, r) + at(m_, k, r - 1) - 1;
                    d = at(d_, k - 1, r) + at(m_, k, r - 1) - 1;
                }
                slot(m_, k, r) = m;
                slot(d_, k, r) = d;
            }
        }
    }

    int max_k() const { return max_k_; }
    int max_r() const { return max_r_; }

    const bigint& M(int k, int r) const { return at(m_, k, r); }
    const bigint& D(int k, int r) const { return at(d_, k, r); }

    /// Column r of M keyed by k, the shape lemma13_bound takes.
    std::map<int, bigint> column(int r) const {
        std::map<int, bigint> out;
        for (int k = 1; k <= max_k_; ++k) out.emplace(k, M(k, r));
        return out;
    }

private:
    std::size_t index(int k, int r) const {
        detail::require(k >= 1 && k <= max_k_ && r >= 1 && r <= max_r_,
                        "(" + std::to_string(k) + "," + std::to_string(r) + ") outside bound table");
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(max_r_ + 1) + static_cast<std::size_t>(r);
    }
    const bigint& at(const std::vector<bigint>& v, int k, int r) const { return v[index(k, r)]; }
    bigint& slot(std::vector<bigint>& v, int k, int r) { return v[index(k, r)]; }

    int max_k_;
    int max_r_;
    std::vector<bigint> m_;
    std::vector<bigint> d_;
};

inline BoundTable m_table(int max_k, int max_r) { return {max_k, max_r}; }

/// Closed sum form of the M(k;r) upper bound in terms of column r-1:
///
///   sum_{i=0}^{k-3} (i+1) M(k-i; r-1)  -  k^2/2 + 3k/2  +  (k-1) r
///
/// `prev` maps k' to M(k'; r-1) and must cover 3..k. The half-integer terms
/// combine to -k(k-3)/2, which is always integral.
inline bigint lemma13_bound(int k, int r, const std::map<int, bigint>& prev) {
    detail::require(k >= 3 && r >= 2, "sum bound needs k >= 3 and r >= 2");
    bigint sum = 0;
    for (int i = 0; i <= k - 3; ++i) {
        auto it = prev.find(k - i);
        detail::require(it != prev.end(), "missing M(" + std::to_string(k - i) + ";r-1)");
        sum += bigint(i + 1) * it->second;
    }
    return sum - bigint(k) * (k - 3) / 2 + bigint(k - 1) * r;
}

inline bigint lemma13_bound(int k, int r, const BoundTable& t) { return lemma13_bound(k, r, t.column(r - 1)); }

/// k^(2r-1), the first (greedy-induction) upper bound.
inline bigint simple_upper(int k, int r) {
    detail::require(k >= 1 && r >= 1, "k and r must be positive");
    return boost::multiprecision::pow(bigint(k), static_cast<unsigned>(2 * r - 1));
}

/// k^(2r-1) / (2r-1)!
inline double thm1_asymptotic(int k, int r) {
    detail::require(k >= 1 && r >= 1, "k and r must be positive");
    double v = 1.0;
    for (int i = 1; i <= 2 * r - 1; ++i) v *= static_cast<double>(k) / i;
    return v;
}

/// 2^(k-2) / (k-1)! * r^(k-1), the fixed-k growth in r.
inline double cor15_asymptotic(int k, int r) {
    detail::require(k >= 3, "fixed-k form needs k >= 3");
    detail::require(r >= 1, "r must be positive");
    double v = 0.5;
    for (int i = 1; i <= k - 1; ++i) v *= 2.0 * r / i;
    return v;
}

/// log2 of N_r = 1 / (2^(r-1) (40r)^(r^2-1)).
inline double log2_n_r(int r) {
    detail::require(r >= 1, "r must be positive");
    const double rr = r;
    return -(rr - 1) - (rr * rr - 1) * std::log2(40.0 * rr);
}

inline double n_r(int r) { return std::exp2(log2_n_r(r)); }

/// N_r * k^(2r-1-eps). Only meaningful asymptotically.
inline double thm2_lower(int k, int r, double eps) {
    detail::require(k >= 1 && r >= 1, "k and r must be positive");
    detail::require(eps > 0, "eps must be positive");
    return std::exp2((2.0 * r - 1.0 - eps) * std::log2(static_cast<double>(k)) + log2_n_r(r));
}

/// k^5 / (2^13 * 10^39), the three-color lower bound.
inline double thm3_lower(int k) {
    detail::require(k >= 1, "k must be positive");
    return std::pow(static_cast<double>(k), 5) / (8192.0 * 1e39);
}

/// k^5 / 120, the three-color specialization of thm1_asymptotic.
inline double thm3_upper(int k) { return thm1_asymptotic(k, 3); }

/// Length of the arithmetic progressions that the random block coloring makes
/// good with probability at least 1/2 (logs base 2). Callers round up.
inline double lemma22_t(int k, int r) {
    detail::require(k >= 2, "progression length needs k >= 2");
    detail::require(r >= 2, "progression length needs r >= 2");
    const double rr = r;
    const double denom = std::log2(rr * rr / (rr * rr - 1));
    return (4 * rr - 2) * (2 * rr + 1) / denom * std::log2(static_cast<double>(k)) +
           (2 * rr + 1) * (std::log2(rr) + 1) / denom;
}

/// The last-difference growth target b * k^(1 - eps/2) for waves of k/2 terms.
inline double lemma23_target(std::int64_t b, int k, double eps) {
    return static_cast<double>(b) * std::pow(static_cast<double>(k), 1.0 - eps / 2.0);
}

/// Wave length that each base coloring of the block construction must avoid:
/// floor(k / (10 (4r - 4))).
inline int block_inner_k(int k, int r) {
    detail::require(r >= 2, "block construction needs r >= 2");
    return k / (10 * (4 * r - 4));
}

/// Supplies AW(k'; r') exactly or as a certified lower bound.
using AwOracle = std::function<std::int64_t(int k, int r)>;

/// Block length b = AW(floor(k / (10(4r-4))); r-1) - 1 under `aw`.
inline std::int64_t block_b(int k, int r, const AwOracle& aw) {
    const int inner = block_inner_k(k, r);
    detail::require(inner >= 1, "k = " + std::to_string(k) + " is below the block construction scale for r = " +
                                    std::to_string(r));
    return aw(inner, r - 1) - 1;
}

/// (2^(n/2-1), 2^(13n/25) (3/2)^(n/100)) bracketing aw(n) + aaw(n).
inline std::pair<double, double> prop31_bounds(int n) {
    detail::require(n >= 2, "wave count bounds need n >= 2");
    const double nn = n;
    return {std::exp2(nn / 2 - 1), std::exp2(13 * nn / 25) * std::pow(1.5, nn / 100)};
}

} // namespace ascwave
