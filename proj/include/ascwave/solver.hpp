#pragma once

// Exact AW(k;r) and Delta^M(k;r) by backtracking over colorings, and the
// constructive window procedure that finds a monochromatic wave in any
// r-coloring of [1, M(k;r)].

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "ascwave/bounds.hpp"
#include "ascwave/core.hpp"
#include "ascwave/errors.hpp"

namespace ascwave {

/// A coloring checked on construction to avoid k-term monochromatic
/// ascending waves.
class AvoidanceCertificate {
public:
    static constexpr std::string_view claim = "no-k-term-monochromatic-ascending-wave";

    AvoidanceCertificate(Coloring coloring, int k) : coloring_(std::move(coloring)), k_(k) {
        if (!verify_avoidance(coloring_, k_))
            throw verification_failure("coloring of [1," + std::to_string(coloring_.n()) + "] contains a " +
                                       std::to_string(k_) + "-term monochromatic ascending wave");
    }

    const Coloring& coloring() const { return coloring_; }
    int k() const { return k_; }
    int r() const { return coloring_.r(); }
    position_t n() const { return coloring_.n(); }

private:
    Coloring coloring_;
    int k_;
};

enum class SearchStatus { complete, budget_exceeded };

struct SearchOptions {
    std::optional<std::uint64_t> node_budget;
    unsigned threads = 1;
    /// Fix color(1) = 0 and require colors to first appear in increasing order.
    bool canonical = true;
};

struct SearchResult {
    int k = 0;
    int r = 0;
    SearchStatus status = SearchStatus::complete;
    /// Set only when the search tree was exhausted.
    std::optional<position_t> aw_value;
    /// Longest avoiding coloring found; lexicographically first among the
    /// longest. Absent when none exists (k = 1) or none was reached.
    std::optional<AvoidanceCertificate> extremal;
    std::uint64_t nodes_explored = 0;
    std::chrono::duration<double> wall_time{};

    /// AW(k;r) is at least this, whatever the status.
    position_t lower_bound() const { return extremal ? extremal->n() + 1 : 1; }
};

namespace detail {

// Longer wins; equal lengths go to the lexicographically smaller sequence.
inline bool better_avoider(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
}

inline position_t clamp_to_position(const bigint& v) {
    constexpr auto cap = static_cast<position_t>(std::numeric_limits<std::int32_t>::max());
    return v > cap ? cap : static_cast<position_t>(v);
}

/// Depth-first extension of [1,n] by position n+1, rejecting a color as soon
/// as it would close a k-term monochromatic wave. Prefix-closed, so the
/// deepest node reached is the longest avoiding coloring.
class AvoidSearch {
public:
    AvoidSearch(int k, int r, bool canonical, position_t depth_cap, std::atomic<std::uint64_t>& nodes,
                std::uint64_t budget, std::atomic<bool>& aborted)
        : k_(k), r_(r), canonical_(canonical), depth_cap_(depth_cap), tracker_(r), nodes_(nodes),
          budget_(budget), aborted_(aborted) {}

    /// Pushes an already-validated prefix without counting nodes.
    void replay(const std::vector<int>& prefix) {
        for (int c : prefix) {
            ensure(tracker_.push(c, k_) != 0, "replayed prefix closes a wave");
            enter(c);
        }
        best_ = colors_;
    }

    /// Explores below the current node. With a stop depth, nodes at that depth
    /// are handed to `emit` instead of being expanded.
    template <typename Emit>
    void run(position_t stop_depth, Emit&& emit) {
        visit(stop_depth, emit);
    }

    const std::vector<int>& best() const { return best_; }

private:
    template <typename Emit>
    void visit(position_t stop_depth, Emit& emit) {
        if (aborted_.load(std::memory_order_relaxed)) return;
        if (better_avoider(colors_, best_)) best_ = colors_;
        const auto depth = static_cast<position_t>(colors_.size());
        if (depth == stop_depth) {
            emit(colors_);
            return;
        }
        ensure(depth < depth_cap_, "avoiding coloring longer than the M(k;r) upper bound");
        const int limit = canonical_ ? std::min(r_, used_ + 1) : r_;
        for (int c = 0; c < limit; ++c) {
            if (tracker_.push(c, k_) == 0) continue;
            if (nodes_.fetch_add(1, std::memory_order_relaxed) >= budget_) {
                aborted_.store(true, std::memory_order_relaxed);
                tracker_.pop();
                return;
            }
            const int saved_used = used_;
            enter(c);
            visit(stop_depth, emit);
            colors_.pop_back();
            used_ = saved_used;
            tracker_.pop();
            if (aborted_.load(std::memory_order_relaxed)) return;
        }
    }

    void enter(int c) {
        colors_.push_back(c);
        used_ = std::max(used_, c + 1);
    }

    int k_;
    int r_;
    bool canonical_;
    position_t depth_cap_;
    WaveTracker tracker_;
    std::vector<int> colors_;
    std::vector<int> best_;
    int used_ = 0;
    std::atomic<std::uint64_t>& nodes_;
    std::uint64_t budget_;
    std::atomic<bool>& aborted_;
};

} // namespace detail

/// AW(k;r): the least n such that every r-coloring of [1,n] has a
/// monochromatic k-term ascending wave.
///
/// With threads > 1 the tree is split at a shallow prefix depth and subtrees
/// are searched concurrently. A completed search reports the same value,
/// certificate and node count for any thread count. Under budget exhaustion
/// with several threads the partial certificate depends on scheduling.
inline SearchResult exact_aw(int k, int r, const SearchOptions& opts = {}) {
    detail::require(k >= 1, "wave length k must be at least 1");
    detail::require(r >= 1, "number of colors r must be at least 1");
    const auto start = std::chrono::steady_clock::now();
    SearchResult out;
    out.k = k;
    out.r = r;

    if (k == 1) {
        out.aw_value = 1;
        out.wall_time = std::chrono::steady_clock::now() - start;
        return out;
    }

    const position_t cap = detail::clamp_to_position(m_table(k, r).M(k, r));
    const std::uint64_t budget = opts.node_budget.value_or(std::numeric_limits<std::uint64_t>::max());
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> aborted{false};
    std::vector<int> best;

    const unsigned threads = std::max(1u, opts.threads);
    if (threads == 1) {
        detail::AvoidSearch s(k, r, opts.canonical, cap, nodes, budget, aborted);
        s.run(-1, [](const std::vector<int>&) {});
        best = s.best();
    } else {
        // Shallowest prefix depth giving a few tasks per thread.
        std::vector<std::vector<int>> prefixes;
        position_t depth = 1;
        for (;; ++depth) {
            std::atomic<std::uint64_t> scratch{0};
            std::atomic<bool> never{false};
            prefixes.clear();
            detail::AvoidSearch probe(k, r, opts.canonical, cap, scratch, std::numeric_limits<std::uint64_t>::max(),
                                      never);
            probe.run(depth, [&](const std::vector<int>& p) { prefixes.push_back(p); });
            if (prefixes.size() >= 4 * threads || prefixes.empty() || depth >= 24) break;
        }
        detail::AvoidSearch head(k, r, opts.canonical, cap, nodes, budget, aborted);
        head.run(depth, [](const std::vector<int>&) {});
        best = head.best();

        std::vector<std::vector<int>> bests(prefixes.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < prefixes.size(); i = next.fetch_add(1)) {
                detail::AvoidSearch s(k, r, opts.canonical, cap, nodes, budget, aborted);
                s.replay(prefixes[i]);
                s.run(-1, [](const std::vector<int>&) {});
                bests[i] = s.best();
            }
        };
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        pool.clear();
        for (const auto& b : bests)
            if (detail::better_avoider(b, best)) best = b;
    }

    out.nodes_explored = std::min(nodes.load(), budget);
    out.status = aborted.load() ? SearchStatus::budget_exceeded : SearchStatus::complete;
    if (!best.empty()) out.extremal.emplace(Coloring(r, best), k);
    if (out.status == SearchStatus::complete) out.aw_value = static_cast<position_t>(best.size()) + 1;
    out.wall_time = std::chrono::steady_clock::now() - start;
    return out;
}

/// Delta^m(k;r): the maximum over all r-colorings of [1,m] of the minimum
/// last difference of a monochromatic k-term ascending wave.
///
/// Branch and bound over canonical colorings (delta is invariant under color
/// permutation). The running minimum only shrinks as positions are added, so
/// a prefix whose minimum already fails to beat the best leaf is cut.
/// `known_aw` skips the exact_aw run used to check m >= AW(k;r).
inline position_t delta_exact(int k, int r, position_t m, std::optional<position_t> known_aw = std::nullopt) {
    detail::require(k >= 2, "delta needs k >= 2");
    detail::require(r >= 1, "number of colors r must be at least 1");
    const position_t aw = known_aw ? *known_aw : *exact_aw(k, r).aw_value;
    detail::require(m >= aw, "m = " + std::to_string(m) + " is below AW(" + std::to_string(k) + ";" +
                                 std::to_string(r) + ") = " + std::to_string(aw) +
                                 "; some coloring has no k-term wave");

    constexpr position_t none = std::numeric_limits<position_t>::max();
    WaveTracker t(r);
    position_t best = 0;
    auto visit = [&](auto& self, position_t current, int used) -> void {
        const position_t x = t.size() + 1;
        if (x > m) {
            detail::ensure(current != none, "coloring of [1,m] without a k-term wave");
            best = std::max(best, current);
            return;
        }
        const int limit = std::min(r, used + 1);
        for (int c = 0; c < limit; ++c) {
            t.push(c);
            const auto d = t.min_last_difference_at(x, k);
            const position_t next = d ? std::min(current, *d) : current;
            if (next > best) self(self, next, std::max(used, c + 1));
            t.pop();
        }
    };
    visit(visit, none, 0);
    return best;
}

namespace detail {

inline WaveCertificate greedy_window(const Coloring& c, const BoundTable& t, int k, int r, position_t a) {
    auto color = [&](position_t p) {
        ensure(p >= 1 && p <= c.n(), "window procedure left [1,n]");
        return c(p);
    };
    WaveCertificate w;
    if (k == 1) {
        w.positions = {a};
        w.color = color(a);
        return w;
    }
    if (r == 1) {
        w.color = color(a);
        for (position_t p = a; p < a + k; ++p) {
            ensure(color(p) == w.color, "window expected to carry a single color");
            w.positions.push_back(p);
        }
        return w;
    }
    if (k == 2) {
        // r + 1 positions over at most r colors repeat a color.
        std::vector<position_t> seen(static_cast<std::size_t>(c.r()), 0);
        for (position_t p = a; p <= a + r; ++p) {
            auto& s = seen[static_cast<std::size_t>(color(p))];
            if (s != 0) {
                w.positions = {s, p};
                w.color = color(p);
                return w;
            }
            s = p;
        }
        throw contract_violation("no repeated color among r+1 positions of an r-colored window");
    }

    w = greedy_window(c, t, k - 1, r, a);
    const auto prev_bound = static_cast<position_t>(t.D(k - 1, r));
    const auto sub_window = static_cast<position_t>(t.M(k, r - 1));
    const position_t last = w.positions.back();
    ensure(w.last_difference() <= prev_bound, "last difference exceeds its D(k-1;r) bound");
    const position_t hi = last + prev_bound + sub_window - 1;
    for (position_t q = last + w.last_difference(); q <= hi; ++q) {
        if (color(q) == w.color) {
            w.positions.push_back(q);
            return w;
        }
    }
    // The window [last + D, hi] of length M(k;r-1) misses w's color.
    return greedy_window(c, t, k, r - 1, last + prev_bound);
}

} // namespace detail

/// Finds a monochromatic k-term ascending wave in an r-coloring of at least
/// M(k;r) positions: find a (k-1)-term wave w in [1, M(k-1;r)], look for the
/// next term of w's color in the following window of M(k;r-1) positions, and
/// if that color is missing there, recurse into the window with one color
/// fewer.
inline WaveCertificate greedy_find(const Coloring& c, int k) {
    detail::require(k >= 1, "wave length k must be at least 1");
    const BoundTable t(std::max(k, 2), c.r());
    detail::require(bigint(c.n()) >= t.M(k, c.r()), "greedy window procedure needs n >= M(" + std::to_string(k) +
                                                         ";" + std::to_string(c.r()) + ") = " +
                                                         t.M(k, c.r()).str());
    auto w = detail::greedy_window(c, t, k, c.r(), 1);
    detail::ensure(static_cast<int>(w.size()) == k && certificate_holds(w, c),
                   "window procedure produced an invalid wave");
    detail::ensure(bigint(w.positions.back()) <= t.M(k, c.r()), "wave escaped [1, M(k;r)]");
    return w;
}

} // namespace ascwave
