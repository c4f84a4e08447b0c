#pragma once

// Counting ascending and almost ascending waves with a fixed first term by
// their difference sequences, plus the explicit family of such sequences
// used for the lower bound on their number.

#include <cstdint>
#include <set>
#include <vector>

#include "ascwave/bounds.hpp"
#include "ascwave/core.hpp"
#include "ascwave/errors.hpp"

namespace ascwave {

enum class CountMode {
    aw_strict, ///< ascending, last difference < D
    aaw_weak,  ///< almost ascending, last difference <= D
};

struct CountQuery {
    int n = 2;             ///< wave length
    int max_last_diff = 1; ///< D
    CountMode mode = CountMode::aw_strict;
};

/// Number of difference sequences 1 <= d_1 <= ... <= d_{n-1} < D.
inline bigint count_aw(int n, int max_last_diff) {
    detail::require(n >= 2, "wave length n must be at least 2");
    detail::require(max_last_diff >= 1, "last difference bound D must be at least 1");
    const int top = max_last_diff - 1;
    if (top < 1) return 0;
    // ways[d]: sequences so far ending in difference d.
    std::vector<bigint> ways(static_cast<std::size_t>(top + 1), 1);
    ways[0] = 0;
    for (int step = 2; step <= n - 1; ++step) {
        bigint run = 0;
        for (int d = 1; d <= top; ++d) {
            run += ways[static_cast<std::size_t>(d)];
            ways[static_cast<std::size_t>(d)] = run;
        }
    }
    bigint total = 0;
    for (const auto& w : ways) total += w;
    return total;
}

/// Number of almost ascending difference sequences d_1..d_{n-1} with d_1 >= 1
/// and d_{n-1} <= D.
///
/// Drops are exactly one and separated by strict rises, so no difference can
/// exceed a later one by more than one; every term is at most D + 1. The state
/// is (difference, phase) with phase 0 = no drop yet, 1 = a drop not yet
/// followed by a rise, 2 = a drop followed by a rise.
inline bigint count_aaw(int n, int max_last_diff) {
    detail::require(n >= 3, "almost ascending waves need n >= 3");
    detail::require(max_last_diff >= 1, "last difference bound D must be at least 1");
    const int top = max_last_diff + 1;
    const auto width = static_cast<std::size_t>(top + 2);
    using Row = std::vector<bigint>;
    std::vector<Row> ways(3, Row(width, 0));
    for (int d = 1; d <= top; ++d) ways[0][static_cast<std::size_t>(d)] = 1;

    for (int step = 2; step <= n - 1; ++step) {
        std::vector<Row> next(3, Row(width, 0));
        for (int phase = 0; phase < 3; ++phase) {
            const Row& cur = ways[static_cast<std::size_t>(phase)];
            bigint below = 0; // sum of cur[e] over e < d
            for (int d = 1; d <= top; ++d) {
                const auto di = static_cast<std::size_t>(d);
                // stay flat
                next[static_cast<std::size_t>(phase)][di] += cur[di];
                // rise from any smaller difference
                next[phase == 0 ? 0 : 2][di] += below;
                // drop by one from d + 1
                if (phase != 1 && d + 1 <= top) next[1][di] += cur[di + 1];
                below += cur[di];
            }
        }
        ways = std::move(next);
    }
    bigint total = 0;
    for (int phase = 1; phase < 3; ++phase)
        for (int d = 1; d <= max_last_diff; ++d) total += ways[static_cast<std::size_t>(phase)][static_cast<std::size_t>(d)];
    return total;
}

inline bigint count_waves(const CountQuery& q) {
    return q.mode == CountMode::aw_strict ? count_aw(q.n, q.max_last_diff) : count_aaw(q.n, q.max_last_diff);
}

namespace detail {

// Clauses that a prefix of an almost ascending difference sequence must
// already satisfy: drops of at most one, no two drops without a rise between.
inline bool aaw_prefix_viable(const std::vector<position_t>& d) {
    bool pending = false;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] < d[i - 1] - 1) return false;
        if (d[i] == d[i - 1] - 1) {
            if (pending) return false;
            pending = true;
        } else if (d[i] > d[i - 1]) {
            pending = false;
        }
    }
    return true;
}

struct BruteCounter {
    CountQuery q;
    std::vector<position_t> diffs;
    std::uint64_t total = 0;

    void extend() {
        const int len = static_cast<int>(diffs.size());
        if (len == q.n - 1) {
            if (accepts()) ++total;
            return;
        }
        // A difference falls by at most one per later step.
        const position_t hi = q.max_last_diff + (q.n - 2 - len);
        const position_t lo = diffs.empty() ? 1 : std::max<position_t>(1, diffs.back() - 1);
        for (position_t d = lo; d <= hi; ++d) {
            diffs.push_back(d);
            const bool viable = q.mode == CountMode::aw_strict ? is_ascending_differences(diffs)
                                                                : aaw_prefix_viable(diffs);
            if (viable) extend();
            diffs.pop_back();
        }
    }

    bool accepts() const {
        std::vector<position_t> wave{1};
        for (auto d : diffs) wave.push_back(wave.back() + d);
        const position_t last = diffs.back();
        if (q.mode == CountMode::aw_strict) return last < q.max_last_diff && is_ascending_wave(wave);
        return last <= q.max_last_diff && is_almost_ascending_wave(wave);
    }
};

} // namespace detail

/// Exhaustive count of the same quantities as count_aw / count_aaw, checked
/// term by term with the wave recognizers. Exponential; refuses n above
/// `max_n` or D above `max_d`.
inline bigint brute_count(const CountQuery& q, int max_n = 12, int max_d = 10) {
    detail::require(q.n >= (q.mode == CountMode::aw_strict ? 2 : 3), "wave length too small for this mode");
    detail::require(q.max_last_diff >= 1, "last difference bound D must be at least 1");
    detail::require(q.n <= max_n && q.max_last_diff <= max_d, "brute-force count refused: n or D above its limit");
    detail::BruteCounter bc{q, {}, 0};
    bc.extend();
    return bc.total;
}

/// The 2^(n/2-1) difference sequences behind the lower bound on
/// aw(n) + aaw(n), for even n >= 6.
///
/// Each of the n/2 - 1 slots holds the increment pair (-1, +1) if chosen and
/// (0, 0) otherwise, giving n - 2 increments. The filler increment 2 is put in
/// front so the first drop starts from difference 3 rather than 1; the last
/// slot is cut to its first increment so that exactly n - 2 increments are
/// applied to d_1 = 1. Its first increment still tells chosen from unchosen,
/// so distinct choices give distinct sequences.
inline std::vector<std::vector<position_t>> prop31_generate(int n) {
    detail::require(n >= 6, "construction needs n >= 6");
    detail::require(n % 2 == 0, "construction needs even n");
    const int slots = n / 2 - 1;
    std::vector<std::vector<position_t>> out;
    out.reserve(std::size_t{1} << slots);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
        std::vector<int> steps{2};
        for (int s = 0; s < slots; ++s) {
            const bool chosen = (mask >> s) & 1U;
            steps.push_back(chosen ? -1 : 0);
            steps.push_back(chosen ? 1 : 0);
        }
        steps.resize(static_cast<std::size_t>(n - 2));
        std::vector<position_t> d{1};
        for (int inc : steps) d.push_back(d.back() + inc);
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace ascwave
