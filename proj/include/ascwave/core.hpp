#pragma once

// Colorings of [1,n], ascending-wave recognizers, and the longest
// monochromatic ascending wave dynamic program.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ascwave/errors.hpp"

namespace ascwave {

using position_t = std::int64_t;

/// An r-coloring of [1,n]. Colors are 0-based indices in [0, r-1].
class Coloring {
public:
    Coloring(int r, std::vector<int> colors) : r_(r), colors_(std::move(colors)) {
        detail::require(r_ >= 1, "coloring needs at least one color");
        detail::require(!colors_.empty(), "coloring domain [1,n] needs n >= 1");
        for (int c : colors_) {
            detail::require(c >= 0 && c < r_,
                            "color " + std::to_string(c) + " outside palette [0," +
                                std::to_string(r_ - 1) + "]");
        }
    }

    position_t n() const { return static_cast<position_t>(colors_.size()); }
    int r() const { return r_; }

    /// Color of position `pos` in [1,n].
    int operator()(position_t pos) const { return colors_[static_cast<std::size_t>(pos - 1)]; }

    std::span<const int> colors() const { return colors_; }

    Coloring prefix(position_t len) const {
        detail::require(len >= 1 && len <= n(), "prefix length out of range");
        return {r_, {colors_.begin(), colors_.begin() + len}};
    }

    Coloring appended(int c) const {
        auto next = colors_;
        next.push_back(c);
        return {r_, std::move(next)};
    }

    bool operator==(const Coloring&) const = default;

private:
    int r_;
    std::vector<int> colors_;
};

enum class WaveKind { ascending, almost_ascending };

/// A monochromatic wave witness: positions in [1,n] plus their shared color.
struct WaveCertificate {
    std::vector<position_t> positions;
    int color = 0;
    WaveKind kind = WaveKind::ascending;

    std::size_t size() const { return positions.size(); }

    std::vector<position_t> differences() const {
        std::vector<position_t> d;
        for (std::size_t i = 1; i < positions.size(); ++i) d.push_back(positions[i] - positions[i - 1]);
        return d;
    }

    position_t last_difference() const {
        return positions.size() < 2 ? 0 : positions.back() - positions[positions.size() - 2];
    }
};

// ---------------------------------------------------------------------------
// Recognizers

/// Consecutive differences never decrease.
inline bool is_ascending_differences(std::span<const position_t> d) {
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] < d[i - 1]) return false;
    return true;
}

/// The almost-ascending conditions on a difference sequence d_1..d_m:
/// every step drops by at most one, at least one step drops by exactly one,
/// and two such drops are always separated by a strict rise.
inline bool is_almost_ascending_differences(std::span<const position_t> d) {
    bool dropped = false;
    bool drop_pending = false; // a drop with no rise after it yet
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] < d[i - 1] - 1) return false;
        if (d[i] == d[i - 1] - 1) {
            if (drop_pending) return false;
            drop_pending = true;
            dropped = true;
        } else if (d[i] >= d[i - 1] + 1) {
            drop_pending = false;
        }
    }
    return dropped;
}

namespace detail {

inline std::vector<position_t> checked_differences(std::span<const position_t> seq) {
    std::vector<position_t> d;
    d.reserve(seq.size());
    for (std::size_t i = 1; i < seq.size(); ++i) {
        require(seq[i] > seq[i - 1], "wave terms must be strictly increasing");
        d.push_back(seq[i] - seq[i - 1]);
    }
    return d;
}

} // namespace detail

/// True iff `seq` (positive, strictly increasing) has nondecreasing differences.
/// Sequences of one or two terms are waves vacuously.
inline bool is_ascending_wave(std::span<const position_t> seq) {
    detail::require(!seq.empty(), "wave must have at least one term");
    detail::require(seq.front() >= 1, "wave terms must be positive");
    return is_ascending_differences(detail::checked_differences(seq));
}

/// True iff `seq` (strictly increasing, at least three terms) is an almost
/// ascending wave.
inline bool is_almost_ascending_wave(std::span<const position_t> seq) {
    detail::require(seq.size() >= 3, "almost ascending wave needs at least three terms");
    return is_almost_ascending_differences(detail::checked_differences(seq));
}

/// True iff the certificate is monochromatic under `c`, lies in [1,n], and
/// satisfies the recognizer for its kind.
inline bool certificate_holds(const WaveCertificate& w, const Coloring& c) {
    if (w.positions.empty()) return false;
    for (std::size_t i = 0; i < w.positions.size(); ++i) {
        position_t p = w.positions[i];
        if (p < 1 || p > c.n() || c(p) != w.color) return false;
        if (i > 0 && p <= w.positions[i - 1]) return false;
    }
    if (w.kind == WaveKind::ascending) return is_ascending_wave(w.positions);
    return w.positions.size() >= 3 && is_almost_ascending_wave(w.positions);
}

// ---------------------------------------------------------------------------
// Incremental longest-wave state

/// Colors [1,n] one position at a time while maintaining, for every colored
/// position x, the step function
///
///   best_x(d) = longest monochromatic wave ending at x whose last difference is <= d.
///
/// It is stored as thresholds: reach(x)[v-1] is the smallest last difference
/// of a wave with at least v terms ending at x. A wave of L(h,x) terms ends with
/// the pair (h,x) where L(h,x) = 1 + best_h(x - h). Pushing a position costs
/// O(m log L) for m earlier same-colored positions.
class WaveTracker {
public:
    static constexpr int no_limit = std::numeric_limits<int>::max();

    explicit WaveTracker(int r) : by_color_(static_cast<std::size_t>(r)) {
        detail::require(r >= 1, "palette must contain at least one color");
    }

    int palette() const { return static_cast<int>(by_color_.size()); }
    position_t size() const { return count_; }

    /// Colors position size()+1 with `c`. If some monochromatic wave of at
    /// least `reject_at` terms would end there, leaves the state untouched and
    /// returns 0. Otherwise returns the longest wave ending at the new position.
    int push(int c, int reject_at = no_limit) {
        if (static_cast<std::size_t>(count_) == nodes_.size()) nodes_.emplace_back();
        const auto x = static_cast<std::int32_t>(count_);
        Node& node = nodes_[static_cast<std::size_t>(x)];
        node.color = c;
        node.reach.assign(1, 0);
        node.from.assign(1, -1);
        const auto& same = by_color_[static_cast<std::size_t>(c)];
        // Nearest first, so each level is first reached at its minimal distance.
        for (auto it = same.rbegin(); it != same.rend(); ++it) {
            const std::int32_t h = *it;
            const std::int32_t dist = x - h;
            const auto& hr = nodes_[static_cast<std::size_t>(h)].reach;
            const int len = 1 + static_cast<int>(std::upper_bound(hr.begin(), hr.end(), dist) - hr.begin());
            if (len >= reject_at) return 0;
            while (static_cast<int>(node.reach.size()) < len) {
                node.reach.push_back(dist);
                node.from.push_back(h);
            }
        }
        by_color_[static_cast<std::size_t>(c)].push_back(x);
        ++count_;
        return static_cast<int>(node.reach.size());
    }

    void pop() {
        detail::ensure(count_ > 0, "pop on empty wave tracker");
        --count_;
        by_color_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(count_)].color)].pop_back();
    }

    int color_at(position_t pos) const { return node(pos).color; }

    /// Longest monochromatic wave ending at `pos`.
    int longest_ending_at(position_t pos) const { return static_cast<int>(node(pos).reach.size()); }

    /// Smallest last difference among monochromatic waves of at least `len`
    /// (>= 2) terms ending at `pos`.
    std::optional<position_t> min_last_difference_at(position_t pos, int len) const {
        const auto& r = node(pos).reach;
        if (len < 2 || len > static_cast<int>(r.size())) return std::nullopt;
        return r[static_cast<std::size_t>(len - 1)];
    }

    /// A `len`-term monochromatic wave ending at `pos` whose last difference
    /// is minimal among such waves.
    WaveCertificate reconstruct(position_t pos, int len) const {
        detail::require(len >= 1 && len <= longest_ending_at(pos), "no wave of that length ends here");
        WaveCertificate w;
        w.color = color_at(pos);
        auto cur = static_cast<std::int32_t>(pos - 1);
        for (int level = len; level >= 1; --level) {
            w.positions.push_back(cur + 1);
            if (level > 1) cur = nodes_[static_cast<std::size_t>(cur)].from[static_cast<std::size_t>(level - 1)];
        }
        std::reverse(w.positions.begin(), w.positions.end());
        detail::ensure(is_ascending_wave(w.positions), "reconstructed wave is not ascending");
        return w;
    }

private:
    struct Node {
        int color = 0;
        std::vector<std::int32_t> reach;
        std::vector<std::int32_t> from;
    };

    const Node& node(position_t pos) const {
        detail::require(pos >= 1 && pos <= count_, "position not yet colored");
        return nodes_[static_cast<std::size_t>(pos - 1)];
    }

    std::vector<Node> nodes_;
    position_t count_ = 0;
    std::vector<std::vector<std::int32_t>> by_color_;
};

// ---------------------------------------------------------------------------
// Whole-coloring queries

struct LongestWave {
    int length = 0;
    WaveCertificate witness;
};

inline WaveTracker track(const Coloring& c) {
    WaveTracker t(c.r());
    for (int color : c.colors()) t.push(color);
    return t;
}

/// Maximum k such that `c` has a monochromatic k-term ascending wave, with a
/// witness. Ties go to the smallest last position.
inline LongestWave longest_mono_wave(const Coloring& c) {
    const auto t = track(c);
    position_t best_pos = 1;
    for (position_t x = 2; x <= c.n(); ++x)
        if (t.longest_ending_at(x) > t.longest_ending_at(best_pos)) best_pos = x;
    LongestWave out;
    out.length = t.longest_ending_at(best_pos);
    out.witness = t.reconstruct(best_pos, out.length);
    return out;
}

/// A monochromatic k-term wave minimizing the last difference, if any exists.
inline std::optional<WaveCertificate> shortest_last_difference_wave(const Coloring& c, int k) {
    detail::require(k >= 2, "last difference needs k >= 2");
    const auto t = track(c);
    std::optional<position_t> best;
    position_t best_pos = 0;
    for (position_t x = 1; x <= c.n(); ++x) {
        auto d = t.min_last_difference_at(x, k);
        if (d && (!best || *d < *best)) {
            best = d;
            best_pos = x;
        }
    }
    if (!best) return std::nullopt;
    return t.reconstruct(best_pos, k);
}

/// delta_k(c): the minimum last difference over all monochromatic k-term
/// ascending waves, or nullopt when there are none.
inline std::optional<position_t> min_last_difference(const Coloring& c, int k) {
    auto w = shortest_last_difference_wave(c, k);
    if (!w) return std::nullopt;
    return w->last_difference();
}

/// True iff `c` has no monochromatic k-term ascending wave.
inline bool verify_avoidance(const Coloring& c, int k) {
    detail::require(k >= 1, "wave length k must be at least 1");
    WaveTracker t(c.r());
    for (int color : c.colors())
        if (t.push(color, k) == 0) return false;
    return k > 1;
}

/// A monochromatic k-term ascending wave in `c`, if one exists.
inline std::optional<WaveCertificate> find_mono_wave(const Coloring& c, int k) {
    detail::require(k >= 1, "wave length k must be at least 1");
    auto lw = longest_mono_wave(c);
    if (lw.length < k) return std::nullopt;
    auto& p = lw.witness.positions;
    p.erase(p.begin(), p.end() - k);
    return lw.witness;
}

// ---------------------------------------------------------------------------
// b-floor waves

struct FloorWave {
    std::vector<position_t> values;
    position_t b = 1;
    WaveCertificate source;

    std::vector<position_t> differences() const {
        std::vector<position_t> d;
        for (std::size_t i = 1; i < values.size(); ++i) d.push_back(values[i] - values[i - 1]);
        return d;
    }
};

/// values[i] = floor(positions[i] / b).
inline FloorWave floor_wave(const WaveCertificate& w, position_t b) {
    detail::require(b >= 1, "floor wave block length b must be positive");
    detail::require(w.kind == WaveKind::ascending, "floor wave is defined for ascending waves");
    FloorWave f;
    f.b = b;
    f.source = w;
    f.values.reserve(w.positions.size());
    for (position_t p : w.positions) {
        detail::require(p >= 1, "wave terms must be positive");
        f.values.push_back(p / b);
    }
    return f;
}

} // namespace ascwave
