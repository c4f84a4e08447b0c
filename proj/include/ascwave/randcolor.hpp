#pragma once

// The random block coloring used for lower bounds: a matrix of block labels,
// base colorings gamma_0..gamma_{r-1} (gamma_i omits color i), and a coloring
// of [1,M] whose groups of 2r consecutive blocks are labeled by uniformly
// drawn matrix rows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ascwave/bounds.hpp"
#include "ascwave/core.hpp"
#include "ascwave/errors.hpp"

namespace ascwave {

// ---------------------------------------------------------------------------
// Reproducible randomness

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: the i-th draw is splitmix64(key + i * golden), so
/// a stream is fully determined by its 64-bit key on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    /// Key of an independent stream for trial `index` under experiment `seed`.
    static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
        return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++); }

    /// Uniform in [0, bound) by rejection.
    std::uint64_t uniform(std::uint64_t bound) {
        detail::require(bound > 0, "uniform bound must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        for (;;) {
            const std::uint64_t v = next();
            if (v < limit) return v % bound;
        }
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Label matrix

/// r^2 x 2r matrix of base-coloring labels. Rows m*r .. m*r + r-1 form block
/// A_m = A_0 + m (mod r). In 1-based row offset i and column index j of A_0,
/// column 2j+1 holds j and column 2j+2 holds i + j - 1 (mod r).
struct ColorMatrix {
    int r = 0;
    std::vector<std::vector<int>> rows;

    int row_count() const { return static_cast<int>(rows.size()); }
    int column_count() const { return 2 * r; }
};

inline ColorMatrix build_matrix(int r) {
    detail::require(r >= 2, "label matrix needs r >= 2");
    ColorMatrix a;
    a.r = r;
    for (int m = 0; m < r; ++m) {
        for (int i = 1; i <= r; ++i) {
            std::vector<int> row(static_cast<std::size_t>(2 * r));
            for (int j = 0; j < r; ++j) {
                row[static_cast<std::size_t>(2 * j)] = (j + m) % r;
                row[static_cast<std::size_t>(2 * j + 1)] = (i + j - 1 + m) % r;
            }
            a.rows.push_back(std::move(row));
        }
    }
    return a;
}

struct MatrixCheck {
    bool column_balance = false;       ///< each column holds each label r times
    bool adjacent_pairs_unique = false; ///< each ordered label pair once per adjacent column pair
    bool row_multiplicity_two = false;  ///< each row holds each label twice
    int max_label_free_run = 0;         ///< longest run avoiding some label across two consecutive rows
    int run_bound = 0;                  ///< 4r - 4
    bool ok() const {
        return column_balance && adjacent_pairs_unique && row_multiplicity_two && max_label_free_run <= run_bound;
    }
};

/// Longest run of labels different from `label` in `seq`.
inline int longest_run_without(const std::vector<int>& seq, int label) {
    int best = 0, run = 0;
    for (int s : seq) {
        run = s == label ? 0 : run + 1;
        best = std::max(best, run);
    }
    return best;
}

inline MatrixCheck check_matrix(const ColorMatrix& a) {
    const int r = a.r;
    const auto rr = static_cast<std::size_t>(r);
    MatrixCheck out;
    out.run_bound = 4 * r - 4;

    out.column_balance = true;
    for (int col = 0; col < 2 * r; ++col) {
        std::vector<int> count(rr, 0);
        for (const auto& row : a.rows) ++count[static_cast<std::size_t>(row[static_cast<std::size_t>(col)])];
        out.column_balance &= std::all_of(count.begin(), count.end(), [&](int c) { return c == r; });
    }

    out.adjacent_pairs_unique = true;
    for (int col = 0; col + 1 < 2 * r; ++col) {
        std::vector<int> count(rr * rr, 0);
        for (const auto& row : a.rows)
            ++count[static_cast<std::size_t>(row[static_cast<std::size_t>(col)]) * rr +
                    static_cast<std::size_t>(row[static_cast<std::size_t>(col + 1)])];
        out.adjacent_pairs_unique &= std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
    }

    out.row_multiplicity_two = true;
    for (const auto& row : a.rows) {
        std::vector<int> count(rr, 0);
        for (int s : row) ++count[static_cast<std::size_t>(s)];
        out.row_multiplicity_two &= std::all_of(count.begin(), count.end(), [](int c) { return c == 2; });
    }

    // Every label occurs in every row, so a run avoiding a label never spans
    // more than two consecutive rows.
    for (const auto& first : a.rows) {
        for (const auto& second : a.rows) {
            std::vector<int> joined = first;
            joined.insert(joined.end(), second.begin(), second.end());
            for (int label = 0; label < r; ++label)
                out.max_label_free_run = std::max(out.max_label_free_run, longest_run_without(joined, label));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Block scheme

/// Maps an (r-1)-coloring on palette {0..r-2} onto {0..r-1} \ {omit}.
inline Coloring relabel_base_coloring(const Coloring& base, int omit) {
    const int r = base.r() + 1;
    detail::require(omit >= 0 && omit < r, "omitted color out of range");
    std::vector<int> colors;
    colors.reserve(static_cast<std::size_t>(base.n()));
    for (int c : base.colors()) colors.push_back(c < omit ? c : c + 1);
    return {r, std::move(colors)};
}

/// Base colorings gamma_0..gamma_{r-1} from one (r-1)-coloring.
inline std::vector<Coloring> base_colorings_from(const Coloring& base) {
    std::vector<Coloring> out;
    for (int i = 0; i <= base.r(); ++i) out.push_back(relabel_base_coloring(base, i));
    return out;
}

struct BlockScheme {
    int r = 0;
    position_t b = 0;
    int k_inner = 0;
    std::vector<Coloring> gammas;
    /// Matrix row chosen for each group of 2r blocks.
    std::vector<int> group_rows;
    /// Labels col(B_1), col(B_2), ... (index of the gamma coloring each block).
    std::vector<int> block_labels;
    Coloring realized{1, {0}};

    position_t length() const { return realized.n(); }
    position_t num_blocks() const { return static_cast<position_t>(block_labels.size()); }
    /// Block containing position x (1-based both).
    position_t block_of(position_t x) const { return (x - 1) / b + 1; }
    int label(position_t block) const { return block_labels[static_cast<std::size_t>(block - 1)]; }
};

inline void validate_gammas(int r, position_t b, int k_inner, const std::vector<Coloring>& gammas) {
    detail::require(r >= 2, "block scheme needs r >= 2");
    detail::require(b >= 1, "block length b must be positive");
    detail::require(k_inner >= 2, "below construction scale: base colorings must avoid waves of at least 2 terms");
    detail::require(static_cast<int>(gammas.size()) == r, "need exactly r base colorings");
    for (int i = 0; i < r; ++i) {
        const auto& g = gammas[static_cast<std::size_t>(i)];
        const std::string name = "gamma_" + std::to_string(i);
        detail::require(g.r() == r, name + " must use the palette {0..r-1}");
        detail::require(g.n() == b, name + " must have length b = " + std::to_string(b));
        detail::require(std::find(g.colors().begin(), g.colors().end(), i) == g.colors().end(),
                        name + " uses its omitted color " + std::to_string(i));
        detail::require(verify_avoidance(g, k_inner),
                        name + " contains a " + std::to_string(k_inner) + "-term monochromatic ascending wave");
    }
}

/// Assembles the coloring of [1, length] for fixed group rows. `length`
/// defaults to the full 2r*b positions per group; a shorter length leaves the
/// last block partial, colored by a prefix of its base coloring.
inline BlockScheme assemble_scheme(int r, position_t b, int k_inner, std::vector<Coloring> gammas,
                                   std::vector<int> group_rows, std::optional<position_t> length = std::nullopt) {
    validate_gammas(r, b, k_inner, gammas);
    detail::require(!group_rows.empty(), "need at least one group");
    const auto matrix = build_matrix(r);
    const position_t group_span = 2 * r * b;
    const auto groups = static_cast<position_t>(group_rows.size());
    const position_t len = length.value_or(groups * group_span);
    detail::require(len > (groups - 1) * group_span && len <= groups * group_span,
                    "length must fall inside the last group");

    BlockScheme s;
    s.r = r;
    s.b = b;
    s.k_inner = k_inner;
    std::vector<int> colors;
    colors.reserve(static_cast<std::size_t>(len));
    for (int row : group_rows) {
        detail::require(row >= 0 && row < matrix.row_count(), "group row index out of range");
        for (int label : matrix.rows[static_cast<std::size_t>(row)]) {
            if (static_cast<position_t>(colors.size()) >= len) break;
            s.block_labels.push_back(label);
            for (int c : gammas[static_cast<std::size_t>(label)].colors()) {
                if (static_cast<position_t>(colors.size()) >= len) break;
                colors.push_back(c);
            }
        }
    }
    s.gammas = std::move(gammas);
    s.group_rows = std::move(group_rows);
    s.realized = Coloring(r, std::move(colors));
    return s;
}

/// Draws each group's matrix row uniformly and independently from the stream
/// keyed by `seed`, then assembles the coloring.
inline BlockScheme sample_scheme(int r, position_t b, int k_inner, int num_groups, std::vector<Coloring> gammas,
                                 std::uint64_t seed, std::optional<position_t> length = std::nullopt) {
    detail::require(num_groups >= 1, "need at least one group");
    validate_gammas(r, b, k_inner, gammas);
    CounterRng rng(seed);
    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(num_groups));
    for (int g = 0; g < num_groups; ++g)
        rows.push_back(static_cast<int>(rng.uniform(static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(r))));
    return assemble_scheme(r, b, k_inner, std::move(gammas), std::move(rows), length);
}

// ---------------------------------------------------------------------------
// Good and bad progressions

struct Progression {
    position_t start = 1;
    position_t diff = 1;
    position_t terms = 1;

    position_t term(position_t i) const { return start + i * diff; }
    position_t last() const { return term(terms - 1); }
};

/// A progression is good if for every color c some term lies in a block B_j
/// with col(B_j) = col(B_{j+1}) = gamma_c.
inline bool is_good_progression(const BlockScheme& s, const Progression& ap) {
    detail::require(ap.terms >= 1 && ap.diff >= 1, "progression needs at least one term and difference >= 1");
    detail::require(ap.start >= 1 && ap.last() <= s.length(), "progression leaves [1, scheme length]");
    std::vector<bool> seen(static_cast<std::size_t>(s.r), false);
    int missing = s.r;
    for (position_t i = 0; i < ap.terms && missing > 0; ++i) {
        const position_t j = s.block_of(ap.term(i));
        if (j < s.num_blocks() && s.label(j) == s.label(j + 1)) {
            const auto c = static_cast<std::size_t>(s.label(j));
            if (!seen[c]) {
                seen[c] = true;
                --missing;
            }
        }
    }
    return missing == 0;
}

/// Some t-term progression with difference > min_diff that is bad, if one
/// exists. Scans starts, then differences, in increasing order.
inline std::optional<Progression> find_bad_progression(const BlockScheme& s, position_t t, position_t min_diff) {
    detail::require(t >= 1, "progression length t must be at least 1");
    const position_t len = s.length();
    for (position_t start = 1; start <= len; ++start) {
        for (position_t d = std::max<position_t>(min_diff + 1, 1);; ++d) {
            if (start + (t - 1) * d > len) break;
            Progression ap{start, d, t};
            if (!is_good_progression(s, ap)) return ap;
            if (t == 1) break;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Last-difference profile

struct ProfileReport {
    int k_half = 0;
    /// Smallest last difference of a monochromatic k_half-term wave; absent if none.
    std::optional<position_t> min_last_diff;
    std::optional<WaveCertificate> witness;
    /// b * k^(1 - eps/2) with k = 2 k_half.
    double target = 0;
    /// For each color c, the longest run of consecutive blocks not labeled gamma_c.
    std::vector<int> label_free_runs;
    int max_label_free_run = 0;
    int run_bound = 0; ///< 4r - 4
    bool run_within_bound() const { return max_label_free_run <= run_bound; }
};

inline ProfileReport last_difference_profile(const BlockScheme& s, int k_half, double eps) {
    detail::require(k_half >= 2, "profile needs waves of at least 2 terms");
    ProfileReport rep;
    rep.k_half = k_half;
    rep.witness = shortest_last_difference_wave(s.realized, k_half);
    if (rep.witness) rep.min_last_diff = rep.witness->last_difference();
    rep.target = lemma23_target(s.b, 2 * k_half, eps);
    rep.run_bound = 4 * s.r - 4;
    for (int c = 0; c < s.r; ++c) {
        rep.label_free_runs.push_back(longest_run_without(s.block_labels, c));
        rep.max_label_free_run = std::max(rep.max_label_free_run, rep.label_free_runs.back());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Label statistics

/// Frequencies of block labels over `groups` independently drawn groups:
/// marginal[j][c] counts block j (0-based within the group) labeled c, and
/// pairs[j][c*r+d] counts blocks j, j+1 labeled c, d. Pair index 2r-1 is the
/// boundary pair (last block of a group, first block of the next).
struct LabelStats {
    int r = 0;
    std::uint64_t groups = 0;
    std::vector<std::vector<std::uint64_t>> marginal;
    std::vector<std::vector<std::uint64_t>> pairs;
    std::uint64_t boundary_samples = 0;
};

inline LabelStats label_statistics(int r, std::uint64_t groups, std::uint64_t seed) {
    const auto matrix = build_matrix(r);
    const auto width = static_cast<std::size_t>(2 * r);
    const auto rr = static_cast<std::size_t>(r);
    LabelStats st;
    st.r = r;
    st.groups = groups;
    st.marginal.assign(width, std::vector<std::uint64_t>(rr, 0));
    st.pairs.assign(width, std::vector<std::uint64_t>(rr * rr, 0));
    CounterRng rng(seed);
    int prev_last = -1;
    for (std::uint64_t g = 0; g < groups; ++g) {
        const auto& row = matrix.rows[rng.uniform(rr * rr)];
        for (std::size_t j = 0; j < width; ++j) {
            ++st.marginal[j][static_cast<std::size_t>(row[j])];
            if (j + 1 < width) ++st.pairs[j][static_cast<std::size_t>(row[j]) * rr + static_cast<std::size_t>(row[j + 1])];
        }
        if (prev_last >= 0) {
            ++st.pairs[width - 1][static_cast<std::size_t>(prev_last) * rr + static_cast<std::size_t>(row[0])];
            ++st.boundary_samples;
        }
        prev_last = row[width - 1];
    }
    return st;
}

// ---------------------------------------------------------------------------
// Trial harness

struct ExperimentSetup {
    int r = 2;
    int k = 0;
    double eps = 0;
    int trials = 1;
    std::uint64_t seed = 0;
    int groups = 1;
    position_t t = 1;        ///< progression length for the bad-progression scan
    position_t min_diff = 0; ///< progressions need difference > min_diff
    int k_half = 2;          ///< wave length for the last-difference column
    int k_inner = 2;
    std::vector<Coloring> gammas;
    unsigned threads = 1;
};

struct TrialRow {
    int trial = 0;
    std::uint64_t seed = 0;
    bool bad_found = false;
    int longest_wave = 0;
    std::optional<position_t> min_last_diff;
};

inline TrialRow run_trial(const ExperimentSetup& e, int trial) {
    TrialRow row;
    row.trial = trial;
    row.seed = CounterRng::stream_key(e.seed, static_cast<std::uint64_t>(trial));
    const auto b = e.gammas.front().n();
    const auto s = sample_scheme(e.r, b, e.k_inner, e.groups, e.gammas, row.seed);
    row.bad_found = find_bad_progression(s, e.t, e.min_diff).has_value();
    row.longest_wave = longest_mono_wave(s.realized).length;
    row.min_last_diff = min_last_difference(s.realized, e.k_half);
    return row;
}

/// Runs every trial on its own stream; rows come back in trial order for any
/// thread count.
inline std::vector<TrialRow> run_experiment(const ExperimentSetup& e) {
    detail::require(e.trials >= 1, "need at least one trial");
    detail::require(!e.gammas.empty(), "experiment has no base colorings");
    validate_gammas(e.r, e.gammas.front().n(), e.k_inner, e.gammas);
    std::vector<TrialRow> rows(static_cast<std::size_t>(e.trials));
    const unsigned threads = std::max(1u, std::min<unsigned>(e.threads, static_cast<unsigned>(e.trials)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (auto i = static_cast<int>(w); i < e.trials; i += static_cast<int>(threads))
                    rows[static_cast<std::size_t>(i)] = run_trial(e, i);
            });
        }
    }
    return rows;
}

} // namespace ascwave
