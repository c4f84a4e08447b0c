#pragma once

// The `aw` command-line front end. run() takes explicit streams so the whole
// command surface can be driven in-process by tests.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ascwave/bounds.hpp"
#include "ascwave/core.hpp"
#include "ascwave/counting.hpp"
#include "ascwave/errors.hpp"
#include "ascwave/io.hpp"
#include "ascwave/randcolor.hpp"
#include "ascwave/solver.hpp"

namespace ascwave::cli {

enum ExitCode : int {
    ok = 0,
    internal_error = 1,
    bad_input = 2,
    budget_exhausted = 3,
    verification_failed = 4,
};

namespace detail {

using ascwave::detail::require;

inline std::string positions_text(const WaveCertificate& w) {
    std::string s;
    for (std::size_t i = 0; i < w.positions.size(); ++i) s += (i ? "," : "") + std::to_string(w.positions[i]);
    return s;
}

inline std::string differences_text(const WaveCertificate& w) {
    std::string s;
    const auto d = w.differences();
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s;
}

inline void print_wave(std::ostream& out, const std::string& label, const WaveCertificate& w) {
    out << label << ": color " << w.color << ", positions " << positions_text(w);
    if (w.size() >= 2) out << ", differences " << differences_text(w);
    out << '\n';
}

inline std::string fmt_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : "inf";
    std::ostringstream ss;
    ss << std::setprecision(6) << v;
    return ss.str();
}

/// Writes rows either as CSV or as left-aligned columns.
inline void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows, bool csv) {
    if (csv) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << '\n';
        }
        return;
    }
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        out << line << '\n';
    }
}

/// The (r-1)-color certificate that seeds the base colorings of an r-color
/// block scheme. One color needs no search: k_inner - 1 equal colors.
inline std::optional<AvoidanceCertificate> base_certificate(const fs::path& store, int k_inner, int r) {
    if (r - 1 == 1) return AvoidanceCertificate(Coloring(1, std::vector<int>(static_cast<std::size_t>(k_inner - 1), 0)), k_inner);
    return best_in_store(store, k_inner, r - 1);
}

/// Base colorings gamma_0..gamma_{r-1} from a certificate that is either an
/// (r-1)-coloring (relabeled) or already an r-coloring omitting color `i`.
inline Coloring gamma_from(const AvoidanceCertificate& cert, int r, int i) {
    if (cert.r() == r - 1) return relabel_base_coloring(cert.coloring(), i);
    require(cert.r() == r, "gamma certificate must use r-1 or r colors");
    return cert.coloring();
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned threads = 1;
};

// ---------------------------------------------------------------------------

struct ExactArgs {
    int k = 0, r = 0;
    std::optional<std::uint64_t> budget;
    std::optional<std::string> store;
};

inline int cmd_exact(Context& ctx, const ExactArgs& a) {
    SearchOptions opts;
    opts.node_budget = a.budget;
    opts.threads = ctx.threads;
    const auto res = exact_aw(a.k, a.r, opts);
    const bool done = res.status == SearchStatus::complete;
    if (done)
        ctx.out << "AW(" << a.k << ";" << a.r << ") = " << *res.aw_value << '\n';
    else
        ctx.out << "AW(" << a.k << ";" << a.r << ") >= " << res.lower_bound() << " (budget exhausted)\n";
    ctx.out << "nodes: " << res.nodes_explored << '\n';
    ctx.out << "seconds: " << fmt_double(res.wall_time.count()) << '\n';
    if (res.extremal) {
        const auto path = save_certificate(make_record(*res.extremal, Provenance::search), resolve_store(a.store));
        ctx.out << "certificate: " << path.string() << " (" << format_colors(res.extremal->coloring()) << ")\n";
    } else {
        ctx.out << "certificate: none\n";
    }
    return done ? ok : budget_exhausted;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
    int k = 0, r = 0;
    std::optional<double> eps;
    std::vector<int> table;
    bool csv = false;
};

inline std::vector<std::string> bounds_row(const BoundTable& t, int k, int r, std::optional<double> eps) {
    std::vector<std::string> row{std::to_string(k), std::to_string(r)};
    row.push_back(simple_upper(k, r).str());
    row.push_back(t.M(k, r).str());
    row.push_back(t.D(k, r).str());
    row.push_back(k >= 3 && r >= 2 ? lemma13_bound(k, r, t).str() : "-");
    row.push_back(fmt_double(thm1_asymptotic(k, r)));
    row.push_back(k >= 3 ? fmt_double(cor15_asymptotic(k, r)) : "-");
    row.push_back(eps ? fmt_double(thm2_lower(k, r, *eps)) : "-");
    row.push_back(r == 3 ? fmt_double(thm3_lower(k)) + ".." + fmt_double(thm3_upper(k)) : "-");
    return row;
}

inline int cmd_bounds(Context& ctx, const BoundsArgs& a) {
    if (a.eps) require(*a.eps > 0, "--eps must be positive");
    std::vector<std::vector<std::string>> rows{
        {"k", "r", "simple_upper", "m_table", "delta_bound", "lemma13", "thm1", "cor15", "thm2", "thm3"}};
    if (!a.table.empty()) {
        require(a.table.size() == 2, "--table takes MAXK MAXR");
        const int mk = a.table[0], mr = a.table[1];
        require(mk >= 1 && mr >= 1, "--table extents must be positive");
        const BoundTable t(mk, mr);
        for (int r = 1; r <= mr; ++r)
            for (int k = 1; k <= mk; ++k) rows.push_back(bounds_row(t, k, r, a.eps));
    } else {
        require(a.k >= 1 && a.r >= 1, "--k and --r are required without --table");
        rows.push_back(bounds_row(BoundTable(a.k, a.r), a.k, a.r, a.eps));
    }
    print_table(ctx.out, rows, a.csv);
    if (!a.csv) {
        ctx.out << "thm1, cor15, thm2, thm3 are leading-term evaluations; thm2 and thm3 are asymptotic-only "
                   "(valid for k sufficiently large).\n";
        if (!a.eps) ctx.out << "thm2 needs --eps.\n";
    }
    return ok;
}

// ---------------------------------------------------------------------------

inline int cmd_longest(Context& ctx, const std::string& input, std::optional<int> r) {
    const auto c = read_coloring(input, r);
    const auto lw = longest_mono_wave(c);
    ctx.out << "n: " << c.n() << '\n';
    ctx.out << "r: " << c.r() << '\n';
    ctx.out << "longest: " << lw.length << '\n';
    print_wave(ctx.out, "witness", lw.witness);
    return ok;
}

// ---------------------------------------------------------------------------

inline int cmd_verify(Context& ctx, const std::string& input, std::optional<int> k, std::optional<int> r) {
    const auto text = read_text(input);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = first != std::string::npos && text[first] == '{';
    Coloring c{1, {0}};
    int kk = 0;
    if (is_json) {
        const auto rec = load_record(input);
        kk = k.value_or(rec.k);
        // certify() checks the record's own k; a different --k is checked below.
        if (kk == rec.k) {
            try {
                const auto cert = rec.certify();
                ctx.out << "verified: n = " << cert.n() << ", r = " << cert.r() << ", no " << kk
                        << "-term monochromatic ascending wave\n";
                return ok;
            } catch (const verification_failure& e) {
                ctx.out << "FAILED: " << e.what() << '\n';
                try {
                    if (auto w = find_mono_wave(Coloring(rec.r, rec.colors), kk)) print_wave(ctx.out, "wave", *w);
                } catch (const invalid_input&) {
                }
                return verification_failed;
            }
        }
        try {
            c = Coloring(rec.r, rec.colors);
        } catch (const invalid_input& e) {
            ctx.out << "FAILED: malformed certificate: " << e.what() << '\n';
            return verification_failed;
        }
    } else {
        require(k.has_value(), "--k is required for a plain coloring");
        kk = *k;
        c = read_coloring(input, r);
    }
    require(kk >= 1, "--k must be at least 1");
    if (verify_avoidance(c, kk)) {
        ctx.out << "verified: n = " << c.n() << ", r = " << c.r() << ", no " << kk
                << "-term monochromatic ascending wave\n";
        return ok;
    }
    ctx.out << "FAILED: coloring contains a " << kk << "-term monochromatic ascending wave\n";
    if (auto w = find_mono_wave(c, kk)) print_wave(ctx.out, "wave", *w);
    return verification_failed;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
    int k = 0, r = 0;
    double eps = 0;
    int groups = 1;
    std::uint64_t seed = 0;
    std::optional<std::string> store;
    std::optional<position_t> length;
};

inline int cmd_construct(Context& ctx, const ConstructArgs& a) {
    require(a.r >= 2, "--r must be at least 2");
    require(a.eps > 0, "--eps must be positive");
    const int k_inner = block_inner_k(a.k, a.r);
    require(k_inner >= 2, "below construction scale: floor(k / (10(4r-4))) = " + std::to_string(k_inner) +
                              " < 2 for k = " + std::to_string(a.k) + ", r = " + std::to_string(a.r));
    const auto store = resolve_store(a.store);
    const auto base = base_certificate(store, k_inner, a.r);
    require(base.has_value(), "no certificate for AW(" + std::to_string(k_inner) + ";" + std::to_string(a.r - 1) +
                                  ") in " + store.string() + "; run `aw exact --k " + std::to_string(k_inner) +
                                  " --r " + std::to_string(a.r - 1) + "` first");
    auto gammas = base_colorings_from(base->coloring());
    const auto scheme = sample_scheme(a.r, base->n(), k_inner, a.groups, std::move(gammas), a.seed, a.length);

    ctx.out << "r: " << scheme.r << '\n';
    ctx.out << "k: " << a.k << '\n';
    ctx.out << "k_inner: " << scheme.k_inner << '\n';
    ctx.out << "b: " << scheme.b << '\n';
    ctx.out << "seed: " << a.seed << '\n';
    ctx.out << "base: " << format_colors(base->coloring()) << '\n';
    ctx.out << "group_rows:";
    for (int g : scheme.group_rows) ctx.out << ' ' << g;
    ctx.out << "\nblock_labels:";
    for (int l : scheme.block_labels) ctx.out << ' ' << l;
    ctx.out << "\nlength: " << scheme.length() << '\n';
    ctx.out << "coloring: " << format_colors(scheme.realized) << '\n';

    const auto lw = longest_mono_wave(scheme.realized);
    ctx.out << "longest: " << lw.length << '\n';
    print_wave(ctx.out, "witness", lw.witness);

    const int k_half = std::max(2, a.k / 2);
    const auto prof = last_difference_profile(scheme, k_half, a.eps);
    ctx.out << "k_half: " << k_half << '\n';
    if (prof.min_last_diff)
        ctx.out << "min_last_diff: " << *prof.min_last_diff << '\n';
    else
        ctx.out << "min_last_diff: absent (no " << k_half << "-term monochromatic wave)\n";
    ctx.out << "target: " << fmt_double(prof.target) << '\n';
    ctx.out << "max_label_free_run: " << prof.max_label_free_run << " (bound " << prof.run_bound << ")\n";
    return ok;
}

// ---------------------------------------------------------------------------

inline std::vector<Coloring> experiment_gammas(const ExperimentConfig& cfg, int k_inner) {
    std::vector<Coloring> gammas;
    if (!cfg.gamma_paths.empty()) {
        for (int i = 0; i < cfg.r; ++i) {
            auto it = cfg.gamma_paths.find(i);
            require(it != cfg.gamma_paths.end(), "config is missing gamma_" + std::to_string(i));
            gammas.push_back(gamma_from(load_certificate(it->second), cfg.r, i));
        }
        return gammas;
    }
    std::optional<AvoidanceCertificate> base;
    if (cfg.gamma) {
        base.emplace(load_certificate(*cfg.gamma));
        require(base->r() == cfg.r - 1, "gamma certificate must use r-1 colors");
    } else {
        const auto store = resolve_store(cfg.store);
        base = base_certificate(store, k_inner, cfg.r);
        require(base.has_value(), "no certificate for AW(" + std::to_string(k_inner) + ";" +
                                      std::to_string(cfg.r - 1) + ") in " + store.string());
    }
    return base_colorings_from(base->coloring());
}

inline int cmd_montecarlo(Context& ctx, const std::string& config, bool no_timestamp) {
    const auto cfg = parse_experiment_config(read_text(config));
    const int k_inner = block_inner_k(cfg.k, cfg.r);
    require(k_inner >= 2, "below construction scale: floor(k / (10(4r-4))) = " + std::to_string(k_inner) +
                              " < 2 for k = " + std::to_string(cfg.k) + ", r = " + std::to_string(cfg.r));
    ExperimentSetup e;
    e.r = cfg.r;
    e.k = cfg.k;
    e.eps = cfg.eps;
    e.trials = cfg.trials;
    e.seed = cfg.seed;
    e.groups = cfg.groups;
    e.k_inner = k_inner;
    e.gammas = experiment_gammas(cfg, k_inner);
    const position_t b = e.gammas.front().n();
    e.t = cfg.t.value_or(static_cast<position_t>(std::ceil(lemma22_t(cfg.k, cfg.r))));
    e.min_diff = cfg.min_diff.value_or(b);
    e.k_half = cfg.k_half.value_or(cfg.k / 2);
    e.threads = ctx.threads;
    const auto rows = run_experiment(e);

    ctx.out << "# r=" << e.r << " k=" << e.k << " eps=" << fmt_double(e.eps) << " seed=" << e.seed
            << " groups=" << e.groups << " b=" << b << " k_inner=" << e.k_inner << " t=" << e.t
            << " min_diff=" << e.min_diff << " k_half=" << e.k_half;
    if (!no_timestamp) ctx.out << " created_at=" << utc_timestamp();
    ctx.out << '\n';
    ctx.out << "trial,seed,bad_found,longest_wave,min_last_diff\n";
    for (const auto& row : rows) {
        ctx.out << row.trial << ',' << row.seed << ',' << (row.bad_found ? 1 : 0) << ',' << row.longest_wave << ',';
        if (row.min_last_diff) ctx.out << *row.min_last_diff;
        ctx.out << '\n';
    }
    return ok;
}

// ---------------------------------------------------------------------------

inline int cmd_count(Context& ctx, int n, int d, const std::string& mode, bool oracle) {
    require(mode == "aw" || mode == "aaw" || mode == "both", "--mode must be aw, aaw or both");
    std::vector<CountMode> modes;
    if (mode != "aaw") modes.push_back(CountMode::aw_strict);
    if (mode != "aw") modes.push_back(CountMode::aaw_weak);
    bool mismatch = false;
    bigint total = 0;
    for (auto m : modes) {
        const CountQuery q{n, d, m};
        const auto v = count_waves(q);
        total += v;
        const char* name = m == CountMode::aw_strict ? "aw" : "aaw";
        ctx.out << name << "(n=" << n << ", D=" << d << ") = " << v;
        if (oracle) {
            const auto b = brute_count(q);
            ctx.out << "  brute = " << b << (b == v ? " (match)" : " (MISMATCH)");
            mismatch |= b != v;
        }
        ctx.out << '\n';
    }
    if (modes.size() == 2) ctx.out << "total = " << total << '\n';
    return mismatch ? verification_failed : ok;
}

// ---------------------------------------------------------------------------

inline int cmd_matrix(Context& ctx, int r) {
    const auto a = build_matrix(r);
    for (int i = 0; i < a.row_count(); ++i) {
        ctx.out << std::setw(3) << i << ':';
        for (int v : a.rows[static_cast<std::size_t>(i)]) ctx.out << ' ' << v;
        ctx.out << '\n';
    }
    const auto chk = check_matrix(a);
    auto yn = [](bool b) { return b ? "yes" : "NO"; };
    ctx.out << "column_balance: " << yn(chk.column_balance) << '\n';
    ctx.out << "adjacent_pairs_unique: " << yn(chk.adjacent_pairs_unique) << '\n';
    ctx.out << "row_multiplicity_two: " << yn(chk.row_multiplicity_two) << '\n';
    ctx.out << "max_label_free_run: " << chk.max_label_free_run << " (bound " << chk.run_bound << ")\n";
    return chk.ok() ? ok : verification_failed;
}

} // namespace detail

/// Parses argv and runs one subcommand; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Ascending-wave Ramsey numbers: exact search, bounds, certificates and constructions", "aw"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads for search and sampling")->check(CLI::Range(1u, 1024u));

    detail::ExactArgs ex;
    auto* exact = app.add_subcommand("exact", "Compute AW(K;R) by exhaustive search");
    exact->add_option("--k", ex.k, "Wave length")->required()->check(CLI::PositiveNumber);
    exact->add_option("--r", ex.r, "Number of colors")->required()->check(CLI::PositiveNumber);
    exact->add_option("--budget", ex.budget, "Node budget");
    exact->add_option("--store", ex.store, "Certificate directory");

    detail::BoundsArgs bd;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the upper and lower bounds");
    bounds->add_option("--k", bd.k, "Wave length")->check(CLI::PositiveNumber);
    bounds->add_option("--r", bd.r, "Number of colors")->check(CLI::PositiveNumber);
    bounds->add_option("--eps", bd.eps, "Exponent slack for the asymptotic lower bound");
    bounds->add_option("--table", bd.table, "Tabulate every (k, r) up to MAXK MAXR")->expected(2);
    bounds->add_flag("--csv", bd.csv, "CSV output");

    std::string input;
    std::optional<int> in_k, in_r;
    auto* longest = app.add_subcommand("longest", "Longest monochromatic ascending wave of a coloring");
    longest->add_option("--input", input, "Coloring file")->required();
    longest->add_option("--r", in_r, "Palette size (default: largest color + 1)");

    auto* verify = app.add_subcommand("verify", "Check that a coloring avoids K-term monochromatic waves");
    verify->add_option("--input", input, "Certificate or coloring file")->required();
    verify->add_option("--k", in_k, "Wave length (default: the certificate's)");
    verify->add_option("--r", in_r, "Palette size for a plain coloring");

    detail::ConstructArgs co;
    auto* construct = app.add_subcommand("construct", "Sample a random block coloring");
    construct->add_option("--k", co.k, "Wave length")->required();
    construct->add_option("--r", co.r, "Number of colors")->required();
    construct->add_option("--eps", co.eps, "Exponent slack")->required();
    construct->add_option("--groups", co.groups, "Number of groups of 2r blocks")->required();
    construct->add_option("--seed", co.seed, "64-bit seed")->required();
    construct->add_option("--store", co.store, "Certificate directory");
    construct->add_option("--length", co.length, "Truncate to this many positions");

    std::string config;
    bool no_timestamp = false;
    auto* monte = app.add_subcommand("montecarlo", "Run sampled trials of the block construction");
    monte->add_option("--config", config, "key = value experiment file")->required();
    monte->add_flag("--no-timestamp", no_timestamp, "Omit created_at from the header");

    int cn = 0, cd = 0;
    std::string cmode = "both";
    bool oracle = false;
    auto* count = app.add_subcommand("count", "Count waves by difference sequence");
    count->add_option("--n", cn, "Wave length")->required();
    count->add_option("--max-diff", cd, "Last difference bound D")->required();
    count->add_option("--mode", cmode, "aw, aaw or both");
    count->add_flag("--oracle", oracle, "Cross-check with exhaustive enumeration");

    int mr = 0;
    auto* matrix = app.add_subcommand("matrix", "Print the block label matrix and its checks");
    matrix->add_option("--r", mr, "Number of colors")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : bad_input;
    }

    detail::Context ctx{out, err, threads};
    try {
        if (*exact) return detail::cmd_exact(ctx, ex);
        if (*bounds) return detail::cmd_bounds(ctx, bd);
        if (*longest) return detail::cmd_longest(ctx, input, in_r);
        if (*verify) return detail::cmd_verify(ctx, input, in_k, in_r);
        if (*construct) return detail::cmd_construct(ctx, co);
        if (*monte) return detail::cmd_montecarlo(ctx, config, no_timestamp);
        if (*count) return detail::cmd_count(ctx, cn, cd, cmode, oracle);
        if (*matrix) return detail::cmd_matrix(ctx, mr);
    } catch (const invalid_input& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const verification_failure& e) {
        err << "verification failed: " << e.what() << '\n';
        return verification_failed;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal_error;
    }
    return bad_input;
}

} // namespace ascwave::cli
