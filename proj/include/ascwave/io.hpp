#pragma once

// Certificate persistence, coloring text input and experiment configs.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ascwave/core.hpp"
#include "ascwave/errors.hpp"
#include "ascwave/solver.hpp"

namespace ascwave {

namespace fs = std::filesystem;

enum class Provenance { search, constructed, imported };

inline std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::search: return "search";
    case Provenance::constructed: return "constructed";
    case Provenance::imported: return "imported";
    }
    return "imported";
}

inline Provenance parse_provenance(const std::string& s) {
    if (s == "search") return Provenance::search;
    if (s == "constructed") return Provenance::constructed;
    if (s == "imported") return Provenance::imported;
    throw invalid_input("unknown provenance '" + s + "'");
}

struct CertificateRecord {
    static constexpr int current_schema = 1;

    int schema_version = current_schema;
    int k = 0;
    int r = 0;
    position_t n = 0;
    std::vector<int> colors;
    std::string claim{AvoidanceCertificate::claim};
    Provenance provenance = Provenance::search;
    std::string created_at;

    /// Re-runs the avoidance check; throws verification_failure if it fails.
    AvoidanceCertificate certify() const {
        if (static_cast<position_t>(colors.size()) != n)
            throw verification_failure("certificate lists " + std::to_string(colors.size()) + " colors but n = " +
                                       std::to_string(n));
        if (claim != AvoidanceCertificate::claim) throw verification_failure("unsupported claim '" + claim + "'");
        try {
            return {Coloring(r, colors), k};
        } catch (const invalid_input& e) {
            throw verification_failure(std::string("malformed certificate: ") + e.what());
        }
    }
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

inline CertificateRecord make_record(const AvoidanceCertificate& c, Provenance p, std::string created_at = utc_timestamp()) {
    CertificateRecord rec;
    rec.k = c.k();
    rec.r = c.r();
    rec.n = c.n();
    rec.colors.assign(c.coloring().colors().begin(), c.coloring().colors().end());
    rec.provenance = p;
    rec.created_at = std::move(created_at);
    return rec;
}

inline nlohmann::ordered_json to_json(const CertificateRecord& rec) {
    nlohmann::ordered_json j;
    j["schema_version"] = rec.schema_version;
    j["k"] = rec.k;
    j["r"] = rec.r;
    j["n"] = rec.n;
    j["colors"] = rec.colors;
    j["claim"] = rec.claim;
    j["provenance"] = to_string(rec.provenance);
    j["created_at"] = rec.created_at;
    return j;
}

inline CertificateRecord record_from_json(const nlohmann::json& j) {
    CertificateRecord rec;
    try {
        rec.schema_version = j.at("schema_version").get<int>();
        rec.k = j.at("k").get<int>();
        rec.r = j.at("r").get<int>();
        rec.n = j.at("n").get<position_t>();
        rec.colors = j.at("colors").get<std::vector<int>>();
        rec.claim = j.at("claim").get<std::string>();
        rec.provenance = parse_provenance(j.at("provenance").get<std::string>());
        rec.created_at = j.at("created_at").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("certificate JSON: ") + e.what());
    }
    if (rec.schema_version != CertificateRecord::current_schema)
        throw invalid_input("unsupported schema_version " + std::to_string(rec.schema_version));
    return rec;
}

inline std::string certificate_filename(int k, int r, position_t n) {
    return "aw_k" + std::to_string(k) + "_r" + std::to_string(r) + "_n" + std::to_string(n) + ".json";
}

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes `rec` into `dir` (created if needed) and returns the file path.
inline fs::path save_certificate(const CertificateRecord& rec, const fs::path& dir) {
    fs::create_directories(dir);
    const auto path = dir / certificate_filename(rec.k, rec.r, rec.n);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw invalid_input("cannot write " + path.string());
    out << to_json(rec).dump(2) << '\n';
    return path;
}

inline CertificateRecord load_record(const fs::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(path.string() + ": " + e.what());
    }
    return record_from_json(j);
}

/// Loads and re-verifies a certificate. Never trusts the stored claim.
inline AvoidanceCertificate load_certificate(const fs::path& path) { return load_record(path).certify(); }

/// Longest verified certificate for (k, r) in `dir`, if any. Files that fail
/// to parse or verify are skipped.
inline std::optional<AvoidanceCertificate> best_in_store(const fs::path& dir, int k, int r) {
    std::optional<AvoidanceCertificate> best;
    if (!fs::is_directory(dir)) return best;
    const std::string prefix = "aw_k" + std::to_string(k) + "_r" + std::to_string(r) + "_n";
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (!name.starts_with(prefix) || !name.ends_with(".json")) continue;
        try {
            auto cert = load_certificate(entry.path());
            if (cert.k() != k || cert.r() != r) continue;
            if (!best || cert.n() > best->n()) best.emplace(std::move(cert));
        } catch (const std::exception&) {
        }
    }
    return best;
}

/// `--store` if given, else $ASCWAVE_STORE, else ./certificates.
inline fs::path resolve_store(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("ASCWAVE_STORE"); env && *env) return env;
    return "certificates";
}

// ---------------------------------------------------------------------------
// Coloring text

/// Colors from a single line: comma-separated indices ("0,1,10") or the
/// compact digit form ("0110"). Compact input is read only when it has no
/// separators; a compact string cannot express colors above 9.
inline std::vector<int> parse_color_line(const std::string& text) {
    std::string line = text;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    detail::require(first != std::string::npos, "empty coloring");
    line = line.substr(first);
    detail::require(line.find('\n') == std::string::npos, "coloring must be a single line");

    std::vector<int> colors;
    if (line.find(',') == std::string::npos) {
        for (char ch : line) {
            detail::require(ch >= '0' && ch <= '9', std::string("unexpected character '") + ch + "' in coloring");
            colors.push_back(ch - '0');
        }
        return colors;
    }
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t");
        const auto e = field.find_last_not_of(" \t");
        detail::require(b != std::string::npos, "empty field in coloring");
        const auto token = field.substr(b, e - b + 1);
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        detail::require(used == token.size() && v >= 0, "bad color '" + token + "'");
        colors.push_back(v);
    }
    detail::require(!line.ends_with(","), "trailing comma in coloring");
    return colors;
}

/// Reads a coloring from a file: either a certificate JSON object or a
/// coloring line. For a plain line the palette is `r` if given, else one more
/// than the largest color used.
inline Coloring read_coloring(const fs::path& path, std::optional<int> r = std::nullopt) {
    const auto text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    detail::require(first != std::string::npos, path.string() + " is empty");
    if (text[first] == '{') {
        const auto rec = load_record(path);
        return {r.value_or(rec.r), rec.colors};
    }
    auto colors = parse_color_line(text);
    int palette = 1;
    for (int c : colors) palette = std::max(palette, c + 1);
    if (r) {
        detail::require(*r >= palette, "coloring uses color " + std::to_string(palette - 1) + " but r = " +
                                           std::to_string(*r));
        palette = *r;
    }
    return {palette, std::move(colors)};
}

inline std::string format_colors(const Coloring& c) {
    std::string out;
    const bool compact = c.r() <= 10;
    for (std::size_t i = 0; i < c.colors().size(); ++i) {
        if (!compact && i > 0) out += ',';
        out += std::to_string(c.colors()[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiment configuration

/// key = value lines; '#' starts a comment. Repeated keys keep the last value.
inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        detail::require(eq != std::string::npos, "config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        detail::require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

/// Settings for a Monte Carlo run. gamma_paths[i] names the certificate for
/// gamma_i; a single `gamma` names an (r-1)-color certificate relabeled into
/// all r base colorings.
struct ExperimentConfig {
    int r = 2;
    int k = 0;
    double eps = 0;
    int trials = 1;
    std::uint64_t seed = 0;
    int groups = 1;
    std::optional<position_t> t;
    std::optional<position_t> min_diff;
    std::optional<int> k_half;
    std::optional<std::string> gamma;
    std::map<int, std::string> gamma_paths;
    std::optional<std::string> store;
};

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    std::istringstream in(value);
    in >> out;
    require(in && in.eof(), "config key '" + key + "': bad value '" + value + "'");
    return out;
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    bool have_k = false, have_eps = false;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (key == "r") cfg.r = detail::parse_number<int>(key, value);
        else if (key == "k") { cfg.k = detail::parse_number<int>(key, value); have_k = true; }
        else if (key == "eps") { cfg.eps = detail::parse_number<double>(key, value); have_eps = true; }
        else if (key == "trials") cfg.trials = detail::parse_number<int>(key, value);
        else if (key == "seed") cfg.seed = detail::parse_number<std::uint64_t>(key, value);
        else if (key == "groups") cfg.groups = detail::parse_number<int>(key, value);
        else if (key == "t") cfg.t = detail::parse_number<position_t>(key, value);
        else if (key == "min_diff") cfg.min_diff = detail::parse_number<position_t>(key, value);
        else if (key == "k_half") cfg.k_half = detail::parse_number<int>(key, value);
        else if (key == "gamma") cfg.gamma = value;
        else if (key == "store") cfg.store = value;
        else if (key.starts_with("gamma_")) cfg.gamma_paths[detail::parse_number<int>(key, key.substr(6))] = value;
        else throw invalid_input("unknown config key '" + key + "'");
    }
    detail::require(have_k, "config needs k");
    detail::require(have_eps, "config needs eps (no default is assumed)");
    detail::require(cfg.eps > 0, "eps must be positive");
    detail::require(cfg.r >= 2, "config r must be at least 2");
    detail::require(cfg.trials >= 1 && cfg.groups >= 1, "trials and groups must be positive");
    return cfg;
}

} // namespace ascwave
