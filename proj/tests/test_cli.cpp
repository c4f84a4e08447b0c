#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ascwave/cli.hpp"

using namespace ascwave;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run aw(std::vector<std::string> args) {
    args.insert(args.begin(), "aw");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("ascwave_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        store = (dir / "store").string();
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir;
    std::string store;
};

} // namespace

TEST_F(CliTest, ExactWritesVerifiableCertificate) {
    const auto r = aw({"exact", "--k", "3", "--r", "2", "--store", store});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("AW(3;2) = 7"), std::string::npos);
    const auto cert = fs::path(store) / "aw_k3_r2_n6.json";
    ASSERT_TRUE(fs::exists(cert));
    EXPECT_EQ(load_certificate(cert).coloring(), Coloring(2, {0, 1, 0, 0, 1, 1}));
    EXPECT_EQ(aw({"verify", "--input", cert.string(), "--k", "3"}).code, 0);
    EXPECT_EQ(aw({"verify", "--input", cert.string()}).code, 0);
}

TEST_F(CliTest, StoreFromEnvironment) {
    ::setenv("ASCWAVE_STORE", store.c_str(), 1);
    const auto r = aw({"exact", "--k", "2", "--r", "3"});
    ::unsetenv("ASCWAVE_STORE");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(fs::path(store) / "aw_k2_r3_n3.json"));
    EXPECT_EQ(resolve_store(std::nullopt), fs::path("certificates"));
}

TEST_F(CliTest, BudgetExhaustedExitsThree) {
    const auto r = aw({"exact", "--k", "7", "--r", "2", "--budget", "100", "--store", store});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("budget exhausted"), std::string::npos);
}

TEST_F(CliTest, TamperedCertificateExitsFour) {
    ASSERT_EQ(aw({"exact", "--k", "3", "--r", "2", "--store", store}).code, 0);
    const auto path = fs::path(store) / "aw_k3_r2_n6.json";
    auto rec = load_record(path);
    // 010011 -> 000011 puts color 0 on 1,2,3.
    rec.colors[1] = 0;
    const auto tampered = dir / "tampered";
    const auto p = save_certificate(rec, tampered);
    const auto r = aw({"verify", "--input", p.string(), "--k", "3"});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.out.find("FAILED"), std::string::npos);
    EXPECT_THROW(load_certificate(p), verification_failure);
    EXPECT_FALSE(best_in_store(tampered, 3, 2).has_value());

    rec.colors[1] = 5;
    const auto q = save_certificate(rec, dir / "badcolor");
    EXPECT_EQ(aw({"verify", "--input", q.string()}).code, 4);
}

TEST_F(CliTest, VerifyPlainColoring) {
    const auto good = write("good.txt", "010011\n");
    const auto bad = write("bad.txt", "0,1,0,1,0,1,0\n");
    EXPECT_EQ(aw({"verify", "--input", good, "--k", "3"}).code, 0);
    EXPECT_EQ(aw({"verify", "--input", bad, "--k", "3"}).code, 4);
    EXPECT_EQ(aw({"verify", "--input", good}).code, 2);
}

TEST_F(CliTest, LongestReadsBothFormats) {
    const auto compact = write("c.txt", "010101\n");
    const auto commas = write("d.txt", "0, 1, 0, 1, 0, 1\n");
    for (const auto& f : {compact, commas}) {
        const auto r = aw({"longest", "--input", f});
        EXPECT_EQ(r.code, 0);
        EXPECT_NE(r.out.find("longest: 3"), std::string::npos);
    }
    const auto wide = write("w.txt", "11,0,11\n");
    const auto r = aw({"longest", "--input", wide});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("r: 12"), std::string::npos);
    EXPECT_EQ(aw({"longest", "--input", write("x.txt", "01a1\n")}).code, 2);
    EXPECT_EQ(aw({"longest", "--input", (dir / "missing").string()}).code, 2);
}

TEST_F(CliTest, BoundsTable) {
    const auto r = aw({"bounds", "--k", "4", "--r", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("m_table"), std::string::npos);
    std::istringstream lines(r.out);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::istringstream fields(row);
    std::string k, rr, simple, m;
    fields >> k >> rr >> simple >> m;
    EXPECT_EQ(m, "14");
    EXPECT_EQ(simple, "64");

    const auto csv = aw({"bounds", "--table", "5", "3", "--csv", "--eps", "0.5"});
    EXPECT_EQ(csv.code, 0);
    EXPECT_NE(csv.out.find("3,2,27,7,4,7,"), std::string::npos);
    EXPECT_EQ(aw({"bounds"}).code, 2);
    EXPECT_EQ(aw({"bounds", "--k", "4", "--r", "2", "--eps", "-1"}).code, 2);
}

TEST_F(CliTest, CountWithOracle) {
    const auto r = aw({"count", "--n", "3", "--max-diff", "3", "--oracle"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("total = 6"), std::string::npos);
    EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
    EXPECT_EQ(aw({"count", "--n", "30", "--max-diff", "3", "--oracle"}).code, 2);
    EXPECT_EQ(aw({"count", "--n", "3", "--max-diff", "3", "--mode", "xyz"}).code, 2);
}

TEST_F(CliTest, Matrix) {
    const auto r = aw({"matrix", "--r", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("  1: 0 1 1 0"), std::string::npos);
    EXPECT_EQ(aw({"matrix", "--r", "1"}).code, 2);
}

TEST_F(CliTest, ConstructUsesStore) {
    // r = 3 at k = 160 needs an AW(2;2) certificate.
    const std::vector<std::string> args{"construct", "--k", "160", "--r", "3", "--eps", "0.5",
                                        "--groups", "2", "--seed", "1", "--store", store};
    EXPECT_EQ(aw(args).code, 2);
    ASSERT_EQ(aw({"exact", "--k", "2", "--r", "2", "--store", store}).code, 0);
    const auto r = aw(args);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("b: 2"), std::string::npos);
    EXPECT_NE(r.out.find("max_label_free_run"), std::string::npos);
    const auto r2 = aw({"construct", "--k", "80", "--r", "2", "--eps", "0.5", "--groups", "3", "--seed", "1"});
    EXPECT_EQ(r2.code, 0);
    EXPECT_NE(r2.out.find("b: 1"), std::string::npos);
    const auto small = aw({"construct", "--k", "79", "--r", "2", "--eps", "0.5", "--groups", "3", "--seed", "1"});
    EXPECT_EQ(small.code, 2);
    EXPECT_NE(small.err.find("below construction scale"), std::string::npos);
}

TEST_F(CliTest, MonteCarloReproducible) {
    ASSERT_EQ(aw({"exact", "--k", "2", "--r", "2", "--store", store}).code, 0);
    const auto cfg = write("mc.cfg", "# block construction\nr = 3\nk = 160\neps = 0.5\ntrials = 6\nseed = 12345\n"
                                     "groups = 4\nt = 3\nstore = " + store + "\n");
    const auto a = aw({"montecarlo", "--config", cfg, "--no-timestamp"});
    const auto b = aw({"--threads", "3", "montecarlo", "--config", cfg, "--no-timestamp"});
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("trial,seed,bad_found,longest_wave,min_last_diff"), std::string::npos);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 8);
    const auto stamped = aw({"montecarlo", "--config", cfg});
    EXPECT_NE(stamped.out.find("created_at="), std::string::npos);

    EXPECT_EQ(aw({"montecarlo", "--config", write("bad.cfg", "r = 3\nk = 160\n")}).code, 2);
    EXPECT_EQ(aw({"montecarlo", "--config", write("bad2.cfg", "r = 3\nk = 160\neps = 0.5\nflavor = x\n")}).code, 2);
}

TEST_F(CliTest, MonteCarloExplicitGammas) {
    ASSERT_EQ(aw({"exact", "--k", "3", "--r", "2", "--store", store}).code, 0);
    const auto base = (fs::path(store) / "aw_k3_r2_n6.json").string();
    const auto cfg = write("g.cfg", "r = 3\nk = 160\neps = 0.5\ntrials = 2\nseed = 1\ngroups = 2\ngamma = " + base + "\n");
    // gamma avoids 3-term waves but the scale asks for k_inner = 2, which a
    // 6-term base with repeated colors cannot avoid.
    EXPECT_EQ(aw({"montecarlo", "--config", cfg, "--no-timestamp"}).code, 2);
    const auto cfg2 = write("g2.cfg", "r = 3\nk = 240\neps = 0.5\ntrials = 2\nseed = 1\ngroups = 2\ngamma = " + base + "\n");
    const auto r = aw({"montecarlo", "--config", cfg2, "--no-timestamp"});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, ParseErrorsExitTwo) {
    EXPECT_EQ(aw({}).code, 2);
    EXPECT_EQ(aw({"exact", "--k", "3"}).code, 2);
    EXPECT_EQ(aw({"exact", "--k", "x", "--r", "2"}).code, 2);
    EXPECT_EQ(aw({"--help"}).code, 0);
}

TEST(ColorText, Parsing) {
    EXPECT_EQ(parse_color_line("0110\n"), (std::vector<int>{0, 1, 1, 0}));
    EXPECT_EQ(parse_color_line(" 3,10 ,0"), (std::vector<int>{3, 10, 0}));
    EXPECT_THROW(parse_color_line(""), invalid_input);
    EXPECT_THROW(parse_color_line("1,,2"), invalid_input);
    EXPECT_THROW(parse_color_line("1,2,"), invalid_input);
    EXPECT_THROW(parse_color_line("1,-2"), invalid_input);
    EXPECT_EQ(format_colors(Coloring(2, {0, 1, 1})), "011");
    EXPECT_EQ(format_colors(Coloring(12, {0, 11, 1})), "0,11,1");
}

TEST(Config, KeyValues) {
    const auto cfg = parse_experiment_config("r=3\nk = 200 # comment\neps=0.25\ngamma_0 = a.json\ngamma_2=c.json\n");
    EXPECT_EQ(cfg.r, 3);
    EXPECT_EQ(cfg.k, 200);
    EXPECT_DOUBLE_EQ(cfg.eps, 0.25);
    EXPECT_EQ(cfg.gamma_paths.at(2), "c.json");
    EXPECT_THROW(parse_experiment_config("r=3\nk=1\neps=0\n"), invalid_input);
    EXPECT_THROW(parse_experiment_config("r=3\nk=1\neps=0.1\ntrials=x\n"), invalid_input);
    EXPECT_THROW(parse_experiment_config("just words\n"), invalid_input);
}

TEST(Records, RoundTrip) {
    const auto res = exact_aw(4, 2);
    const auto rec = make_record(*res.extremal, Provenance::search, "2026-01-01T00:00:00Z");
    const auto dir = fs::temp_directory_path() / "ascwave_roundtrip";
    fs::remove_all(dir);
    const auto path = save_certificate(rec, dir);
    EXPECT_EQ(path.filename(), "aw_k4_r2_n12.json");
    const auto back = load_record(path);
    EXPECT_EQ(back.colors, rec.colors);
    EXPECT_EQ(back.created_at, rec.created_at);
    EXPECT_EQ(back.provenance, Provenance::search);
    EXPECT_EQ(best_in_store(dir, 4, 2)->n(), 12);
    fs::remove_all(dir);
}
