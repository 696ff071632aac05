#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mhdlab/io/commands.hpp"

using namespace mhdlab;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("mhdlab_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const auto p = dir / "run.cfg";
    std::ofstream(p) << body << "output = " << (dir / "out").string() << "\n";
    return p;
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

} // namespace

TEST(ParseConfig, MinimalFillsDefaults) {
    const auto c = parse_config("# minimal\ndim = 2\nn = 32\ninitial = constant(0)\n");
    EXPECT_EQ(c.dim, 2);
    EXPECT_EQ(c.n, 32);
    EXPECT_EQ(c.nu, 1.0);
    EXPECT_EQ(c.substeps, 16);
    EXPECT_EQ(c.criterion, Criterion::Thm11);
    EXPECT_EQ(c.delta, 0.5);
    EXPECT_FALSE(c.alpha.has_value());
    EXPECT_EQ(c.walks, 100000u);
    EXPECT_FALSE(c.calibrate);
    EXPECT_EQ(c.ledger().c4(), 1.0);
}

TEST(ParseConfig, DeltaOutOfRangeNamesInterval) {
    const auto e = error_of("dim=2\nn=32\ndelta=1.5\ninitial=constant(0)\n");
    EXPECT_NE(e.find("line 3"), std::string::npos) << e;
    EXPECT_NE(e.find("(0,1)"), std::string::npos) << e;
}

TEST(ParseConfig, DuplicateCitesBothLines) {
    const auto e = error_of("dim=2\nn=32\n\nnu=0.1\ninitial=constant(0)\nnu=0.2\n");
    EXPECT_NE(e.find("line 4"), std::string::npos) << e;
    EXPECT_NE(e.find("line 6"), std::string::npos) << e;
}

TEST(ParseConfig, RejectsBadInput) {
    EXPECT_NE(error_of("dim=2\nn=32\ninitial=constant(0)\ncolour=red\n").find("line 4: unknown key"),
              std::string::npos);
    EXPECT_NE(error_of("dim=2\ninitial=constant(0)\n").find("missing required key 'n'"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn 32\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("dim=4\nn=32\ninitial=constant(0)\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=48\ninitial=constant(0)\n").find("power of two"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=32\nnu=abc\ninitial=constant(0)\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=32\nstride=3\ninitial=constant(0)\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=32\nhorizon=1\nepsilon=2\ninitial=constant(0)\n").find("line 4"),
              std::string::npos);
    EXPECT_NE(error_of("dim=3\nn=16\ninitial=orszag-tang\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=16\nc4=0.5\ninitial=constant(0)\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=16\nconstants=calibrate\nc1=2\ninitial=constant(0)\n").find("line 4"),
              std::string::npos);
    EXPECT_NE(error_of("dim=2\nn=16\nalpha=0.1\ninitial=constant(0)\n").find("line 3"), std::string::npos);
}

TEST(ParseConfig, ResolvedTextRoundTrips) {
    const auto c = parse_config("dim=3\nn=16\nlength=1.5\ncriterion=thm13\nbeta=0.8\nalpha=2\n"
                                "initial=random-divfree(seed=4, slope=2, amplitude=0.3)\n");
    const auto again = parse_config(c.resolved_text());
    EXPECT_EQ(again.resolved_text(), c.resolved_text());
    EXPECT_EQ(again.length, 1.5);
    EXPECT_EQ(*again.alpha, 2.0);
    EXPECT_EQ(again.criterion, Criterion::Thm13);
}

TEST(GenerateInitial, ConstantZeroOrszagTangAndDeterminism) {
    const Grid g(2, 64, 2.0 * std::numbers::pi);
    const auto [u, b] = generate_initial(parse_initial_spec("constant(0)"), g);
    EXPECT_EQ(sup_norm(u), 0.0);
    EXPECT_EQ(sup_norm(b), 0.0);
    const auto [ou, ob] = generate_initial(parse_initial_spec("orszag-tang"), g);
    // Each component depends only on the other coordinate, so the divergence vanishes analytically.
    EXPECT_LE(sup_norm(divergence(ou)), 1e-10);
    EXPECT_LE(sup_norm(divergence(ob)), 1e-10);
    EXPECT_NEAR(ou[0].value(g.flat({0, 16, 0})), -std::sin(g.coordinate(g.flat({0, 16, 0}))[1]), 1e-15);
    const auto spec = parse_initial_spec("random-divfree(seed=9, slope=2, amplitude=1)");
    const auto [r1, s1] = generate_initial(spec, g);
    const auto [r2, s2] = generate_initial(spec, g);
    for (int a = 0; a < 2; ++a)
        EXPECT_EQ(0, std::memcmp(r1[a].values().data(), r2[a].values().data(), g.size() * sizeof(double)));
    EXPECT_THROW(generate_initial(parse_initial_spec("orszag-tang"), Grid(3, 8, 1.0)), ParameterError);
}

TEST(Snapshot, BitExactRoundTrip) {
    const Grid g(3, 8, 1.25);
    const auto u = random_divergence_free(g, 3, 1.0, 1.0);
    const auto b = random_divergence_free(g, 4, 1.0, 0.5);
    const auto pi = solve_total_pressure(u, b);
    const Snapshot s{g, 0.125, u, b, pi, "dim=3\nn=8\n"};
    std::stringstream ss;
    write_snapshot(ss, s);
    const std::string bytes = ss.str();
    EXPECT_EQ(bytes.substr(0, 5), "MHDS1");
    // Little-endian header: D = 3 then N = 8.
    EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 3u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[9]), 8u);
    const auto r = read_snapshot(ss);
    EXPECT_EQ(r.grid, g);
    EXPECT_EQ(r.t, 0.125);
    EXPECT_EQ(r.config, s.config);
    ASSERT_TRUE(r.u && r.b && r.pressure);
    for (int a = 0; a < 3; ++a) {
        EXPECT_EQ(0, std::memcmp((*r.u)[a].values().data(), u[a].values().data(), g.size() * sizeof(double)));
        EXPECT_EQ(0, std::memcmp((*r.b)[a].values().data(), b[a].values().data(), g.size() * sizeof(double)));
    }
    EXPECT_EQ(0, std::memcmp(r.pressure->values().data(), pi.values().data(), g.size() * sizeof(double)));
    std::stringstream again;
    write_snapshot(again, r);
    EXPECT_EQ(again.str(), bytes);
}

TEST(Snapshot, PartialRolesAndErrors) {
    const Grid g(2, 8, 1.0);
    Snapshot s{g, 0.0, std::nullopt, VectorField::zero(g), std::nullopt, ""};
    std::stringstream ss;
    write_snapshot(ss, s);
    const std::string bytes = ss.str();
    std::stringstream in(bytes);
    const auto r = read_snapshot(in);
    EXPECT_FALSE(r.u);
    EXPECT_TRUE(r.b);
    EXPECT_FALSE(r.pressure);

    std::string bad = bytes;
    bad[4] = '2';
    std::stringstream b1(bad);
    EXPECT_THROW(read_snapshot(b1), SnapshotError);
    for (std::size_t cut : {std::size_t{3}, std::size_t{12}, std::size_t{30}, bytes.size() - 1}) {
        std::stringstream t(bytes.substr(0, cut));
        EXPECT_THROW(read_snapshot(t), SnapshotError) << cut;
    }
}

TEST(RunCommand, HmCsv) {
    std::string out;
    ASSERT_EQ(run({"hm", "--gamma", "0.5", "--walks", "20000", "--seed", "7"}, &out), 0);
    std::istringstream in(out);
    std::string line, header, row;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) header = line;
        else row = line;
    }
    EXPECT_EQ(header, "gamma,closed_form,mc_mean,mc_se,walks,seed");
    std::istringstream r(row);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(r, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_NEAR(std::stod(cells[1]), 2.0 / std::numbers::pi * std::asin(0.6), 1e-11);
    EXPECT_NEAR(std::stod(cells[2]), std::stod(cells[1]), 3.0 * std::stod(cells[3]));
    EXPECT_EQ(cells[4], "20000");
    EXPECT_EQ(cells[5], "7");
}

TEST(RunCommand, SimulateZeroDataDeterministic) {
    const auto dir = fresh_dir("sim");
    const auto cfg = write_config(dir, "dim=2\nn=16\nhorizon=0.5\nepsilon=0.25\ninitial=constant(0)\n");
    ASSERT_EQ(run({"simulate", "--config", cfg.string()}), 0);
    const auto first = slurp(dir / "out" / "snapshot_0001.mhds");
    const auto s = read_snapshot_file((dir / "out" / "snapshot_0001.mhds").string());
    EXPECT_EQ(s.t, 0.5);
    EXPECT_EQ(sup_norm(*s.u), 0.0);
    EXPECT_EQ(sup_norm(*s.b), 0.0);
    EXPECT_NE(s.config.find("initial=constant(0)"), std::string::npos);
    ASSERT_EQ(run({"simulate", "--config", cfg.string()}), 0);
    EXPECT_EQ(slurp(dir / "out" / "snapshot_0001.mhds"), first);
}

TEST(RunCommand, SimulateThenScan) {
    const auto dir = fresh_dir("scan");
    const auto cfg =
        write_config(dir, "dim=2\nn=16\nlength=2\nhorizon=0.01\nepsilon=0.005\n"
                          "initial=bump(amplitude=0.5, width=0.3, magnetic=0.5)\n");
    ASSERT_EQ(run({"simulate", "--config", cfg.string()}), 0);
    const auto csv = dir / "scan.csv";
    std::string out;
    ASSERT_EQ(run({"scan", "--snapshot", (dir / "out" / "snapshot_0000.mhds").string(), "--threshold", "0.01",
                   "--stride", "4", "--dir-count", "8", "--scale-count", "2", "--samples", "64", "--output",
                   csv.string()},
                  &out),
              0);
    const auto text = slurp(csv);
    EXPECT_NE(text.find("# snapshot config:"), std::string::npos);
    EXPECT_NE(text.find("points=16"), std::string::npos);
    EXPECT_NE(text.find("x,y,sparse,ratio,scale,d1,d2"), std::string::npos);
}

TEST(RunCommand, MonitorWritesLogAndRejectsInadmissible) {
    const auto dir = fresh_dir("monitor");
    const auto cfg = write_config(dir, "dim=2\nn=16\nhorizon=1\nepsilon=0.5\ninitial=constant(0)\n");
    ASSERT_EQ(run({"monitor", "--config", cfg.string()}), 0);
    std::ifstream log(dir / "out" / "verdict.jsonl");
    std::string line, last;
    std::getline(log, line);
    const auto head = nlohmann::json::parse(line);
    EXPECT_EQ(head["record"], "config");
    EXPECT_NE(head["config"].get<std::string>().find("horizon=1"), std::string::npos);
    while (std::getline(log, line)) last = line;
    EXPECT_EQ(nlohmann::json::parse(last)["status"], "certified-nonsingular");

    const auto bad = write_config(dir, "dim=2\nn=16\nalpha=0.5\ninitial=constant(0)\n");
    std::string err;
    EXPECT_EQ(run({"monitor", "--config", bad.string()}, nullptr, &err), 2);
    EXPECT_NE(err.find("inadmissible alpha"), std::string::npos) << err;
}

TEST(RunCommand, ConstantsAndUsageErrors) {
    const auto dir = fresh_dir("constants");
    const auto cfg = write_config(dir, "dim=2\nn=16\ncalibration_samples=1\ninitial=constant(0)\n");
    std::string out;
    ASSERT_EQ(run({"constants", "--config", cfg.string()}, &out), 0);
    EXPECT_NE(out.find("C1 = 1 (calibrated)"), std::string::npos) << out;
    const auto text = slurp(dir / "out" / "constants.txt");
    EXPECT_NE(text.find("# dim=2"), std::string::npos);
    EXPECT_NE(text.find("c4=1"), std::string::npos);
    EXPECT_EQ(run({"frobnicate"}), 2);
    EXPECT_EQ(run({"monitor"}), 2);
    EXPECT_EQ(run({"monitor", "--config", (dir / "missing.cfg").string()}), 1);
}
