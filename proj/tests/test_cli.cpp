#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tworank/cli.hpp"

using namespace tworank;
using nlohmann::json;

namespace {

std::string const kData = TWORANK_DATA_DIR;

struct Run
{
  int code = 0;
  std::string out;
  json report;
};

Run run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  Run r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.report = json::parse(r.out, nullptr, false);
  return r;
}

std::string data(std::string const &name) { return kData + "/" + name; }

std::string temp_file(std::string const &name, std::string const &content)
{
  auto path = std::filesystem::temp_directory_path() / ("tworank_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

} // namespace

TEST(Cli, HeadlineReport)
{
  auto r = run({"bounds", "headline", "--n", "1249", "--t", "50", "--k", "51"});
  ASSERT_EQ(r.code, 0);
  auto const &res = r.report["result"];
  EXPECT_EQ(res["T_bound"], 100);
  EXPECT_EQ(res["N_bound"], 1199);
  EXPECT_EQ(res["condition_holds"], true);
  EXPECT_EQ(res["sphere_dim_digits"], 391);
  EXPECT_EQ(res["sphere_dim"].get<std::string>().size(), 391u);
  EXPECT_EQ(res["carlsson_min_m"], "4067");
  EXPECT_EQ(r.report["command"], "bounds headline");
  EXPECT_EQ(r.report["version"], cli::kVersion);
}

TEST(Cli, GroupRankD8)
{
  auto r = run({"group", "rank", "--family", data("d8.json")});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report["result"]["rank"], 2);
  auto e = run({"group", "rank", "--family", data("d8.json"), "--mode", "exhaustive"});
  EXPECT_EQ(e.report["result"]["rank"], 2);
  auto p = run({"group", "profile", "--family", data("d8.json")});
  EXPECT_EQ(p.report["result"]["T"], 2);
  EXPECT_EQ(p.report["result"]["N"], 1);
}

TEST(Cli, PolyCommands)
{
  auto r = run({"poly", "regseq", "--ideal", data("powers_m3_n2.json")});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report["result"]["regular"], true);
  EXPECT_EQ(r.report["result"]["total_dim"], 16);

  auto n = run({"poly", "regseq", "--ideal", data("not_regular.json")});
  EXPECT_EQ(n.report["result"]["regular"], false);

  auto h = run({"poly", "hilbert", "--ideal", data("powers_m3_n2.json"), "--degree", "3"});
  EXPECT_EQ(h.report["result"]["value"], 4);

  auto p = run({"poly", "powertest", "--action", data("swap_action_n2.json"), "--ys", data("ys_n2.json"), "--p", "2"});
  ASSERT_EQ(p.code, 0) << p.out;
  EXPECT_EQ(p.report["result"]["stable"], true);
  EXPECT_EQ(p.report["result"]["permuted"], true);

  auto e = run({"poly", "euler", "--table", data("q8_table.json"), "--rep", "1:-1", "--egens", "1"});
  ASSERT_EQ(e.code, 0) << e.out;
  EXPECT_EQ(e.report["result"]["transgression_regular"], true);
  EXPECT_EQ(e.report["result"]["classes"][0]["euler"]["monomials"], json::parse("[[4]]"));
}

TEST(Cli, RepCommands)
{
  auto q = run({"rep", "free", "--table", data("q8_table.json"), "--rep", "1:-1"});
  ASSERT_EQ(q.code, 0) << q.out;
  EXPECT_EQ(q.report["result"]["free"], true);

  auto e = run({"rep", "free", "--table", data("e2_table.json"), "--rep", "1:-1", "--rep", "2:-1"});
  EXPECT_EQ(e.report["result"]["free"], false);
  EXPECT_EQ(e.report["result"]["witness"], 3);

  auto d = run({"rep", "isotropy", "--family", data("d8.json"), "--rep", "b1:-1"});
  ASSERT_EQ(d.code, 0) << d.out;
  EXPECT_EQ(d.report["result"]["reps"][0]["dim"], 4);

  auto tc = run({"rep", "twocentral", "--table", data("d8_table.json")});
  EXPECT_EQ(tc.report["result"]["two_central"], false);
  auto tq = run({"rep", "twocentral", "--table", data("q8_table.json")});
  EXPECT_EQ(tq.report["result"]["two_central"], true);

  auto bad = run({"rep", "free", "--table", data("q8_table.json"), "--rep", "b1:-1"});
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, FormsCommands)
{
  auto c = run({"forms", "czero", "--system", data("system_q2_v5.json")});
  ASSERT_EQ(c.code, 0) << c.out;
  EXPECT_EQ(c.report["result"]["found"], true);
  auto a = run({"forms", "czero", "--system", data("anisotropic_v2.json")});
  EXPECT_EQ(a.report["result"]["found"], false);
}

TEST(Cli, GeneratedFamilyRoundTrips)
{
  auto g = run({"forms", "gen", "--n", "7", "--t", "3", "--seed", "42"});
  ASSERT_EQ(g.code, 0);
  auto fam = io::family_from_json(g.report["result"]["family"]);
  EXPECT_EQ(fam, random_family(7, 3, 42));
  EXPECT_EQ(io::family_from_json(io::to_json(fam)), fam);

  auto path = temp_file("gen_report.json", g.out);
  EXPECT_EQ(cli::load_family(path), fam);
  auto info = run({"group", "info", "--family", path});
  EXPECT_EQ(info.code, 0);
}

TEST(Cli, LoaderErrors)
{
  auto asym = temp_file("asym.json", R"({"n": 2, "t": 1, "forms": [["01", "00"]]})");
  auto r = run({"group", "rank", "--family", asym});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.report["error"]["kind"], "validation");
  auto fields = r.report["error"]["fields"];
  ASSERT_FALSE(fields.empty());
  EXPECT_NE(fields.dump().find("forms[0]"), std::string::npos);

  auto many = temp_file("many.json", R"({"n": 2, "t": 2, "forms": [["11", "10"], ["0x", "00"]]})");
  auto m = run({"group", "rank", "--family", many});
  EXPECT_EQ(m.code, 2);
  EXPECT_GE(m.report["error"]["fields"].size(), 2u);

  auto broken = temp_file("broken.json", "{\"n\": 2, ");
  EXPECT_EQ(run({"group", "rank", "--family", broken}).code, 65);
  EXPECT_EQ(run({"group", "rank", "--family", "/nonexistent/file.json"}).code, 2);

  auto table = temp_file("badtable.json", R"({"order": 2, "mul": [[0, 1], [1, 1]]})");
  EXPECT_EQ(run({"rep", "twocentral", "--table", table}).code, 2);
  EXPECT_EQ(cli::load_table(data("d8_table.json")).order(), 8u);
}

TEST(Cli, ExitCodes)
{
  EXPECT_EQ(run({"bounds", "nope"}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"bounds", "rp-rank", "--m", "3"}).code, 2);
  EXPECT_EQ(run({"bounds", "rp-rank", "--m", "x", "--n", "2"}).code, 2);
  EXPECT_EQ(run({"bounds", "rp-rank", "--m", "3", "--n", "2", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"group", "rank", "--family", data("d8.json"), "--mode", "fast"}).code, 2);

  auto g = run({"audit", "gl", "--n", "5"});
  EXPECT_EQ(g.code, 3);
  EXPECT_EQ(g.report["error"]["guard"], "gl_audit_dim");

  auto s = run({"search", "olshanskii", "--n", "1249", "--t", "50", "--k", "51"});
  EXPECT_EQ(s.code, 3);
  EXPECT_EQ(s.report["result"]["condition_holds"], true);
  EXPECT_EQ(s.report["provenance"]["guards_hit"][0], "isotropic_bnb_dim");
}

TEST(Cli, OutFlagWritesReport)
{
  auto path = (std::filesystem::temp_directory_path() / "tworank_test_out.json").string();
  std::filesystem::remove(path);
  auto r = run({"bounds", "rp-rank", "--m", "3", "--n", "5", "--out", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  auto j = io::read_json_file(path);
  EXPECT_EQ(j["result"]["free_rank"], 10);
}

TEST(Cli, ReportsAreReproducible)
{
  std::vector<std::vector<std::string>> cmds{
    {"forms", "gen", "--n", "6", "--t", "2", "--seed", "5"},
    {"search", "olshanskii", "--n", "5", "--t", "4", "--k", "4", "--trials", "500", "--seed", "3"},
    {"group", "info", "--family", data("desk_n5_t2.json")},
    {"audit", "sn", "--n", "5"},
  };
  for (auto const &c : cmds) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
  }
  auto t1 = run({"search", "olshanskii", "--n", "8", "--t", "2", "--k", "3", "--trials", "300", "--threads", "1"});
  auto t4 = run({"search", "olshanskii", "--n", "8", "--t", "2", "--k", "3", "--trials", "300", "--threads", "4"});
  EXPECT_EQ(t1.out, t4.out);
}
