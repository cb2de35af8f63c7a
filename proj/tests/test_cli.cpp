#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fogndt::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

/// Rows of a CSV text keyed by header name.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  auto lines = split(text, '\n');
  REQUIRE(!lines.empty());
  REQUIRE(lines.back().empty());  // trailing LF
  lines.pop_back();
  const auto header = split(lines.front(), ',');
  std::vector<std::map<std::string, std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    REQUIRE(cells.size() == header.size());
    std::map<std::string, std::string> row;
    for (std::size_t j = 0; j < header.size(); ++j) row[header[j]] = cells[j];
    rows.push_back(std::move(row));
  }
  return rows;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fogndt_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::vector<std::string> kPoint = {"--ens", "2", "--users", "2", "--library", "4",
                                         "--mu", "0.25", "--r", "1.5", "--p", "0.5"};

std::vector<std::string> cmd(std::vector<std::string> head, const std::vector<std::string>& tail = kPoint) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("eval prints one CSV record") {
    const auto r = run(cmd({"eval"}));
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("offline_ach") == "1");
    CHECK(rows[0].at("offline_lb") == "1");
    CHECK(rows[0].at("mu1") == "0.090909090909090912");
    CHECK(rows[0].at("mu2") == "0.25");
    CHECK(rows[0].at("mu2_prime") == "0.5");
    CHECK(rows[0].at("online_lb_basic") == "0.45833333333333331");
    CHECK(rows[0].at("online_lb_refined") == "0.625");
    CHECK(rows[0].at("regime_offline") == "full_caching");
    CHECK(rows[0].at("regime_online") == "intermediate");
  }

  TEST_CASE("eval JSON carries the same values") {
    const auto csv = run(cmd({"eval"}));
    const auto json = run(cmd({"eval", "--format", "json"}));
    REQUIRE(json.code == 0);
    const auto obj = nlohmann::json::parse(json.out);
    const auto row = parse_csv(csv.out).at(0);
    CHECK(obj.size() == row.size());
    for (const auto& [key, text] : row) {
      CAPTURE(key);
      const auto& v = obj.at(key);
      if (v.is_string()) {
        CHECK(v.get<std::string>() == text);
      } else {
        CHECK(v.get<double>() == num(text));
      }
    }
  }

  TEST_CASE("a single user reports an unbounded online breakpoint") {
    const auto r = run({"eval", "--ens", "2", "--users", "1", "--library", "1", "--mu", "0.5", "--r", "0.5", "--p", "0"});
    REQUIRE(r.code == 0);
    CHECK(parse_csv(r.out).at(0).at("mu2_prime_raw") == "inf");
    const auto j = run({"eval", "--ens", "2", "--users", "1", "--library", "1", "--mu", "0.5", "--r", "0.5", "--p", "0",
                        "--format", "json"});
    CHECK(nlohmann::json::parse(j.out).at("mu2_prime_raw").is_null());
  }

  TEST_CASE("usage and validation errors exit with status 2") {
    auto r = run({"eval", "--ens", "2", "--users", "2", "--library", "4", "--mu", "0.25", "--p", "0.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--r") != std::string::npos);
    CHECK(r.out.empty());
    CHECK(run({"eval", "--ens", "2", "--users", "3", "--library", "2", "--mu", "0", "--r", "1", "--p", "0"}).code == 2);
    CHECK(run({"eval", "--ens", "2", "--users", "2", "--library", "4", "--mu", "0.5", "--r", "0", "--p", "0.5"}).code ==
          2);
    CHECK(run(cmd({"eval", "--format", "xml"})).code == 2);
    CHECK(run({"eval", "--ens", "two", "--users", "2", "--library", "4", "--mu", "0", "--r", "1", "--p", "0"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"sweep", "--var", "mu"}).code == 2);
  }

  TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sweep") != std::string::npos);
    CHECK(run({"verify", "--help"}).code == 0);
  }

  TEST_CASE("config file supplies defaults that flags override") {
    const auto dir = scratch_dir("config");
    const auto path = dir / "net.cfg";
    std::ofstream(path) << "ens = 2\nusers = 2\nlibrary_size = 4\ncache_fraction = 0.1\n"
                           "fronthaul_scaling = 1.5\nchurn_probability = 0.5\n";
    const auto from_file = run({"eval", "--config", path.string(), "--mu", "0.25"});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out == run(cmd({"eval"})).out);
    CHECK(run({"eval", "--config", (dir / "missing.cfg").string()}).code == 1);
    std::ofstream(dir / "bad.cfg") << "ens = 2\nwarp = 9\n";
    CHECK(run({"eval", "--config", (dir / "bad.cfg").string()}).code == 2);
  }

  TEST_CASE("sweep over mu: 101 rows, offline non-increasing") {
    const auto r = run({"sweep", "--var", "mu", "--grid-start", "0", "--grid-stop", "1", "--grid-step", "0.01", "--ens",
                        "2", "--users", "2", "--library", "4", "--r", "1.5", "--p", "0.5"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 101);
    CHECK(r.out.substr(0, r.out.find('\n')) ==
          "mu,r,p,M,K,N,offline_ach,offline_lb,online_ach,online_lb_basic,online_lb_refined,regime_offline,"
          "regime_online");
    CHECK(rows.front().at("mu") == "0");
    CHECK(rows.back().at("mu") == "1");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(num(rows[i].at("offline_ach")) <= num(rows[i - 1].at("offline_ach")));
      CHECK(num(rows[i].at("online_ach")) >= num(rows[i].at("offline_ach")));
    }
    CHECK(r.out.find('\r') == std::string::npos);
  }

  TEST_CASE("sweep over r: online non-increasing") {
    const auto r = run({"sweep", "--var", "r", "--grid-start", "0.05", "--grid-stop", "1.95", "--grid-step", "0.05",
                        "--ens", "2", "--users", "3", "--library", "6", "--mu", "0.4", "--p", "0.9"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 39);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(num(rows[i].at("online_ach")) <= num(rows[i - 1].at("online_ach")));
    }
  }

  TEST_CASE("sweep edge cases") {
    const std::vector<std::string> fixed = {"--ens", "2", "--users", "2", "--library", "4", "--mu", "0.2", "--p", "0.5"};
    auto single = run(cmd({"sweep", "--var", "r", "--grid-start", "0.5", "--grid-stop", "1", "--grid-step", "5"}, fixed));
    REQUIRE(single.code == 0);
    const auto rows = parse_csv(single.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("r") == "0.5");
    CHECK(run(cmd({"sweep", "--var", "r", "--grid-start", "0.5", "--grid-stop", "1", "--grid-step", "0"}, fixed)).code ==
          2);
    CHECK(run(cmd({"sweep", "--var", "r", "--grid-start", "1", "--grid-stop", "0.5", "--grid-step", "0.1"}, fixed))
              .code == 2);
    CHECK(run(cmd({"sweep", "--var", "r", "--grid-start", "0", "--grid-stop", "1", "--grid-step", "0.5"}, fixed)).code ==
          2);
    const auto json = run(cmd({"sweep", "--var", "p", "--grid-start", "0", "--grid-stop", "1", "--grid-step", "0.25",
                               "--format", "json", "--r", "1"},
                              fixed));
    REQUIRE(json.code == 0);
    const auto arr = nlohmann::json::parse(json.out);
    CHECK(arr.size() == 5);
    CHECK(arr.back().at("p").get<double>() == 1.0);
  }

  TEST_CASE("sweep writes to --out") {
    const auto dir = scratch_dir("sweep");
    const auto path = dir / "s.csv";
    const auto r = run({"sweep", "--var", "mu", "--grid-start", "0", "--grid-stop", "0.1", "--grid-step", "0.05", "--ens",
                        "2", "--users", "2", "--library", "4", "--r", "1.5", "--p", "0.5", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(parse_csv(slurp(path)).size() == 3);
    CHECK(run({"eval", "--ens", "2", "--users", "2", "--library", "4", "--mu", "0", "--r", "1", "--p", "0", "--out",
               (dir / "no" / "such" / "dir.csv").string()})
              .code == 1);
  }

  TEST_CASE("figures: data files and plot scripts") {
    const auto dir = scratch_dir("figures");
    const auto r = run({"figures", "--out", dir.string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"fig1.csv", "fig1_plot.py", "fig2.csv", "fig2_plot.py"}) CHECK(fs::exists(dir / f));

    const auto fig1 = parse_csv(slurp(dir / "fig1.csv"));
    CHECK(fig1.size() == 202);
    CHECK(fig1.front().count("online_lb_basic") == 0);
    CHECK(num(fig1.front().at("offline_ach")) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(num(fig1.back().at("offline_ach")) == 1.0);
    CHECK(num(fig1.back().at("online_ach")) == 1.0);

    const auto fig2 = parse_csv(slurp(dir / "fig2.csv"));
    REQUIRE(fig2.size() == 76);
    CHECK(fig2.front().at("r") == "0.10000000000000001");
    CHECK(fig2[37].at("r") == "1.95");
    for (std::size_t i = 0; i < 38; ++i) {
      CHECK(fig2[i].at("p") == "0.5");
      CHECK(fig2[i + 38].at("p") == "0.90000000000000002");
      CHECK(fig2[i].at("r") == fig2[i + 38].at("r"));
      CHECK(num(fig2[i + 38].at("online_ach")) >= num(fig2[i].at("online_ach")));
    }
  }

  TEST_CASE("figures: lower-bound overlay needs an explicit library size") {
    const auto dir = scratch_dir("figures_lb");
    const auto r = run({"figures", "--which", "fig2", "--out", dir.string(), "--library", "6"});
    REQUIRE(r.code == 0);
    CHECK_FALSE(fs::exists(dir / "fig1.csv"));
    const auto fig2 = parse_csv(slurp(dir / "fig2.csv"));
    CHECK(fig2.front().at("N") == "6");
    CHECK(fig2.front().count("online_lb_refined") == 1);
    CHECK(run({"figures", "--which", "fig1", "--out", dir.string(), "--library", "2"}).code == 2);
    CHECK(run({"figures", "--which", "fig3", "--out", dir.string()}).code == 2);
    CHECK(run({"figures", "--out", dir.string(), "--library", "x"}).code == 2);
  }

  TEST_CASE("simulate: JSON summary within three standard errors, reproducible") {
    const std::vector<std::string> args = {"simulate", "--slots", "200000", "--seed", "7", "--mode", "formula",
                                           "--ens", "2", "--users", "2", "--library", "4", "--mu", "1/11",
                                           "--r", "1.5", "--p", "0.5"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("within_three_standard_errors").get<bool>());
    CHECK(j.at("closed_form").get<double>() == 37.0 / 33.0);
    CHECK(std::abs(j.at("deviation").get<double>()) <= 3.0 * j.at("standard_error").get<double>());
    CHECK(j.at("slots").get<int>() == 200000);
    CHECK_FALSE(j.contains("note"));
    CHECK(run(args).out == a.out);
  }

  TEST_CASE("simulate: operational mode in the intermediate regime adds a note") {
    auto r = run({"simulate", "--slots", "1000", "--mode", "operational", "--ens", "2", "--users", "2", "--library", "4",
                  "--mu", "0.2", "--r", "1.5", "--p", "0.5"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("regime") == "intermediate");
    CHECK(j.contains("note"));
    CHECK(j.at("closed_form_bracket").size() == 2);

    r = run({"simulate", "--slots", "1000", "--mode", "operational", "--ens", "2", "--users", "1", "--library", "1",
             "--mu", "0.6", "--r", "0.5", "--p", "0.5"});
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j.at("closed_form_bracket")[1].get<double>() > j.at("closed_form_bracket")[0].get<double>());
  }

  TEST_CASE("simulate: trace file and argument errors") {
    const auto dir = scratch_dir("simulate");
    const auto trace = dir / "trace.csv";
    const auto r = run({"simulate", "--slots", "50", "--seed", "3", "--ens", "2", "--users", "2", "--library", "4",
                        "--mu", "0.1", "--r", "1.5", "--p", "0.5", "--out", trace.string()});
    REQUIRE(r.code == 0);
    CHECK(parse_csv(slurp(trace)).size() == 50);
    CHECK(run(cmd({"simulate", "--slots", "0"})).code == 2);
    CHECK(run(cmd({"simulate", "--mode", "exact"})).code == 2);
  }

  TEST_CASE("verify: report lines, skip note, exit status") {
    const auto ok = run({"verify", "--max-ens", "2", "--max-users", "2", "--mu-step", "0.05", "--r-step", "0.25",
                         "--r-max", "2.5", "--p-values", "0.5,1"});
    CHECK(ok.out.find("online_multiplicative_gap") != std::string::npos);
    CHECK(ok.out.find("precondition") != std::string::npos);
    CHECK(ok.code == (ok.out.find("result: PASS") != std::string::npos ? 0 : 1));

    const auto failing = run({"verify", "--max-ens", "2", "--max-users", "2", "--p-values", "0", "--library-factors", "1"});
    CHECK(failing.code == 1);
    CHECK(failing.out.find("result: FAIL") != std::string::npos);
    CHECK(failing.err.find("first violation") != std::string::npos);

    const auto json = run({"verify", "--max-ens", "1", "--max-users", "2", "--format", "json", "--p-values", "0.5"});
    const auto j = nlohmann::json::parse(json.out);
    CHECK(j.at("certificates").size() == 10);
    CHECK(j.at("passed").get<bool>() == (json.code == 0));

    CHECK(run({"verify", "--max-ens", "0"}).code == 2);
    CHECK(run({"verify", "--mu-step", "0"}).code == 2);
    CHECK(run({"verify", "--p-values", "2"}).code == 2);
    CHECK(run({"verify", "--r-max", "0.01"}).code == 2);
  }
}
