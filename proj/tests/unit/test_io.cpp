#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "cwm/csv.hpp"
#include "cwm/errors.hpp"

using namespace cwm;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cwm-impute");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cwm_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CSV parsing") {
    const CsvTable t = parse_csv("x,y\n1,2.5\n3,NA\n", "mem");
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    CHECK(t.rows() == 2);
    CHECK(t.column_index("y") == 1);
    CHECK(t.column_index("z") == -1);
    const auto y = t.numeric_column(1);
    CHECK(*y[0] == 2.5);
    CHECK_FALSE(y[1].has_value());
    CHECK_THROWS_AS(parse_csv("x,y\n1\n", "mem"), ValidationError);
    CHECK_THROWS_AS(parse_csv("x,y\n1,abc\n", "mem").numeric_column(1), ValidationError);
    CHECK_THROWS_AS(parse_csv("x,y\n1,inf\n", "mem").numeric_column(1), ValidationError);
    CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), IoError);
  }

  TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 4.0, 1e-5}) {
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(4.0) == "4");
  }

  TEST_CASE("datasets from tables and back") {
    const CsvTable t = parse_csv("a,b,y\n1,2,3\n4,5,NA\n7,8,9\n", "mem");
    const MissingDataset all = dataset_from_table(t, "y");
    CHECK(all.d() == 2);
    CHECK(all.mask == std::vector<bool>{false, true, false});
    CHECK(all.column_names == std::vector<std::string>{"a", "b", "y"});
    const MissingDataset one = dataset_from_table(t, "y", {"b"});
    CHECK(one.d() == 1);
    CHECK(one.X(2, 0) == 8.0);
    CHECK_THROWS_AS(dataset_from_table(t, "q"), ValidationError);
    CHECK_THROWS_AS(dataset_from_table(parse_csv("a,y\nNA,1\n1,2\n", "mem"), "y"), ValidationError);
    CHECK(dataset_to_csv(all) == "a,b,y\n1,2,3\n4,5,NA\n7,8,9\n");
  }

  TEST_CASE("atomic writes replace files whole") {
    const fs::path dir = scratch_dir("atomic");
    const std::string path = (dir / "f.txt").string();
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    CHECK(slurp(path) == "second");
    int leftovers = 0;
    for (const auto& e : fs::directory_iterator(dir)) leftovers += e.path().filename() != "f.txt";
    CHECK(leftovers == 0);
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "f.txt").string(), "x"), IoError);
  }

  TEST_CASE("exit codes") {
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"simulate", "no-such-scenario", "--out", scratch_dir("bad").string()}) == 2);
    CHECK(run_cli({"impute", "--data", "/nonexistent.csv"}) == 4);
    const fs::path dir = scratch_dir("codes");
    std::ofstream(dir / "d.csv") << "x,y\n1,2\n2,NA\n3,6\n4,8\n5,10\n";
    CHECK(run_cli({"impute", "--data", (dir / "d.csv").string(), "--method", "norm", "--donors", "3"}) == 2);
    CHECK(run_cli({"impute", "--data", (dir / "d.csv").string(), "--method", "bogus"}) == 2);
    std::ofstream(dir / "s.csv") << "x1,x2,y\n1,2,1\n2,4,NA\n3,6,3\n4,8,4\n5,10,5\n6,12,7\n";
    CHECK(run_cli({"impute", "--data", (dir / "s.csv").string(), "--method", "norm", "--out", dir.string()}) == 3);
  }

  TEST_CASE("configuration files") {
    cli::RunConfig cfg;
    cli::apply_config(cli::json::parse(R"({"method": "pmm", "donors": 3, "mcmc": {"burn_in": 7}, "h": 0.5})"), cfg);
    CHECK(cfg.method == cli::Method::Pmm);
    CHECK(*cfg.donors == 3);
    CHECK(cfg.mcmc.burn_in == 7);
    CHECK(*cfg.hyper.h == 0.5);
    CHECK_THROWS_AS(cli::apply_config(cli::json::parse(R"({"colour": 1})"), cfg), ValidationError);
  }

  TEST_CASE("simulate, impute, diagnose and evaluate end to end") {
    const fs::path dir = scratch_dir("e2e");
    const std::string sim = (dir / "sim").string();
    REQUIRE(run_cli({"simulate", "paper-mnar-threshold", "--seed", "3", "--out", sim}) == 0);
    const CsvTable data = read_csv(sim + "/data.csv");
    CHECK(data.header == std::vector<std::string>{"x1", "x2", "y"});
    CHECK(data.rows() == 1000);
    CHECK(fs::exists(sim + "/truth.json"));

    const std::string cwm_out = (dir / "cwm").string();
    REQUIRE(run_cli({"impute", "--data", sim + "/data.csv", "--method", "cwm", "--burn-in", "200", "--target-ess",
                     "50", "--max-iterations", "2000", "--emit-chain", "--emit-grid", "--inputs", "x2", "--out",
                     cwm_out}) == 0);
    const CsvTable imputed = read_csv(cwm_out + "/imputed.csv");
    CHECK(imputed.header == std::vector<std::string>{"x1", "x2", "y", "y_imputed", "source", "component"});
    int n_imputed = 0;
    for (std::size_t r = 0; r < imputed.rows(); ++r) {
      const auto& row = imputed.cells[r];
      CHECK(row[0] == data.cells[r][0]);
      if (row[4] == "imputed") {
        ++n_imputed;
        CHECK(row[2] == "NA");
      } else {
        CHECK(row[3] == row[2]);
      }
    }
    CHECK(n_imputed > 0);
    CHECK(fs::exists(cwm_out + "/diagnostics.json"));
    CHECK(fs::exists(cwm_out + "/grid.csv"));

    const std::string diag_out = (dir / "diag").string();
    REQUIRE(run_cli({"diagnose", cwm_out + "/chain.jsonl", "--out", diag_out}) == 0);
    CHECK(read_csv(diag_out + "/trace.csv").header ==
          std::vector<std::string>{"iteration", "log_posterior", "mean_imputed", "occupied"});

    const std::string pmm_out = (dir / "pmm").string();
    REQUIRE(run_cli({"impute", "--data", sim + "/data.csv", "--method", "pmm", "--seed", "2", "--out", pmm_out}) == 0);

    const std::string ev_out = (dir / "eval").string();
    REQUIRE(run_cli({"evaluate", "--truth", sim + "/truth.json", "cwm=" + cwm_out + "/imputed.csv",
                     "pmm=" + pmm_out + "/imputed.csv", "--replications", "50", "--out", ev_out}) == 0);
    const CsvTable report = read_csv(ev_out + "/report.csv");
    CHECK(report.rows() == 2);
    CHECK(fs::exists(ev_out + "/interval.json"));
    // the cached interval is reused: a second run is byte-identical
    const std::string first = slurp(ev_out + "/report.json");
    REQUIRE(run_cli({"evaluate", "--truth", sim + "/truth.json", "cwm=" + cwm_out + "/imputed.csv",
                     "pmm=" + pmm_out + "/imputed.csv", "--replications", "50", "--out", ev_out}) == 0);
    CHECK(slurp(ev_out + "/report.json") == first);
  }
}
