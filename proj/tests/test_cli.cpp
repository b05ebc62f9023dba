#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "pse/data_io.hpp"
#include "pse/errors.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

const char* cli_path() {
  const char* p = std::getenv("PSE_CLI_BIN");
  REQUIRE_MESSAGE(p != nullptr, "PSE_CLI_BIN must point at the pse binary");
  return p;
}

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "pse_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CommandResult run_cli(const std::string& args) {
  const fs::path out = temp_dir() / "cmd_output.txt";
  const std::string cmd = std::string(cli_path()) + " " + args + " >" + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.output = pse::io::read_file(out.string());
  return res;
}

std::string slurp(const fs::path& p) { return pse::io::read_file(p.string()); }

void write(const fs::path& p, const std::string& text) { pse::io::write_file(p.string(), text); }

}  // namespace

TEST_CASE("cli: simulate is deterministic and writes 2n records") {
  const fs::path a = temp_dir() / "sim_a.json";
  const fs::path b = temp_dir() / "sim_b.json";
  const std::string flags =
      "simulate --n-seeds 22 --delta 0.5 --rho 0.9 --master-seed 7 --metric-name gdp --out ";
  CHECK(run_cli(flags + a.string()).exit_code == 0);
  CHECK(run_cli(flags + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto file = pse::io::parse_run_file(slurp(a));
  CHECK(file.records.size() == 44);
  CHECK(file.provenance.at("rho") == "0.9");

  const fs::path c = temp_dir() / "sim_c.csv";
  CHECK(run_cli("simulate --n-seeds 10 --out " + c.string() + " --format csv").exit_code == 0);
  CHECK(pse::io::parse_run_file(slurp(c)).records.size() == 20);
}

TEST_CASE("cli: analyze a high-correlation synthetic file") {
  const fs::path sim = temp_dir() / "analyze_input.json";
  REQUIRE(run_cli("simulate --n-seeds 200 --delta 0.5 --rho 0.9 --master-seed 3 "
                  "--metric-name gdp --out " +
                  sim.string())
              .exit_code == 0);
  const fs::path report = temp_dir() / "report.json";
  const CommandResult res =
      run_cli("analyze --input " + sim.string() + " --out " + report.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("gdp") != std::string::npos);

  // paired CI strictly inside the independent CI at rho = 0.9
  const std::string doc = slurp(report);
  const auto find_num = [&](const std::string& key, std::size_t from) {
    const std::size_t at = doc.find(key, from);
    REQUIRE(at != std::string::npos);
    return std::stod(doc.substr(at + key.size()));
  };
  const std::size_t paired_at = doc.find("\"design\": \"paired\"");
  const std::size_t ind_at = doc.find("\"design\": \"independent\"");
  const double p_lo = find_num("\"ci_lower\": ", paired_at);
  const double p_hi = find_num("\"ci_upper\": ", paired_at);
  const double i_lo = find_num("\"ci_lower\": ", ind_at);
  const double i_hi = find_num("\"ci_upper\": ", ind_at);
  CHECK(p_lo > i_lo);
  CHECK(p_hi < i_hi);
}

TEST_CASE("cli: unknown metric exits with the UnknownMetric code") {
  const fs::path sim = temp_dir() / "um_input.json";
  REQUIRE(run_cli("simulate --n-seeds 10 --out " + sim.string()).exit_code == 0);
  const CommandResult res = run_cli("analyze --input " + sim.string() + " --metric nope");
  CHECK(res.exit_code == static_cast<int>(pse::ErrorCode::unknown_metric));
}

TEST_CASE("cli: strict pairing fails on orphans, drop-orphans reports them") {
  const fs::path csv = temp_dir() / "orphans.csv";
  write(csv,
        "seed,regime,metric,value\n"
        "a,1,m,1.0\na,0,m,0.5\nb,1,m,2.0\nb,0,m,1.0\nc,1,m,3.0\n");
  CHECK(run_cli("analyze --input " + csv.string() + " --pairing strict").exit_code ==
        static_cast<int>(pse::ErrorCode::orphan_seeds));
  const CommandResult res = run_cli("analyze --input " + csv.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("orphan") != std::string::npos);
}

TEST_CASE("cli: anticorrelated outcomes raise the no-advantage advisory") {
  const fs::path csv = temp_dir() / "anti.csv";
  write(csv,
        "seed,regime,metric,value\n"
        "a,1,m,1\na,0,m,4\nb,1,m,2\nb,0,m,3\nc,1,m,3\nc,0,m,2\nd,1,m,4\nd,0,m,1\n");
  const CommandResult res = run_cli("analyze --input " + csv.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("advisory") != std::string::npos);
  CHECK(res.output.find("treated as independent") != std::string::npos);
}

TEST_CASE("cli: curves are byte-identical across repeats and thread counts") {
  const fs::path sim = temp_dir() / "curves_input.json";
  REQUIRE(run_cli("simulate --n-seeds 80 --delta 0.3 --rho 0.8 --master-seed 5 --out " +
                  sim.string())
              .exit_code == 0);
  const fs::path c1 = temp_dir() / "c1.csv";
  const fs::path c2 = temp_dir() / "c2.csv";
  const fs::path c4 = temp_dir() / "c4.csv";
  const std::string base = "curves --input " + sim.string() +
                           " --statistic se --replicates 200 --rng-seed 11 --grid 8,16,32";
  CHECK(run_cli(base + " --out " + c1.string()).exit_code == 0);
  CHECK(run_cli(base + " --out " + c2.string()).exit_code == 0);
  CHECK(run_cli(base + " --threads 4 --out " + c4.string()).exit_code == 0);
  const std::string bytes = slurp(c1);
  CHECK(bytes == slurp(c2));
  CHECK(bytes == slurp(c4));
  CHECK(bytes.starts_with("statistic,design,r,value\n"));
}

TEST_CASE("cli: power curves print the 80% crossing and need --mde") {
  const fs::path sim = temp_dir() / "power_input.json";
  REQUIRE(run_cli("simulate --n-seeds 400 --delta 0.3 --rho 0.9 --master-seed 17 --out " +
                  sim.string())
              .exit_code == 0);
  const fs::path out = temp_dir() / "power.csv";
  const CommandResult res = run_cli("curves --input " + sim.string() +
                                    " --statistic power --mde 0.3 --replicates 300 --rng-seed 3 "
                                    "--grid 8,16,32,64,128,256 --out " +
                                    out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("paired: power >= 0.8 first reached at r = ") != std::string::npos);
  CHECK(res.output.find("independent: ") != std::string::npos);

  CHECK(run_cli("curves --input " + sim.string() + " --statistic power --out " + out.string())
            .exit_code == static_cast<int>(pse::ErrorCode::missing_parameter));
}

TEST_CASE("cli: infeasible grid exits with the GridInfeasible code") {
  const fs::path sim = temp_dir() / "grid_input.json";
  REQUIRE(run_cli("simulate --n-seeds 10 --out " + sim.string()).exit_code == 0);
  const CommandResult res =
      run_cli("curves --input " + sim.string() + " --statistic se --grid 4,8,64");
  CHECK(res.exit_code == static_cast<int>(pse::ErrorCode::grid_infeasible));
}

TEST_CASE("cli: sign curves write the sign_agreement statistic") {
  const fs::path sim = temp_dir() / "sign_input.json";
  REQUIRE(run_cli("simulate --n-seeds 60 --delta 0.4 --rho 0.5 --master-seed 23 --out " +
                  sim.string())
              .exit_code == 0);
  const CommandResult res = run_cli("curves --input " + sim.string() +
                                    " --statistic sign --replicates 100 --grid 8,16");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("sign_agreement,paired") != std::string::npos);
}
