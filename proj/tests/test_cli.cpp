#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ymflow/cli.hpp"
#include "ymflow/errors.hpp"
#include "ymflow/snapshot.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace ymflow;

fs::path scratch_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "ymflow_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path scratch(const std::string& name) {
  fs::path p = scratch_root() / name;
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

// Small, fast base run: coarse grid, a handful of steps.
std::string base_flow_config(std::uint64_t seed) {
  std::ostringstream out;
  out << "[flow]\n"
         "group = su2\n"
         "n = 4\n"
         "t = 0.01\n"
         "bc = dirichlet\n"
         "flow = direct\n"
         "scheme = rk4\n"
         "theta = 0.083333333333333333\n"
         "record_stride = 1\n"
         "seed = "
      << seed
      << "\n"
         "[initial]\n"
         "kind = random_smooth\n"
         "amplitude = 0.5\n"
         "kmax = 2\n";
  return out.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ymflow");
  return run_cli(args);
}

TEST_CASE("usage errors and help exit with the documented codes") {
  CHECK(cli({"--help"}) == 0);
  CHECK(cli({}) == 2);                        // a subcommand is required
  CHECK(cli({"frobnicate"}) == 2);            // unknown subcommand
  CHECK(cli({"flow", "--no-such-flag"}) == 2);
  CHECK(cli({"check", "everything"}) == 2);   // kind outside the member list
  CHECK(cli({"flow"}) == 2);                  // --config is required
  CHECK(cli({"flow", "--config", (scratch_root() / "missing.ini").string()}) == 2);
}

TEST_CASE("flow writes csv, summary, and a manifest that hashes the artifacts") {
  const fs::path dir = scratch("flow_base");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(3));
  const fs::path out = dir / "out";
  REQUIRE(cli({"flow", "--config", cfgp.string(), "--out", out.string()}) == 0);

  const std::string csv = read_file(out / "flow.csv");
  const std::string header =
      "t,B_l2,B_l3,B_l6,B_linf,Aprime_l2,A_l2,A_l4,dstarA_l2,"
      "bc_residual_linf,t34_B_linf\n";
  REQUIRE(csv.substr(0, header.size()) == header);

  const json summary = read_json(out / "summary.json");
  CHECK(summary.at("command") == "flow");
  CHECK(summary.at("group") == "su2");
  CHECK(summary.at("n") == 4);
  CHECK(summary.at("blew_up") == false);
  CHECK(summary.at("monotonicity_violations") == 0);
  const std::size_t records = summary.at("records").get<std::size_t>();
  CHECK(records >= 2);
  // one csv line per record plus the header
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == records + 1);

  const json manifest = read_json(out / "manifest.json");
  CHECK(manifest.at("command") == "flow");
  CHECK(manifest.at("seed") == 3);
  bool csv_hashed = false;
  for (const auto& o : manifest.at("outputs")) {
    if (o.at("path") == "flow.csv") {
      CHECK(o.at("sha256") == sha256_hex(csv.data(), csv.size()));
      csv_hashed = true;
    }
  }
  CHECK(csv_hashed);
}

TEST_CASE("flow artifacts are byte-identical across runs and thread settings") {
  const fs::path dir = scratch("flow_determinism");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(3));
  const fs::path out1 = dir / "a";
  const fs::path out2 = dir / "b";
  REQUIRE(cli({"flow", "--config", cfgp.string(), "--out", out1.string(), "--threads",
               "1"}) == 0);
  REQUIRE(cli({"flow", "--config", cfgp.string(), "--out", out2.string(), "--threads",
               "4"}) == 0);
  CHECK(read_file(out1 / "flow.csv") == read_file(out2 / "flow.csv"));
  CHECK(read_file(out1 / "summary.json") == read_file(out2 / "summary.json"));
}

TEST_CASE("seed override changes the run and is recorded in the manifest") {
  const fs::path dir = scratch("flow_seed");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(3));
  const fs::path out1 = dir / "a";
  const fs::path out2 = dir / "b";
  REQUIRE(cli({"flow", "--config", cfgp.string(), "--out", out1.string()}) == 0);
  REQUIRE(cli({"flow", "--config", cfgp.string(), "--out", out2.string(), "--seed",
               "4"}) == 0);
  CHECK(read_json(out2 / "manifest.json").at("seed") == 4);
  CHECK(read_file(out1 / "flow.csv") != read_file(out2 / "flow.csv"));
}

TEST_CASE("the output environment override wins over the flag") {
  const fs::path dir = scratch("flow_env");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(3));
  const fs::path flag_out = dir / "flag";
  const fs::path env_out = dir / "env";
  REQUIRE(setenv("YMFLOW_OUT", env_out.string().c_str(), 1) == 0);
  const int rc = cli({"flow", "--config", cfgp.string(), "--out", flag_out.string()});
  REQUIRE(unsetenv("YMFLOW_OUT") == 0);
  REQUIRE(rc == 0);
  CHECK(fs::exists(env_out / "flow.csv"));
  CHECK_FALSE(fs::exists(flag_out / "flow.csv"));
}

TEST_CASE("config violations are reported as exit 2") {
  const fs::path dir = scratch("config_errors");
  auto expect2 = [&](const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    write_file(p, text);
    CHECK(cli({"flow", "--config", p.string(), "--out", (dir / "out").string()}) == 2);
  };
  expect2("unknown_key.ini", "[flow]\nn = 4\nwibble = 3\n");
  expect2("duplicate.ini", "[flow]\nn = 4\nn = 5\n");
  expect2("bad_number.ini", "[flow]\nn = 4\nt = 0.01x\n");
  expect2("bad_group.ini", "[flow]\ngroup = su3\nn = 4\n");
  expect2("bad_section.ini", "[flow\nn = 4\n");
  expect2("no_equals.ini", "[flow]\nn 4\n");
  // dt above the stability ceiling fails validation before any stepping
  expect2("cfl.ini", "[flow]\nn = 4\nt = 0.01\ntheta = 0.4\n");
}

TEST_CASE("a blow-up terminates the run with exit 3 and is flagged in the summary") {
  const fs::path dir = scratch("blowup");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp,
             "[flow]\n"
             "group = u1\n"
             "n = 8\n"
             "t = 0.3\n"
             "bc = dirichlet\n"
             "flow = direct\n"
             "scheme = euler\n"
             "theta = 0.33333333333333333\n"
             "seed = 17\n"
             "[initial]\n"
             "kind = white_noise\n"
             "amplitude = 1.0\n");
  const fs::path out = dir / "out";
  REQUIRE(cli({"flow", "--config", cfgp.string(), "--out", out.string()}) == 3);
  const json summary = read_json(out / "summary.json");
  CHECK(summary.at("blew_up") == true);
  CHECK(summary.at("cfl_warning") == true);
}

TEST_CASE("snapshot save/load roundtrip preserves bytes and detects damage") {
  const fs::path dir = scratch("snapshot");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(11));
  const fs::path out = dir / "out";
  REQUIRE(cli({"snapshot", "save", "--config", cfgp.string(), "--out", out.string(),
               "--file", "initial.snap"}) == 0);
  const fs::path snap = out / "initial.snap";
  REQUIRE(fs::exists(snap));
  REQUIRE(cli({"snapshot", "load", "--file", snap.string()}) == 0);
  CHECK(cli({"snapshot", "load"}) == 2);  // --file is mandatory for load

  // library-level roundtrip against the file the CLI wrote
  const SnapshotMeta meta = read_snapshot_meta(snap.string());
  CHECK(meta.n == 4);
  CHECK(meta.degree == 1);
  CubeMesh mesh(meta.n, meta.L);
  const Cochain A = load_snapshot(snap.string(), mesh);
  CHECK(A.value_count() == meta.value_count);

  // flip one payload byte: checksum failure, not a schema complaint
  std::string bytes = read_file(snap);
  const fs::path flipped = dir / "flipped.snap";
  bytes.back() = static_cast<char>(bytes.back() ^ 0x01);
  write_file(flipped, bytes);
  CHECK_THROWS_AS(load_snapshot(flipped.string(), mesh), ChecksumMismatch);
  CHECK(cli({"snapshot", "load", "--file", flipped.string()}) == 2);

  // mangle the header version: schema failure before any payload reads
  std::string original = read_file(snap);
  const fs::path wrong = dir / "wrong_schema.snap";
  const std::size_t pos = original.find("\"schema_version\":");
  REQUIRE(pos != std::string::npos);
  original.replace(pos, 19, "\"schema_version\":9");
  write_file(wrong, original);
  CHECK_THROWS_AS(load_snapshot(wrong.string(), mesh), SchemaMismatch);

  // truncation drops payload bytes
  const fs::path trunc = dir / "truncated.snap";
  write_file(trunc, read_file(snap).substr(0, read_file(snap).size() - 16));
  CHECK_THROWS_AS(load_snapshot(trunc.string(), mesh), ChecksumMismatch);
}

TEST_CASE("wilson command tabulates every loop at every time") {
  const fs::path dir = scratch("wilson");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(7) +
                       "[wilson]\n"
                       "times = 0, 0.005\n"
                       "loop1 = xy 1 1 1 1 1\n"
                       "loop2 = yz 1 2 1 2 2\n");
  const fs::path out = dir / "out";
  REQUIRE(cli({"wilson", "--config", cfgp.string(), "--out", out.string()}) == 0);

  const std::string csv = read_file(out / "wilson.csv");
  const std::string header = "loop_id,plane,anchor,a,b,t,W_real\n";
  REQUIRE(csv.substr(0, header.size()) == header);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 2 loops x 2 times

  const json summary = read_json(out / "wilson_summary.json");
  CHECK(summary.at("loops") == 2);
  CHECK(summary.at("spread").size() == 2);

  // loops are mandatory
  const fs::path noloops = dir / "noloops.ini";
  write_file(noloops, base_flow_config(7) + "[wilson]\ntimes = 0\n");
  CHECK(cli({"wilson", "--config", noloops.string(), "--out", out.string()}) == 2);
}

TEST_CASE("compare-ds validates its config and writes the four-level ladder") {
  const fs::path dir = scratch("compare_ds");
  const fs::path out = dir / "out";

  const fs::path no_eps = dir / "no_eps.ini";
  write_file(no_eps, base_flow_config(5));
  CHECK(cli({"compare-ds", "--config", no_eps.string(), "--out", out.string()}) == 2);

  const fs::path marini = dir / "marini.ini";
  write_file(marini,
             "[flow]\nn = 4\nt = 0.005\nbc = marini\nepsilon = 0.001\n"
             "[initial]\nkind = random_smooth\n");
  CHECK(cli({"compare-ds", "--config", marini.string(), "--out", out.string()}) == 2);

  const fs::path good = dir / "good.ini";
  write_file(good,
             "[flow]\n"
             "group = u1\n"
             "n = 4\n"
             "t = 0.02\n"
             "bc = dirichlet\n"
             "scheme = rk4\n"
             "theta = 0.041666666666666664\n"
             "epsilon = 0.0104166666666666\n"  // four steps at the base dt
             "seed = 23\n"
             "store = b\n"
             "[initial]\n"
             "kind = random_smooth\n"
             "amplitude = 0.6\n");
  REQUIRE(cli({"compare-ds", "--config", good.string(), "--out", out.string()}) == 0);

  const std::string csv = read_file(out / "ds_compare.csv");
  REQUIRE(csv.substr(0, 26) == "eps,dt,final_gap,max_b_gap");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 levels

  const json rep = read_json(out / "ds_compare.json");
  REQUIRE(rep.at("levels").size() == 4);
  for (const auto& l : rep.at("levels")) {
    CHECK(l.at("final_gap").get<double>() >= 0.0);
    CHECK(l.at("final_gap").get<double>() < 1.0);
  }
  // levels 0..2 halve epsilon at fixed dt, level 3 halves dt at the base epsilon
  CHECK(rep.at("levels")[1].at("eps").get<double>() ==
        doctest::Approx(rep.at("levels")[0].at("eps").get<double>() / 2).epsilon(1e-15));
  CHECK(rep.at("levels")[3].at("dt").get<double>() ==
        doctest::Approx(rep.at("levels")[0].at("dt").get<double>() / 2).epsilon(1e-15));
}

TEST_CASE("structure suite passes end to end through the cli") {
  const fs::path dir = scratch("check_structure");
  const fs::path cfgp = dir / "run.ini";
  write_file(cfgp, base_flow_config(1));
  const fs::path out = dir / "out";
  REQUIRE(cli({"check", "structure", "--config", cfgp.string(), "--out",
               out.string()}) == 0);
  const json rep = read_json(out / "check_structure.json");
  CHECK(rep.at("pass") == true);
}

}  // namespace
