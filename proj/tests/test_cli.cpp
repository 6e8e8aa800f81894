#include "spacefn/cli_ops.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>

using namespace spacefn;
namespace fs = std::filesystem;

namespace {

const std::string kData = SPACEFN_DATA_DIR;

fs::path temp_dir() {
  fs::path d = fs::temp_directory_path() / ("spacefn_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

ExperimentConfig make_cfg(const Json& j) {
  ExperimentConfig c;
  c.raw = j;
  return c;
}

}  // namespace

TEST_CASE("build pipeline and golden output") {
  fs::path dir = temp_dir();
  Json cfg{{"machine", kData + "/toy_even.json"},
           {"stages", {"pad", "symmetrize", "split", "s10", "compose", "multiply:2"}},
           {"out", (dir / "sl2.json").string()}};
  std::ostringstream out, err;
  REQUIRE(cmd_build(make_cfg(cfg), out, err) == kOk);
  CHECK(err.str().find("warning") != std::string::npos);  // L=2 < 40
  std::string produced = read_file((dir / "sl2.json").string());
  std::string golden = read_file(kData + "/golden/pipeline_sl2.json");
  CHECK(produced == golden);

  SECTION("empty stage list is the identity") {
    Json id_cfg{{"machine", kData + "/toy_even.json"}, {"out", (dir / "id.json").string()}};
    REQUIRE(cmd_build(make_cfg(id_cfg), out, err) == kOk);
    Json reread = Json::parse(read_file((dir / "id.json").string()));
    CHECK(reread == Json::parse(read_file(kData + "/toy_even.json")));
  }
  SECTION("odd multiplication is rejected with a message") {
    Json bad = cfg;
    bad["stages"][5] = "multiply:3";
    bad["out"] = (dir / "bad.json").string();
    std::ostringstream o2, e2;
    CHECK(cmd_build(make_cfg(bad), o2, e2) == kInvalid);
    CHECK(e2.str().find("even") != std::string::npos);
  }
}

TEST_CASE("compile golden round trip") {
  fs::path dir = temp_dir();
  Json cfg{{"machine", kData + "/tiny_rewriter.json"},
           {"stages", {"multiply:2"}},
           {"out", (dir / "tiny_g.json").string()}};
  std::ostringstream out, err;
  REQUIRE(cmd_compile(make_cfg(cfg), out, err) == kOk);
  CHECK(read_file((dir / "tiny_g.json").string()) ==
        read_file(kData + "/golden/tiny_presentation.json"));
  GroupPresentation p =
      presentation_from_json(Json::parse(read_file((dir / "tiny_g.json").string())));
  CHECK(presentation_to_json(p).dump(2) + "\n" ==
        read_file(kData + "/golden/tiny_presentation.json"));
}

TEST_CASE("check command") {
  std::ostringstream out, err;
  Json cfg{{"machine", kData + "/toy_even.json"}};
  CHECK(cmd_check(make_cfg(cfg), out, err) == kOk);
  CHECK(out.str().find("s10=yes") != std::string::npos);

  fs::path dir = temp_dir();
  Json broken = Json::parse(read_file(kData + "/toy_even.json"));
  broken["commands"][1]["parts"][0]["lhs"] = Json::array({"alpha1", "a", "even"});
  write_file((dir / "broken.json").string(), broken.dump(2));
  Json cfg2{{"machine", (dir / "broken.json").string()}};
  std::ostringstream o2, e2;
  CHECK(cmd_check(make_cfg(cfg2), o2, e2) == kInvalid);
}

TEST_CASE("space command produces a verifiable derivation") {
  fs::path dir = temp_dir();
  Json cfg{{"machine", kData + "/toy_even.json"},
           {"stages", {"pad", "symmetrize", "split", "s10", "compose", "multiply:2"}},
           {"word", {{"sigma", ""}}},
           {"caps", {{"space", 8}, {"time", 1000000}, {"budget", 20000}}},
           {"out", (dir / "space.json").string()},
           {"derivation_out", (dir / "deriv.json").string()}};
  std::ostringstream out, err;
  int rc = cmd_space(make_cfg(cfg), out, err);
  CHECK((rc == kOk || rc == kExhausted));
  Json res = Json::parse(read_file((dir / "space.json").string()));
  CHECK(res.contains("witness_space"));

  // verify accepts what space emitted
  Json pcfg{{"machine", kData + "/toy_even.json"},
            {"stages", {"pad", "symmetrize", "split", "s10", "compose", "multiply:2"}},
            {"out", (dir / "g.json").string()}};
  REQUIRE(cmd_compile(make_cfg(pcfg), out, err) == kOk);
  Json vcfg{{"presentation", (dir / "g.json").string()},
            {"derivation", (dir / "deriv.json").string()}};
  std::ostringstream vo, ve;
  CHECK(cmd_verify(make_cfg(vcfg), vo, ve) == kOk);
  CHECK(vo.str().rfind("ok", 0) == 0);

  SECTION("a corrupted derivation fails at the exact step") {
    Json dj = Json::parse(read_file((dir / "deriv.json").string()));
    size_t idx = dj.at("moves").size() / 2;
    dj["moves"][idx]["pos"] = 9999;
    write_file((dir / "bad_deriv.json").string(), dj.dump(2));
    Json bcfg{{"presentation", (dir / "g.json").string()},
              {"derivation", (dir / "bad_deriv.json").string()}};
    std::ostringstream bo, be;
    CHECK(cmd_verify(make_cfg(bcfg), bo, be) == kInvalid);
    CHECK(bo.str().find("fail at step " + std::to_string(idx)) != std::string::npos);
  }
}

TEST_CASE("table command") {
  fs::path dir = temp_dir();
  Json cfg{{"machine", kData + "/tiny_rewriter.json"},
           {"stages", {"multiply:2"}},
           {"words", {{"source", "relators"}}},
           {"n_max", 8},
           {"caps", {{"space", 8}, {"budget", 200000}}},
           {"out", (dir / "table.csv").string()}};
  std::ostringstream out, err;
  REQUIRE(cmd_table(make_cfg(cfg), out, err) == kOk);
  std::string csv = read_file((dir / "table.csv").string());
  CHECK(csv.rfind("n,space,cap,status\n", 0) == 0);

  SECTION("parallel rows produce identical bytes") {
    Json cfg2 = cfg;
    cfg2["jobs"] = 3;
    cfg2["out"] = (dir / "table_par.csv").string();
    std::ostringstream o2, e2;
    REQUIRE(cmd_table(make_cfg(cfg2), o2, e2) == kOk);
    CHECK(read_file((dir / "table_par.csv").string()) == csv);
  }
}

TEST_CASE("fit command") {
  fs::path dir = temp_dir();
  std::string id_csv = "n,space,cap,status\n";
  for (int n = 1; n <= 64; ++n)
    id_csv += std::to_string(n) + "," + std::to_string(n) + ",64,ok\n";
  write_file((dir / "id.csv").string(), id_csv);
  Json cfg{{"f_table", (dir / "id.csv").string()}, {"g", "identity"}, {"c_max", 8}};
  std::ostringstream out, err;
  REQUIRE(cmd_fit(make_cfg(cfg), out, err) == kOk);
  CHECK(out.str() == "1\n");
}

TEST_CASE("the installed binary runs end to end") {
  fs::path dir = temp_dir();
  Json cfg{{"machine", kData + "/toy_even.json"}};
  write_file((dir / "cfg.json").string(), cfg.dump(2));
  std::string cmd = std::string(SPACEFN_TOOL_PATH) + " check --config " +
                    (dir / "cfg.json").string() + " > " + (dir / "out.txt").string();
  int rc = std::system(cmd.c_str());
  CHECK(rc == 0);
  CHECK(read_file((dir / "out.txt").string()).find("ok") != std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  fs::path dir = temp_dir();
  for (int run = 0; run < 2; ++run) {
    Json cfg{{"machine", kData + "/toy_even.json"},
             {"stages", {"pad", "symmetrize", "split", "s10", "compose", "multiply:2"}},
             {"seed", 7},
             {"out", (dir / ("b" + std::to_string(run) + ".json")).string()}};
    std::ostringstream out, err;
    REQUIRE(cmd_build(make_cfg(cfg), out, err) == kOk);
  }
  CHECK(read_file((dir / "b0.json").string()) == read_file((dir / "b1.json").string()));
}
