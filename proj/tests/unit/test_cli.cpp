#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NQ_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("cli pipeline smoke") {
  const auto dir = fs::temp_directory_path() / "nq_unit_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "synth.json") << R"({"n_users": 300, "n_weeks": 20, "seed": 2})";
  std::ofstream(dir / "q4_any.json") << R"({"kind": "q4_any", "bootstrap": 100})";

  const auto data = dir / "d";
  auto r = run("synth --config " + (dir / "synth.json").string() + " --out " + data.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(data / "follows.csv"));
  CHECK(fs::exists(data / "manifest.json"));

  r = run("spectrum --data " + data.string() + " --out " + (dir / "r").string());
  REQUIRE(r.code == 0);
  std::ifstream spectrum(dir / "r" / "spectrum.csv");
  std::string header;
  std::getline(spectrum, header);
  CHECK(header == "bin_center,b_nn,count,variance");
  const auto manifest = read_json(dir / "r" / "manifest.json");
  CHECK(manifest["subcommand"] == "spectrum");
  CHECK(manifest.contains("tool_version"));
  CHECK(manifest.contains("wall_time_seconds"));

  r = run("match --config " + (dir / "q4_any.json").string() + " --data " + data.string());
  REQUIRE(r.code == 0);
  const auto results = nlohmann::json::parse(r.output);
  CHECK(results["balance"]["sb_before"].size() == 11);
  CHECK(results["balance"]["sb_after"].contains("average_beauty"));
  CHECK(results["groups"].contains("treatment"));

  r = run("ingest-check --data " + (dir / "missing").string());
  CHECK(r.code == 1);
  CHECK(r.output.find((dir / "missing").string()) != std::string::npos);

  r = run("frobnicate");
  CHECK(r.code == 2);
  r = run("spectrum --data " + data.string() + " --bins zero");
  CHECK(r.code == 2);
  fs::remove_all(dir);
}
