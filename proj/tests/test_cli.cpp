#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbm/algebra.hpp"
#include "sbm/cli.hpp"
#include "sbm/instance.hpp"
#include "sbm/sbm_structure.hpp"

namespace fs = std::filesystem;

namespace {

// Runs the CLI entry point in-process with captured streams.
int run_cli(const std::vector<std::string>& args, std::string* out = nullptr,
            std::string* err = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("sbm_cli");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream captured_out;
  std::ostringstream captured_err;
  std::streambuf* old_out = std::cout.rdbuf(captured_out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(captured_err.rdbuf());
  int code = sbm::cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  if (out != nullptr) *out = captured_out.str();
  if (err != nullptr) *err = captured_err.str();
  return code;
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "sbm_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  fs::path p = scratch_dir() / name;
  std::ofstream f(p);
  f << content;
  return p;
}

fs::path write_algebra(const std::string& name, const std::string& fixture) {
  return write_file(name, sbm::algebra_to_json(*sbm::lookup_algebra(fixture)).dump());
}

std::string equality_instance_json() {
  nlohmann::json j;
  j["vars"] = {"x", "y"};
  j["domains"] = {{"x", "fixb"}, {"y", "fixb"}};
  j["constraints"] = nlohmann::json::array();
  j["constraints"].push_back(
      {{"scope", {"x", "y"}}, {"tuples", {{0, 0}, {1, 1}, {2, 2}}}});
  return j.dump();
}

std::string contradiction_instance_json() {
  nlohmann::json j;
  j["vars"] = {"x"};
  j["domains"] = {{"x", "fixb"}};
  j["constraints"] = nlohmann::json::array();
  j["constraints"].push_back({{"scope", {"x"}}, {"tuples", {{1}}}});
  j["constraints"].push_back({{"scope", {"x"}}, {"tuples", {{2}}}});
  return j.dump();
}

}  // namespace

TEST_CASE("check-algebra distinguishes compliant, refused, and invalid input") {
  std::string out;
  fs::path good = write_algebra("good.json", "fixb");
  CHECK(run_cli({"check-algebra", good.string()}, &out) == 0);
  CHECK(out.find("SBM: yes") != std::string::npos);
  CHECK(out.find("minimal element: 0") != std::string::npos);

  fs::path bad = write_algebra("bad.json", "p3");
  CHECK(run_cli({"check-algebra", bad.string()}, &out) == 1);
  CHECK(out.find("SBM: no") != std::string::npos);

  fs::path garbage = write_file("garbage.json", "not json at all");
  CHECK(run_cli({"check-algebra", garbage.string()}) == 2);
}

TEST_CASE("gen --chain emits the named fixture tables") {
  std::string out;
  REQUIRE(run_cli({"gen", "--chain", "1,2"}, &out) == 0);
  nlohmann::json j = nlohmann::json::parse(out);
  sbm::AlgebraRef built = sbm::algebra_from_json(j);
  sbm::AlgebraRef fixb = sbm::lookup_algebra("fixb");
  CHECK(built->dot_table() == fixb->dot_table());
  CHECK(built->m_table() == fixb->m_table());
}

TEST_CASE("gen --instance is deterministic per seed") {
  std::vector<std::string> args = {"gen",   "--instance", "--seed",     "7",
                                   "--vars", "4",          "--fixtures", "fixb,z2"};
  std::string first;
  std::string second;
  REQUIRE(run_cli(args, &first) == 0);
  REQUIRE(run_cli(args, &second) == 0);
  CHECK(first == second);
  nlohmann::json j = nlohmann::json::parse(first);
  CHECK(j["vars"].size() == 4);
}

TEST_CASE("solve and oracle agree on a satisfiable instance") {
  fs::path inst = write_file("eq.json", equality_instance_json());
  std::string solve_out;
  REQUIRE(run_cli({"solve", inst.string()}, &solve_out) == 0);
  nlohmann::json s = nlohmann::json::parse(solve_out);
  CHECK(s["status"] == "SAT");
  REQUIRE(s.contains("assignment"));
  CHECK(s["assignment"]["x"] == s["assignment"]["y"]);

  std::string oracle_out;
  REQUIRE(run_cli({"oracle", inst.string(), "--limit", "5"}, &oracle_out) == 0);
  nlohmann::json o = nlohmann::json::parse(oracle_out);
  CHECK(o["status"] == "SAT");
  CHECK(o["solutions"].size() == 3);
}

TEST_CASE("solve and oracle report contradictions with exit code one") {
  fs::path inst = write_file("unsat.json", contradiction_instance_json());
  std::string out;
  CHECK(run_cli({"solve", inst.string()}, &out) == 1);
  CHECK(nlohmann::json::parse(out)["status"] == "UNSAT");
  CHECK(run_cli({"oracle", inst.string()}, &out) == 1);
  CHECK(nlohmann::json::parse(out)["solutions"].empty());
}

TEST_CASE("solve reports rejection after a lossy shrink with exit code two") {
  std::string gen_out;
  REQUIRE(run_cli({"gen", "--instance", "--seed", "1", "--vars", "3", "--constraints",
                   "3", "--fixtures", "chain_2_2,z2"},
                  &gen_out) == 0);
  fs::path inst = write_file("rejected.json", gen_out);
  std::string out;
  CHECK(run_cli({"solve", inst.string()}, &out) == 2);
  nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j["status"] == "REJECTED");
  CHECK_FALSE(j["diagnostic"].get<std::string>().empty());
  // The oracle still finds a solution, so rejection stayed honest.
  CHECK(run_cli({"oracle", inst.string()}, &out) == 0);
}

TEST_CASE("solve accepts extra algebra files") {
  nlohmann::json renamed = sbm::algebra_to_json(*sbm::lookup_algebra("fixb"));
  renamed["name"] = "myalg";
  fs::path alg_named = write_file("myalg.json", renamed.dump());
  nlohmann::json j = nlohmann::json::parse(equality_instance_json());
  j["domains"] = {{"x", "myalg"}, {"y", "myalg"}};
  fs::path inst = write_file("eq_extra.json", j.dump());
  std::string out;
  CHECK(run_cli({"solve", inst.string()}) == 2);
  REQUIRE(run_cli({"solve", inst.string(), "--algebras", alg_named.string()}, &out) == 0);
  CHECK(nlohmann::json::parse(out)["status"] == "SAT");
}

TEST_CASE("trace files hold one JSON object per line") {
  fs::path inst = write_file("eq.json", equality_instance_json());
  fs::path trace = scratch_dir() / "trace.jsonl";
  std::error_code ec;
  fs::remove(trace, ec);
  REQUIRE(run_cli({"solve", inst.string(), "--trace", trace.string()}) == 0);
  std::ifstream f(trace);
  REQUIRE(f.good());
  std::string line;
  int parsed = 0;
  while (std::getline(f, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.contains("round"));
    ++parsed;
  }
  CHECK(parsed > 0);
}

TEST_CASE("minimize dumps the tightened instance with its algebras") {
  fs::path inst = write_file("eq.json", equality_instance_json());
  std::string out;
  REQUIRE(run_cli({"minimize", inst.string(), "--k", "3"}, &out) == 0);
  nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j["unsat"] == false);
  REQUIRE(j.contains("instance"));
  REQUIRE(j.contains("algebras"));
  std::map<std::string, sbm::AlgebraRef> extra;
  for (const auto& a : j["algebras"]) {
    sbm::AlgebraRef alg = sbm::algebra_from_json(a);
    extra[alg->name()] = alg;
  }
  sbm::Instance parsed = sbm::instance_from_json(j["instance"], extra);
  CHECK(parsed.num_vars() == 2);

  fs::path bad = write_file("unsat.json", contradiction_instance_json());
  CHECK(run_cli({"minimize", bad.string(), "--k", "3"}) == 1);
}

TEST_CASE("coherent prints the class structure of a tight instance") {
  fs::path inst = write_file("eq.json", equality_instance_json());
  std::string out;
  REQUIRE(run_cli({"coherent", inst.string()}, &out) == 0);
  CHECK(out.find("class") != std::string::npos);
  CHECK_FALSE(out.empty());
}

TEST_CASE("verify-ensemble runs the descent in both orders") {
  fs::path inst = write_file("eq.json", equality_instance_json());
  for (const std::string order : {"fwd", "rev"}) {
    std::string out;
    REQUIRE(run_cli({"verify-ensemble", inst.string(), "--order", order}, &out) == 0);
    nlohmann::json j = nlohmann::json::parse(out);
    CHECK(j["status"] == "SAT");
    CHECK(j["order"] == order);
    CHECK(j["assignment"]["x"] == j["assignment"]["y"]);
  }
  fs::path bad = write_file("unsat.json", contradiction_instance_json());
  CHECK(run_cli({"verify-ensemble", bad.string()}) == 1);
}

TEST_CASE("usage errors exit with code two") {
  std::string err;
  CHECK(run_cli({}, nullptr, &err) == 2);
  CHECK(run_cli({"no-such-command"}, nullptr, &err) == 2);
  CHECK(run_cli({"solve"}, nullptr, &err) == 2);
  CHECK(run_cli({"gen", "--no-such-flag"}, nullptr, &err) == 2);
  CHECK(run_cli({"solve", "/no/such/file.json"}, nullptr, &err) == 2);
}
