#include <cstdlib>
#include <fstream>
#include <sstream>

#include "coopsafe/cli.hpp"
#include "coopsafe/report.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/model_gen.hpp"
#include "support/test_models.hpp"

using namespace coopsafe;
using namespace coopsafe::testing;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "coopsafe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
 public:
  EnvGuard(const char* name, const std::string& value) : name_(name) { setenv(name, value.c_str(), 1); }
  ~EnvGuard() { unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("version and help") {
  const Run v = run({"--version"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("0.1.0") != std::string::npos);
  const Run h = run({"--help"});
  CHECK(h.code == kExitOk);
  CHECK(h.out.find("assess") != std::string::npos);
}

TEST_CASE("usage errors exit with 4") {
  CHECK(run({}).code == kExitUsageError);
  CHECK(run({"explode"}).code == kExitUsageError);
  CHECK(run({"report"}).code == kExitUsageError);
  TempDir dir;
  const auto model = dir.write("m.coop", kBaseModel).string();
  CHECK(run({"report", "-m", model, "--format", "yaml"}).code == kExitUsageError);
  CHECK(run({"report", "-m", model, "--fail-on", "sometimes"}).code == kExitUsageError);
}

TEST_CASE("exit codes follow --fail-on") {
  TempDir dir;
  const auto model = dir.write("m.coop", kBaseModel).string();
  CHECK(run({"report", "-m", model}).code == kExitConflicts);
  CHECK(run({"report", "-m", model, "--fail-on", "conflicts"}).code == kExitConflicts);
  CHECK(run({"report", "-m", model, "--fail-on", "none"}).code == kExitOk);
  CHECK(run({"validate", "-m", model}).code == kExitOk);
  CHECK(run({"fsrs", "-m", model}).code == kExitOk);

  const auto calm = dir.write("calm.coop", base_with("response continue-operation;", "response degrade-functionality;"))
                        .string();
  const Run r = run({"assess", "-m", calm});
  CHECK(r.code == kExitUnfulfilled);
  CHECK(run({"assess", "-m", calm, "--fail-on", "conflicts"}).code == kExitOk);
}

TEST_CASE("input errors exit with 3 and print located diagnostics") {
  TempDir dir;
  const auto bad = dir.write("bad.coop", "item a \"A\" { kind vehicle; }\nitem a \"B\" { kind vehicle; }\n").string();
  const Run r = run({"validate", "-m", bad});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("bad.coop:2:6: error[DUP_ID]") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run({"report", "-m", (dir.path() / "missing.coop").string()}).code == kExitInputError);
}

TEST_CASE("analysis errors exit with 3") {
  TempDir dir;
  const auto model = dir.write("m.coop", base_with("basic act dead;", "basic act dead; basic act smoke;")).string();
  const Run r = run({"fsrs", "-m", model});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("error[UNANNOTATED_EVENT]: act:smoke (vehicular)") != std::string::npos);
}

TEST_CASE("reports go to --out when given") {
  TempDir dir;
  const auto model = dir.write("m.coop", kBaseModel).string();
  const auto target = (dir.path() / "report.md").string();
  const Run r = run({"report", "-m", model, "--format", "markdown", "--out", target, "--fail-on", "none"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(target);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("# Safety conformance report") == 0);
  CHECK(run({"report", "-m", model, "--out", (dir.path() / "no" / "such" / "dir.json").string()}).code ==
        kExitInputError);
}

TEST_CASE("catalog selection: --catalog wins over the environment") {
  TempDir dir;
  const auto model = dir.write("m.coop", kBaseModel).string();
  const auto env_catalog = dir.write("env.coop", std::string(default_catalog_text())).string();
  const auto flag_catalog = dir.write("flag.coop", std::string(default_catalog_text()) + "\n").string();
  auto catalog_path = [](const Run& r) {
    return nlohmann::json::parse(r.out)["meta"]["catalog"]["path"].get<std::string>();
  };
  CHECK(catalog_path(run({"report", "-m", model})) == "<bundled>");
  EnvGuard guard("COOP_SAFETY_CATALOG", env_catalog);
  CHECK(catalog_path(run({"report", "-m", model})) == env_catalog);
  CHECK(catalog_path(run({"report", "-m", model, "--catalog", flag_catalog})) == flag_catalog);

  const auto broken = dir.write("broken.coop", "tactic x \"X\" { provides; }\n").string();
  CHECK(run({"report", "-m", model, "--catalog", broken}).code == kExitInputError);
}

TEST_CASE("stage subcommands report their stage") {
  TempDir dir;
  const auto model = dir.write("m.coop", kBaseModel).string();
  for (const char* stage : {"validate", "hara", "goals", "fsrs", "conflicts", "assess", "report"}) {
    const Run r = run({stage, "-m", model, "--fail-on", "none"});
    CHECK(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["meta"]["stage"] == stage);
  }
}

TEST_CASE("warnings are printed but do not change the exit code") {
  TempDir dir;
  const auto model = dir.write("m.coop", std::string(kBaseModel) + "infeasible ghost_* * *;\n").string();
  const Run r = run({"report", "-m", model, "--fail-on", "none"});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning[UNMATCHED_PATTERN]") != std::string::npos);
}
