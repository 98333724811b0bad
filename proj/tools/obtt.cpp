#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "obtt/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"obtt: observational type theory kernel and presheaf-model verifier"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "type-check .obtt files");
  check->add_option("files", files, "source files")->required();

  std::string file, name;
  auto* normalize = app.add_subcommand("normalize", "print the normal form of a declaration and its type");
  normalize->add_option("file", file, "source file")->required();
  normalize->add_option("name", name, "declaration name")->required();

  obtt::VerifyRequest req;
  std::string mode;
  std::size_t depth = 0, seed = 0;
  std::string report;
  auto* verify = app.add_subcommand("model-verify", "build the universes in a finite presheaf model and check them");
  verify->add_option("--config", req.configPath, "config JSON")->required();
  auto* modeOpt = verify->add_option("--mode", mode, "host mode")->check(CLI::IsMember({"strict", "weak"}));
  auto* depthOpt = verify->add_option("--depth", depth, "code depth");
  verify->add_option("--jobs", req.jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* reportOpt = verify->add_option("--report", report, "write the report here instead of stdout");
  auto* seedOpt = verify->add_option("--seed", seed, "seed for sampled checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : obtt::kExitUsage;
  }

  if (*check) return obtt::cmdCheck(files, std::cout, std::cerr);
  if (*normalize) return obtt::cmdNormalize(file, name, std::cout, std::cerr);

  if (*modeOpt) req.overrides.mode = mode;
  if (*depthOpt) req.overrides.depth = depth;
  if (*seedOpt) req.overrides.seed = seed;
  if (*reportOpt) req.reportPath = report;
  if (const char* cap = std::getenv("OBTT_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(cap, &end, 10);
    if (!*cap || *end || v == 0) {
      std::cerr << "error: OBTT_CAP must be a positive integer\n";
      return obtt::kExitUsage;
    }
    req.overrides.cap = static_cast<std::size_t>(v);
  }
  return obtt::cmdModelVerify(req, std::cout, std::cerr);
}
