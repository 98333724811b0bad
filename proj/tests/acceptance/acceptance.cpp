// Runs the acceptance criteria end to end and prints one line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../support/kernel_properties.hpp"
#include "obtt/cli.hpp"

namespace fs = std::filesystem;
using namespace obtt;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool cond, const std::string& why) {
    if (!cond && pass) {
      pass = false;
      detail = why;
    }
  }
};

int failed = 0;

void report(int n, const std::string& what, const Outcome& o, const std::string& summary) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << what << " -- "
            << (o.pass ? summary : o.detail) << std::endl;
  failed += !o.pass;
}

std::vector<fs::path> files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".obtt") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool anyFileContains(const std::vector<fs::path>& fs_, const std::vector<std::string>& needles) {
  for (const auto& f : fs_) {
    std::string text = readFile(f.string());
    bool all = true;
    for (const auto& n : needles) all = all && text.find(n) != std::string::npos;
    if (all) return true;
  }
  return false;
}

std::string normalizeOut(const fs::path& file, const std::string& name) {
  std::ostringstream out, err;
  if (cmdNormalize(file.string(), name, out, err) != kExitOk) return "error: " + err.str();
  return out.str();
}

Outcome corpus(const fs::path& dir, std::string& summary) {
  Outcome o;
  std::ostringstream sink;
  auto t0 = Clock::now();
  auto good = files(dir / "good"), bad = files(dir / "bad");
  for (const auto& f : good)
    o.require(cmdCheck({f.string()}, sink, sink) == kExitOk, f.filename().string() + " should check");
  for (const auto& f : bad)
    o.require(cmdCheck({f.string()}, sink, sink) == kExitFailure, f.filename().string() + " should be rejected");
  double elapsed = since(t0);
  o.require(good.size() >= 20, "only " + std::to_string(good.size()) + " well-typed files");
  o.require(bad.size() >= 10, "only " + std::to_string(bad.size()) + " ill-typed files");
  o.require(anyFileContains(good, {"piFst", "piSnd", "cast"}), "no transport along a Pi-code equality");
  o.require(fs::exists(dir / "bad/01_universe_in_itself.obtt"), "missing the universe-in-itself file");
  o.require(fs::exists(dir / "bad/02_pifst_on_bool.obtt"), "missing the piFst-on-Bool file");
  {
    std::ostringstream out, err;
    o.require(cmdCheck({(dir / "bad/02_pifst_on_bool.obtt").string()}, out, err) == kExitFailure &&
                  err.str().find("piFst needs an equality between cPi codes") != std::string::npos,
              "piFst on Bool is not reported as a decomposition error");
  }
  // the normalizer examples
  auto lifted = normalizeOut(dir / "good/22_refl_cast_true.obtt", "liftedIdentity");
  o.require(lifted.find(": Pi Bool (_ . Bool)") != std::string::npos, "lifted Pi type did not normalize: " + lifted);
  auto castTrue = normalizeOut(dir / "good/22_refl_cast_true.obtt", "castTrue");
  o.require(castTrue.rfind("true\n", 0) == 0, "refl cast of true gave " + castTrue);
  auto stuck = normalizeOut(dir / "good/21_stuck_cast.obtt", "stuck");
  o.require(stuck.find("cast x") != std::string::npos, "open cast is not stuck: " + stuck);
  o.require(elapsed < 5.0, "corpus took " + secs(elapsed));
  summary = std::to_string(good.size()) + " good files exit 0, " + std::to_string(bad.size()) + " bad files exit 1, " +
            secs(elapsed);
  return o;
}

Outcome properties(std::string& summary) {
  Outcome o;
  auto t0 = Clock::now();
  struct Run {
    const char* name;
    testing::Tally t;
  };
  std::vector<Run> runs{{"decode/lift", testing::decode_commutes_with_lift(11, 1000)},
                        {"lift functoriality", testing::lift_functorial(12, 1000)},
                        {"lift normal forms", testing::lift_normal_forms(13, 1000)},
                        {"Pi injectivity", testing::pi_injectivity(14, 1000)},
                        {"proof irrelevance", testing::proof_irrelevance(15, 1000)}};
  std::size_t cases = 0;
  for (const auto& r : runs) {
    cases += r.t.cases;
    o.require(r.t.cases >= 1000, std::string(r.name) + ": only " + std::to_string(r.t.cases) + " cases");
    o.require(r.t.ok(), std::string(r.name) + ": " + std::to_string(r.t.failures) + " failures, first " + r.t.first);
  }
  o.require(runs[3].t.hits > 0, "Pi injectivity never saw an equal pair");
  summary = std::to_string(cases) + " generated cases, 0 failures, " + secs(since(t0));
  return o;
}

struct ModelRun {
  int exit = -1;
  std::string text;
  nlohmann::json report;
  double seconds = 0;
};

ModelRun verify(const fs::path& config, const fs::path& out, std::size_t jobs = 1) {
  ModelRun r;
  VerifyRequest req;
  req.configPath = config.string();
  req.reportPath = out.string();
  req.jobs = jobs;
  std::ostringstream sink;
  auto t0 = Clock::now();
  r.exit = cmdModelVerify(req, sink, sink);
  r.seconds = since(t0);
  if (fs::exists(out)) {
    r.text = readFile(out.string());
    r.report = nlohmann::json::parse(r.text);
  }
  return r;
}

std::vector<const nlohmann::json*> checksNamed(const nlohmann::json& report, const std::string& name) {
  std::vector<const nlohmann::json*> out;
  for (const auto& c : report.at("checks"))
    if (c.at("name") == name) out.push_back(&c);
  return out;
}

void requireSuite(Outcome& o, const std::string& base, const ModelRun& r) {
  o.require(r.exit == kExitOk, base + ": model-verify exited " + std::to_string(r.exit));
  if (r.report.is_null()) return;
  for (const auto& c : r.report.at("checks"))
    o.require(c.at("status") == "pass", base + ": " + c.at("name").get<std::string>() + " failed at " +
                                            c.at("stage").get<std::string>());
  for (const char* name : {"retraction", "decode-pi", "naturality", "lift", "genericity"})
    o.require(!checksNamed(r.report, name).empty(), base + ": no " + name + " check ran");
  o.require(r.report.at("config").at("bounds") == nlohmann::json({2, 3, 4}), base + ": lift did not span three levels");
  o.require(r.report.at("config").at("depth") == 2, base + ": not at depth 2");
  o.require(r.report.at("config").at("family_bound") == 2, base + ": genericity family bound is not 2");
}

}  // namespace

int main() {
  const fs::path corpusDir = OBTT_CORPUS_DIR, configDir = OBTT_CONFIG_DIR, work = OBTT_WORK_DIR;
  fs::create_directories(work);
  const std::vector<std::string> bases{"terminal", "arrow", "span"};

  std::string summary;
  Outcome c1 = corpus(corpusDir, summary);
  report(1, "kernel golden corpus", c1, summary);

  Outcome c2 = properties(summary);
  report(2, "strictness and injectivity properties", c2, summary);

  std::vector<ModelRun> strict;
  Outcome c3;
  double strictTime = 0;
  std::size_t decodePi = 0;
  for (const auto& b : bases) {
    strict.push_back(verify(configDir / (b + "_strict.json"), work / (b + "_strict.json")));
    strictTime += strict.back().seconds;
    requireSuite(c3, b, strict.back());
    if (!strict.back().report.is_null())
      for (const auto* c : checksNamed(strict.back().report, "decode-pi")) decodePi += c->at("count").get<std::size_t>();
  }
  c3.require(strictTime < 120, "strict suite took " + secs(strictTime));
  report(3, "model suite, strict host", c3,
         "3 bases pass; " + std::to_string(decodePi) + " Pi codes matched the brute-force section oracle; " +
             secs(strictTime));

  Outcome c4;
  std::size_t witnesses = 0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (strict[i].report.is_null()) {
      c4.require(false, bases[i] + ": no report");
      continue;
    }
    auto ws = checksNamed(strict[i].report, "host-non-injectivity");
    c4.require(!ws.empty(), bases[i] + ": no witness check ran");
    for (const auto* w : ws) {
      const auto& x = w->at("witness");
      bool found = x.is_object() && x.value("host_pi_equal", false) && !x.value("codes_equal", true);
      c4.require(found, bases[i] + ": no witness at stage " + w->at("stage").get<std::string>());
      witnesses += found;
    }
  }
  report(4, "host Pi is not injective over the empty domain", c4,
         std::to_string(witnesses) + " stages with equal host Pi and distinct fn codes");

  Outcome c5;
  std::vector<ModelRun> weak;
  double weakTime = 0;
  for (const auto& b : bases) {
    weak.push_back(verify(configDir / (b + "_weak.json"), work / (b + "_weak.json")));
    weakTime += weak.back().seconds;
    requireSuite(c5, b, weak.back());
    if (weak.back().report.is_null()) continue;
    auto ws = checksNamed(weak.back().report, "weak-host-witness");
    bool found = ws.size() == 1 && ws[0]->at("witness").is_object() && ws[0]->at("witness").value("isomorphic", false) &&
                 !ws[0]->at("witness").value("equal", true);
    c5.require(found, b + ": no host Pi output that is isomorphic but not equal to the sections");
  }
  c5.require(weakTime < 120, "weak suite took " + secs(weakTime));
  report(5, "model suite, weak host", c5, "3 bases pass with a non-equal isomorphic host Pi recorded; " + secs(weakTime));

  Outcome c6;
  auto again = verify(configDir / "arrow_weak.json", work / "arrow_weak_again.json");
  c6.require(!again.text.empty() && again.text == weak[1].text, "arrow weak reports differ between runs");
  auto three = verify(configDir / "arrow_strict.json", work / "arrow_strict_jobs3.json", 3);
  c6.require(!three.text.empty() && three.text == strict[1].text, "arrow reports differ between 1 and 3 jobs");
  report(6, "deterministic reports", c6, "byte-identical across repeated runs and job counts");

  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
