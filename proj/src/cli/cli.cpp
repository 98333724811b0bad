#include "obtt/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "obtt/kernel.hpp"
#include "obtt/syntax.hpp"

namespace obtt {

namespace fs = std::filesystem;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::size_t natural(const nlohmann::json& raw, const char* key, std::size_t fallback) {
  if (!raw.contains(key)) return fallback;
  const auto& v = raw.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(std::string("'") + key + "' must be a natural number");
  return v.get<std::size_t>();
}

void checkMode(const std::string& m) {
  if (m != "strict" && m != "weak") throw ConfigError("'mode' must be \"strict\" or \"weak\", got \"" + m + "\"");
}

}  // namespace

Config parseConfig(const nlohmann::json& raw, const std::string& configDir) {
  if (!raw.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"base", "levels", "bounds", "depth", "mode",
                                              "caps", "seed", "family_bound", "uni_depth"};
  for (const auto& [key, _] : raw.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config field '" + key + "'");

  Config c;
  if (!raw.contains("base") || !raw.at("base").is_string()) throw ConfigError("'base' must name a category JSON file");
  fs::path base = raw.at("base").get<std::string>();
  c.basePath = (base.is_absolute() ? base : fs::path(configDir) / base).lexically_normal().string();
  c.levels = natural(raw, "levels", c.levels);
  if (c.levels == 0) throw ConfigError("'levels' must be at least 1");
  if (raw.contains("bounds")) {
    const auto& b = raw.at("bounds");
    if (!b.is_array() || b.empty()) throw ConfigError("'bounds' must be a non-empty list of naturals");
    c.bounds.clear();
    for (const auto& x : b) {
      if (!x.is_number_integer() || x.get<long long>() < 0) throw ConfigError("'bounds' must be a non-empty list of naturals");
      c.bounds.push_back(x.get<std::size_t>());
    }
  }
  for (std::size_t i = 1; i < c.bounds.size(); ++i)
    if (c.bounds[i] <= c.bounds[i - 1])
      throw ConfigError("bounds must be strictly increasing: bounds[" + std::to_string(i - 1) + "] = " +
                        std::to_string(c.bounds[i - 1]) + " but bounds[" + std::to_string(i) +
                        "] = " + std::to_string(c.bounds[i]));
  if (c.bounds.size() > c.levels)
    throw ConfigError("'bounds' has " + std::to_string(c.bounds.size()) + " entries but 'levels' is " +
                      std::to_string(c.levels));
  c.depth = natural(raw, "depth", c.depth);
  if (raw.contains("mode")) {
    if (!raw.at("mode").is_string()) throw ConfigError("'mode' must be a string");
    std::string m = raw.at("mode").get<std::string>();
    checkMode(m);
    c.strict = m == "strict";
  }
  if (raw.contains("caps")) {
    const auto& caps = raw.at("caps");
    if (!caps.is_object()) throw ConfigError("'caps' must be an object");
    for (const auto& [key, _] : caps.items())
      if (key != "enumeration") throw ConfigError("unknown cap '" + key + "'");
    c.cap = natural(caps, "enumeration", c.cap);
    if (c.cap == 0) throw ConfigError("caps must be positive");
  }
  c.seed = natural(raw, "seed", c.seed);
  c.familyBound = natural(raw, "family_bound", c.familyBound);
  c.uniDepth = natural(raw, "uni_depth", c.uniDepth);
  return c;
}

Config loadConfig(const std::string& path) {
  std::string text;
  try {
    text = readFile(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parseConfig(raw, fs::path(path).parent_path().string());
}

void applyOverrides(Config& c, const Overrides& o) {
  if (o.mode) {
    checkMode(*o.mode);
    c.strict = *o.mode == "strict";
  }
  if (o.depth) c.depth = *o.depth;
  if (o.seed) c.seed = *o.seed;
  if (o.cap) {
    if (*o.cap == 0) throw ConfigError("caps must be positive");
    c.cap = *o.cap;
  }
}

std::vector<std::size_t> effectiveBounds(const Config& c) {
  std::vector<std::size_t> b = c.bounds;
  while (b.size() < c.levels) b.push_back(b.back() + 1);
  return b;
}

nlohmann::json echo(const Config& c) {
  // The base is echoed by file name only so reports do not depend on where
  // the checkout lives; its content is covered by the digest.
  return {{"base", fs::path(c.basePath).filename().string()},
          {"levels", c.levels},
          {"bounds", effectiveBounds(c)},
          {"depth", c.depth},
          {"mode", c.strict ? "strict" : "weak"},
          {"caps", {{"enumeration", c.cap}}},
          {"seed", c.seed},
          {"family_bound", c.familyBound},
          {"uni_depth", c.uniDepth}};
}

int cmdCheck(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  int status = kExitOk;
  for (const auto& f : files) {
    std::string text;
    try {
      text = readFile(f);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    try {
      auto decls = check_file(parse(text));
      out << f << ": ok (" << decls.size() << " declarations)\n";
    } catch (const SyntaxError& e) {
      err << f << ":" << e.what() << "\n";
      status = kExitFailure;
    } catch (const TypeError& e) {
      err << f << ":" << e.what() << "\n";
      status = kExitFailure;
    }
  }
  return status;
}

int cmdNormalize(const std::string& file, const std::string& name, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = readFile(file);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    SourceFile src = parse(text);
    auto decls = check_file(src);
    std::vector<std::string> globals;
    for (const auto& d : decls) globals.push_back(d.name);
    for (const auto& d : decls) {
      if (d.name != name) continue;
      out << print(quote(0, d.value), globals) << "\n  : " << print(quote(0, d.type), globals) << "\n";
      return kExitOk;
    }
    err << "error: no declaration named '" << name << "' in " << file << "\n";
    return kExitFailure;
  } catch (const SyntaxError& e) {
    err << file << ":" << e.what() << "\n";
  } catch (const TypeError& e) {
    err << file << ":" << e.what() << "\n";
  }
  return kExitFailure;
}

int cmdModelVerify(const VerifyRequest& req, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  Config cfg;
  FinCat cat;
  std::string digest;
  try {
    cfg = loadConfig(req.configPath);
    applyOverrides(cfg, req.overrides);
    std::string configText = readFile(req.configPath);
    std::string baseText;
    try {
      baseText = readFile(cfg.basePath);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    nlohmann::json rawCat;
    try {
      rawCat = nlohmann::json::parse(baseText);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("base category is not valid JSON: " + std::string(e.what()));
    }
    cat = validateCat(rawCat);
    digest = fnv1a64(configText + '\0' + baseText);
  } catch (const CategoryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  ModelOptions opts;
  opts.bounds = effectiveBounds(cfg);
  opts.depth = cfg.depth;
  opts.strict = cfg.strict;
  opts.cap = cfg.cap;
  opts.seed = cfg.seed;
  opts.familyBound = cfg.familyBound;
  opts.uniDepth = cfg.uniDepth;
  opts.jobs = std::max<std::size_t>(1, req.jobs);

  nlohmann::json report;
  try {
    report = runModel(cat, opts, echo(cfg), digest);
  } catch (const std::exception& e) {
    // Only host construction can throw here; checks record their own errors.
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  std::string text = report.dump(2) + "\n";
  if (req.reportPath) {
    std::ofstream f(*req.reportPath, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write report to '" << *req.reportPath << "'\n";
      return kExitUsage;
    }
  } else {
    out << text;
  }

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& summary = report.at("summary");
  err << "model-verify " << cat.objects.size() << " objects, " << (cfg.strict ? "strict" : "weak") << " host: "
      << summary.at("checks").get<std::size_t>() - summary.at("failed").get<std::size_t>() << "/"
      << summary.at("checks") << " checks passed";
  for (const auto& w : report.at("warnings")) err << "\nwarning: " << w.get<std::string>();
  for (const auto& c : report.at("checks"))
    if (c.at("status") == "fail")
      err << "\nFAIL " << c.at("name").get<std::string>() << " at " << c.at("stage").get<std::string>();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", secs);
  err << "\nwall time " << buf << " s\n";
  return summary.at("failed").get<std::size_t>() == 0 ? kExitOk : kExitFailure;
}

}  // namespace obtt
