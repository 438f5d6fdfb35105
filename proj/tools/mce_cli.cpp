#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "mce/io.hpp"

namespace {

using mce::io::json;

enum class Format { Json, Csv, Human };

struct CliConfig {
  std::uint64_t q = 11;
  std::size_t m = 4, n = 4, k = 12;
  std::uint64_t seed = 1;
  std::uint64_t dict_size = 0;
  std::uint64_t probes = 0;
  std::uint64_t samples = 5000;
  mce::ConjStrategy strategy = mce::ConjStrategy::Auto;
  mce::CanonMode canon = mce::CanonMode::BruteForce;
  unsigned threads = 1;
  bool deterministic = false;
  Format format = Format::Human;
  std::string input, output, solution, stats_out;
  std::string stats_kind = "hull";
};

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

unsigned worker_budget(const CliConfig& cfg) { return cfg.deterministic ? 1u : std::max(1u, cfg.threads); }

int report_error(const CliConfig& cfg, const std::string& kind, const std::string& message) {
  if (cfg.format == Format::Json) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  } else {
    std::cerr << "error: " << message << '\n';
  }
  return kind == "OutOfRange" || kind == "ParseError" || kind == "ValidationError" || kind == "InvalidArgument" ||
                 kind == "Usage"
             ? kUsage
             : kFailure;
}

void emit(const CliConfig& cfg, const json& j, const std::string& human) {
  if (cfg.format == Format::Json) {
    std::cout << j.dump(1) << '\n';
  } else {
    std::cout << human;
  }
}

int cmd_gen(const CliConfig& cfg) {
  const auto [inst, sol] = mce::gen_instance(cfg.q, cfg.m, cfg.n, cfg.k, cfg.seed);
  if (cfg.output.empty()) {
    std::cout << mce::io::instance_to_json(inst).dump(1) << '\n';
  } else {
    mce::io::write_instance(cfg.output, inst);
  }
  if (!cfg.solution.empty()) mce::io::write_file(cfg.solution, mce::io::solution_to_json(sol.p, sol.q).dump(1) + "\n");
  return kOk;
}

std::string human_stats(const mce::AttackStats& s) {
  std::ostringstream os;
  os << "dictionary  " << s.keys << "/" << s.dict_size << " keys" << (s.saturated ? " (saturated)" : "") << '\n'
     << "probes      " << s.probes_used << "/" << s.probes << '\n'
     << "sampling    " << s.draws << " draws, " << s.dim1_hulls << " dim-1 hulls\n"
     << "collisions  " << s.collisions << " (" << s.false_positives << " false positives)\n"
     << "transform   transposed=" << s.transform.transposed << " dual_swapped=" << s.transform.dual_swapped << '\n';
  for (const auto& [phase, ms] : s.phase_times_ms) os << "time        " << phase << " " << ms << " ms\n";
  return os.str();
}

int cmd_attack(const CliConfig& cfg) {
  const auto loaded = mce::io::read_instance(cfg.input);
  mce::AttackConfig ac;
  ac.dict_size = cfg.dict_size;
  ac.probes = cfg.probes;
  ac.strategy = cfg.strategy;
  ac.canon_mode = cfg.canon;
  ac.threads = worker_budget(cfg);
  ac.seed = cfg.seed;
  const auto res = mce::attack(loaded.instance.c, loaded.instance.d, ac);
  const auto stats = mce::io::stats_to_json(res.stats);
  if (!cfg.stats_out.empty()) mce::io::write_file(cfg.stats_out, stats.dump(1) + "\n");
  if (res.failure == mce::AttackPhase::OutOfRange) return report_error(cfg, "OutOfRange", res.message);
  json out = {{"result", res.success() ? "success" : "failure"}, {"stats", stats}};
  if (!res.success()) out["phase"] = mce::to_string(res.failure);
  std::string human = std::string(res.success() ? "success\n" : "failure: " + res.message + "\n") + human_stats(res.stats);
  if (res.success()) {
    const auto sol = mce::io::solution_to_json(*res.p, *res.q);
    if (!cfg.output.empty()) {
      mce::io::write_file(cfg.output, sol.dump(1) + "\n");
    } else {
      out["solution"] = sol;
    }
  }
  emit(cfg, out, human);
  return res.success() ? kOk : kFailure;
}

int cmd_verify(const CliConfig& cfg) {
  const auto loaded = mce::io::read_instance(cfg.input);
  const auto sol = mce::io::solution_from_json(mce::io::parse_text(mce::io::read_file(cfg.solution), cfg.solution),
                                               loaded.instance);
  const bool ok = mce::verify_solution(loaded.instance, sol.p, sol.q);
  emit(cfg, json{{"valid", ok}}, ok ? "valid\n" : "invalid\n");
  return ok ? kOk : kFailure;
}

std::string tuple_text(const mce::CharTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.coeffs.size(); ++i) s += (i ? "," : "") + std::to_string(t.coeffs[i]);
  return s + ")";
}

int cmd_stats(const CliConfig& cfg) {
  if (cfg.stats_kind == "hull") {
    const auto hist = mce::hull_dim_stats(cfg.q, cfg.m, cfg.k, cfg.samples, cfg.seed, worker_budget(cfg));
    if (cfg.format == Format::Json) {
      json rows = json::array();
      for (const auto& [d, c] : hist) {
        rows.push_back({{"dim", d}, {"count", c}, {"fraction", static_cast<double>(c) / static_cast<double>(cfg.samples)}});
      }
      std::cout << json{{"q", cfg.q}, {"m", cfg.m}, {"k", cfg.k}, {"samples", cfg.samples}, {"histogram", rows}}.dump(1)
                << '\n';
    } else {
      std::cout << mce::histogram_csv(hist);
    }
  } else if (cfg.stats_kind == "classes") {
    const auto s = mce::charpoly_class_stats(cfg.q, cfg.m, cfg.n, cfg.k, cfg.samples, cfg.seed);
    if (cfg.format == Format::Json) {
      json rows = json::array();
      for (const auto& [t, c] : s.frequencies) rows.push_back({{"tuple", t.coeffs}, {"count", c}});
      std::cout << json{{"draws", s.draws}, {"qualifying", s.qualifying}, {"distinct", s.frequencies.size()},
                        {"max_min_ratio", s.max_min_ratio}, {"frequencies", rows}}
                       .dump(1)
                << '\n';
    } else {
      std::cout << "tuple,count\n";
      for (const auto& [t, c] : s.frequencies) std::cout << '"' << tuple_text(t) << "\"," << c << '\n';
      if (cfg.format == Format::Human) {
        std::cout << "# draws=" << s.draws << " qualifying=" << s.qualifying << " distinct=" << s.frequencies.size()
                  << " max/min=" << s.max_min_ratio << '\n';
      }
    }
  } else {
    const auto count = mce::count_sep_classes(cfg.q, cfg.m);
    emit(cfg, json{{"q", cfg.q}, {"m", cfg.m}, {"sep_classes", count}}, std::to_string(count) + "\n");
  }
  return kOk;
}

// Small planted pipeline plus one negative case.
int cmd_selftest(const CliConfig& cfg) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto [inst, sol] = mce::gen_instance(11, 4, 4, 12, seed);
    check("planted solution verifies (seed " + std::to_string(seed) + ")", mce::verify_solution(inst, sol.p, sol.q));
    mce::AttackConfig ac;
    ac.seed = seed;
    ac.threads = worker_budget(cfg);
    const auto res = mce::attack(inst.c, inst.d, ac);
    check("attack q=11 m=n=4 k=12 (seed " + std::to_string(seed) + ")",
          res.success() && mce::verify_solution(inst, *res.p, *res.q));
  }
  const auto bad = mce::gen_unrelated(11, 4, 4, 12, 7);
  check("unrelated codes are rejected", !mce::attack(bad.c, bad.d, {}).success());
  return failures == 0 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;
  CLI::App app{"Matrix code equivalence via one-dimensional hulls"};
  app.require_subcommand(1);

  const std::map<std::string, mce::ConjStrategy> strategies{
      {"linearized", mce::ConjStrategy::Linearized}, {"diagonal", mce::ConjStrategy::Diagonal}, {"auto", mce::ConjStrategy::Auto}};
  const std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}, {"human", Format::Human}};
  const std::map<std::string, mce::CanonMode> canons{{"brute", mce::CanonMode::BruteForce}, {"fast", mce::CanonMode::Fast}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json, csv or human")->transform(CLI::CheckedTransformer(formats));
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--threads", cfg.threads, "worker budget");
    sub->add_flag("--deterministic", cfg.deterministic, "force a single worker");
  };
  auto add_shape = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "odd prime field size");
    sub->add_option("--m", cfg.m, "rows");
    sub->add_option("--n", cfg.n, "columns");
    sub->add_option("--k", cfg.k, "code dimension");
  };

  auto* gen = app.add_subcommand("gen", "generate a planted instance");
  add_shape(gen);
  add_common(gen);
  gen->add_option("--out", cfg.output, "instance file (stdout if omitted)");
  gen->add_option("--solution-out", cfg.solution, "planted solution file");

  auto* atk = app.add_subcommand("attack", "recover (P, Q) for an instance file");
  add_common(atk);
  atk->add_option("--in", cfg.input, "instance file")->required();
  atk->add_option("--out", cfg.output, "solution file");
  atk->add_option("--stats-out", cfg.stats_out, "attack statistics file");
  atk->add_option("--dict-size", cfg.dict_size, "dictionary size L (0 = automatic)");
  atk->add_option("--probes", cfg.probes, "probe budget N (0 = automatic)");
  atk->add_option("--strategy", cfg.strategy, "linearized, diagonal or auto")->transform(CLI::CheckedTransformer(strategies));
  atk->add_option("--canon", cfg.canon, "brute or fast")->transform(CLI::CheckedTransformer(canons));

  auto* ver = app.add_subcommand("verify", "check D = P C Q^-1");
  add_common(ver);
  ver->add_option("--in", cfg.input, "instance file")->required();
  ver->add_option("--solution", cfg.solution, "solution file")->required();

  auto* st = app.add_subcommand("stats", "hull, classes or count");
  add_shape(st);
  add_common(st);
  st->add_option("kind", cfg.stats_kind, "hull, classes or count")->check(CLI::IsMember({"hull", "classes", "count"}));
  st->add_option("--samples", cfg.samples, "number of samples");

  auto* self = app.add_subcommand("selftest", "run a small planted pipeline");
  add_common(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(cfg);
    if (*atk) return cmd_attack(cfg);
    if (*ver) return cmd_verify(cfg);
    if (*st) return cmd_stats(cfg);
    return cmd_selftest(cfg);
  } catch (const mce::Error& e) {
    return report_error(cfg, std::string(mce::to_string(e.kind())), e.what());
  } catch (const std::exception& e) {
    return report_error(cfg, "Internal", e.what());
  }
}
