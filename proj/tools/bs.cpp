// bs: command line front end for Bowen-Series codings.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage, 3 + ErrorKind for
// library errors (3 invalid input ... 11 internal), 12 failed invariant check.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bowen_series.hpp"

namespace bs = bowen_series;
using bs::ErrorKind;
using bs::Json;

namespace {

constexpr int kInvariantFailure = 12;

int exit_code(ErrorKind k) { return 3 + static_cast<int>(k); }

struct InvariantFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    bs::io::write_text_file(path, text);
}

std::size_t thread_cap() {
  const char* env = std::getenv("BS_THREADS");
  if (!env) return 1;
  const std::string s(env);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || v < 1 || v > 1024)
    bs::fail(ErrorKind::invalid_input, "BS_THREADS must be an integer in 1..1024, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

struct DomainArgs {
  std::string source;
  int genus = 2;
  std::string pairing = "commutator";
  bs::Tolerances tol = bs::default_tolerances();

  void add(CLI::App* app) {
    app->add_option("source", source, "preset name (sl2z, ideal_triangle, surface_4g) or domain JSON file")->required();
    app->add_option("--genus", genus, "genus of the surface_4g preset");
    app->add_option("--pairing", pairing, "surface_4g side pairing: commutator or opposite");
  }
  bs::FundamentalDomain resolve() const { return bs::resolve_domain(source, genus, bs::parse_pairing(pairing), tol); }
};

struct CodingArgs {
  std::string policy = "paper_default";
  std::vector<std::string> choices;

  void add(CLI::App* app) {
    app->add_option("--label-policy", policy, "paper_default, clockwise, anticlockwise or explicit");
    app->add_option("--choice", choices, "label override NUMBER=LABEL, interval numbers as displayed");
  }

  bs::GeometricCoding build(const bs::FundamentalDomain& d) const {
    bs::CodingOptions opts;
    opts.policy = bs::parse_label_policy(policy);
    if (choices.empty()) return bs::build_coding(d, opts);
    const auto base = bs::build_coding(d, opts);
    for (const auto& ch : choices) {
      const auto eq = ch.find('=');
      if (eq == std::string::npos) bs::fail(ErrorKind::invalid_input, "--choice expects NUMBER=LABEL, got '" + ch + "'");
      std::size_t number = 0;
      try {
        number = std::stoul(ch.substr(0, eq));
      } catch (const std::exception&) {
        bs::fail(ErrorKind::invalid_input, "bad interval number in --choice '" + ch + "'");
      }
      std::optional<std::size_t> index;
      for (std::size_t i = 0; i < base.coding.size(); ++i)
        if (base.coding.display_index(i) == number) index = i;
      if (!index) bs::fail(ErrorKind::invalid_input, "no interval numbered " + std::to_string(number));
      opts.choices[*index] = d.generators().at(ch.substr(eq + 1));
    }
    return bs::build_coding(d, opts);
  }
};

Json markov_summary(const bs::MarkovCheckReport& m) {
  return Json{{"checked_pairs", m.checked_pairs}, {"checked_points", m.checked_points},
              {"violations", m.violations.size()}};
}

// ---------------------------------------------------------------------------

int cmd_domain_verify(const DomainArgs& da, const std::string& out) {
  const auto d = da.resolve();
  const auto r = bs::verify_even_corners(d);
  emit(out, bs::even_corner_report_to_json(d, r).dump(2) + "\n");
  if (!r.ok) {
    std::cerr << "bs: domain does not have even corners\n" << r.summary();
    return exit_code(ErrorKind::even_corners);
  }
  return 0;
}

int cmd_domain_export(const DomainArgs& da, const std::string& out) {
  emit(out, bs::domain_to_json(da.resolve()).dump(2) + "\n");
  return 0;
}

int cmd_coding_build(const DomainArgs& da, const CodingArgs& ca, const std::string& out) {
  const auto g = ca.build(da.resolve());
  emit(out, bs::coding_to_json(g.coding).dump(2) + "\n");
  return 0;
}

int cmd_analyze(const std::string& path, std::size_t horizon, const std::string& out) {
  const auto c = bs::load_coding(path);
  emit(out, bs::chain_report_to_json(c, bs::analyze(c.P, horizon)).dump(2) + "\n");
  return 0;
}

int cmd_spheres(const std::string& path, std::size_t max_n, std::size_t limit, std::uint64_t budget,
                const std::string& out) {
  const auto c = bs::load_coding(path);
  emit(out, bs::sphere_csv(bs::sphere_table(c, max_n, limit, budget), false));
  return 0;
}

int cmd_oracle(const DomainArgs& da, std::size_t max_n, bool words, std::uint64_t max_elements,
               const std::string& out) {
  const auto d = da.resolve();
  bs::OracleOptions opts;
  opts.max_elements = max_elements;
  opts.eps_key = da.tol.key;
  const bs::CayleyOracle oracle(d.generators(), max_n, opts);
  const auto K = oracle.sphere_sizes();
  std::ostringstream csv;
  csv << "n,K_n" << (words ? ",words" : "") << "\n";
  for (std::size_t n = 0; n <= max_n; ++n) {
    csv << n << "," << K[n];
    if (words) {
      csv << ",";
      bool first = true;
      for (const auto& w : oracle.sphere_words(n)) {
        csv << (first ? "" : ";") << d.generators().spell(w);
        first = false;
      }
    }
    csv << "\n";
  }
  emit(out, csv.str());
  return 0;
}

bs::AverageSeries compute_series(const bs::MarkovCoding& c, const std::string& action_path,
                                 const std::string& phi_path, std::size_t N) {
  const auto a = bs::action_from_json(bs::io::read_json_file(action_path), c);
  const Json pj = bs::io::read_json_file(phi_path);
  if (a.kind == bs::ActionKind::finite_permutation) return bs::average_finite(c, a, bs::finite_observable_from_json(pj), N);
  auto obs = bs::torus_observable_from_json(pj);
  if (obs.points.empty()) obs.points = bs::halton_points(a.size, 16);
  return bs::average_torus(c, a, obs.phi, N, obs.points, 1e-9, bs::kDefaultTorusCap, bs::kDefaultEnumerationBudget,
                           thread_cap());
}

int cmd_average(const std::string& path, const std::string& action, const std::string& phi, std::size_t N,
                const std::string& out) {
  const auto c = bs::load_coding(path);
  emit(out, bs::series_csv(compute_series(c, action, phi, N)));
  return 0;
}

// ---------------------------------------------------------------------------
// run

struct RunConfig {
  std::string preset, domain, coding;
  int genus = 2;
  std::string pairing = "commutator";
  std::string label_policy = "paper_default";
  std::vector<std::string> choices;
  bool analyze = false;
  std::size_t horizon = 12;
  std::size_t spheres = 0;
  bool oracle = false;
  std::size_t full_enum_limit = 6;
  std::uint64_t budget = bs::kDefaultEnumerationBudget;
  std::uint64_t oracle_budget = 10'000'000;
  std::string action, phi;
  std::size_t N = 500;
  std::string out_dir = "bs_out";
  bs::Tolerances tol = bs::default_tolerances();
};

// Values from a JSON config file fill every option not given on the command line.
void apply_config(const std::string& path, CLI::App* run, RunConfig& cfg) {
  const Json j = bs::io::read_json_file(path);
  if (!j.is_object()) bs::fail(ErrorKind::invalid_input, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "preset", "domain", "coding", "genus", "pairing", "label_policy", "choices", "analyze", "horizon",
      "spheres", "oracle", "full_enum_limit", "budget", "oracle_budget", "action", "phi", "N", "out_dir",
      "tolerances"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      bs::fail(ErrorKind::invalid_input, "unknown config key '" + it.key() + "'");
  auto unset = [&](const std::string& flag) { return run->count(flag) == 0; };
  try {
    auto take = [&](const char* key, const std::string& flag, auto& field) {
      if (j.contains(key) && unset(flag)) j.at(key).get_to(field);
    };
    take("preset", "--preset", cfg.preset);
    take("domain", "--domain", cfg.domain);
    take("coding", "--coding", cfg.coding);
    take("genus", "--genus", cfg.genus);
    take("pairing", "--pairing", cfg.pairing);
    take("label_policy", "--label-policy", cfg.label_policy);
    take("choices", "--choice", cfg.choices);
    take("analyze", "--analyze", cfg.analyze);
    take("horizon", "--horizon", cfg.horizon);
    take("spheres", "--spheres", cfg.spheres);
    take("oracle", "--oracle", cfg.oracle);
    take("full_enum_limit", "--full-enum-limit", cfg.full_enum_limit);
    take("budget", "--budget", cfg.budget);
    take("oracle_budget", "--oracle-budget", cfg.oracle_budget);
    take("action", "--action", cfg.action);
    take("phi", "--phi", cfg.phi);
    take("N", "--N", cfg.N);
    take("out_dir", "--out-dir", cfg.out_dir);
    if (j.contains("tolerances")) {
      const Json& t = j["tolerances"];
      for (auto it = t.begin(); it != t.end(); ++it) {
        const double v = it.value().get<double>();
        if (!(v > 0)) bs::fail(ErrorKind::invalid_input, "tolerance " + it.key() + " must be positive");
        if (it.key() == "det") cfg.tol.det = v;
        else if (it.key() == "mat") cfg.tol.mat = v;
        else if (it.key() == "boundary") cfg.tol.boundary = v;
        else if (it.key() == "geo") cfg.tol.geo = v;
        else if (it.key() == "point") cfg.tol.point = v;
        else if (it.key() == "key") cfg.tol.key = v;
        else bs::fail(ErrorKind::invalid_input, "unknown tolerance '" + it.key() + "'");
      }
    }
  } catch (const Json::exception& e) {
    bs::fail(ErrorKind::invalid_input, std::string("config: ") + e.what());
  }
}

void check_run_config(const RunConfig& cfg) {
  const int sources = !cfg.preset.empty() + !cfg.domain.empty() + !cfg.coding.empty();
  if (sources != 1) bs::fail(ErrorKind::invalid_input, "give exactly one of --preset, --domain, --coding");
  if (!cfg.preset.empty() && !bs::is_preset_name(cfg.preset))
    bs::fail(ErrorKind::invalid_input, "unknown preset '" + cfg.preset + "'");
  for (const auto* f : {&cfg.domain, &cfg.coding, &cfg.action, &cfg.phi})
    if (!f->empty() && !std::filesystem::exists(*f)) bs::fail(ErrorKind::invalid_input, "no such file: " + *f);
  if (cfg.budget == 0 || cfg.oracle_budget == 0) bs::fail(ErrorKind::invalid_input, "budgets must be positive");
  if (cfg.action.empty() != cfg.phi.empty()) bs::fail(ErrorKind::invalid_input, "--action and --phi go together");
  if (!cfg.action.empty() && cfg.N == 0) bs::fail(ErrorKind::invalid_input, "--N must be positive");
  if (cfg.oracle && !cfg.coding.empty())
    bs::fail(ErrorKind::invalid_input, "--oracle needs a domain or preset, not a coding file");
}

int cmd_run(const RunConfig& cfg) {
  check_run_config(cfg);
  thread_cap();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const auto path = [&](const char* f) { return (fs::path(cfg.out_dir) / f).string(); };

  Json report = Json::object();
  std::vector<std::string> failures;
  std::optional<bs::FundamentalDomain> domain;
  bs::MarkovCoding coding;
  if (!cfg.coding.empty()) {
    coding = bs::load_coding(cfg.coding);
  } else {
    domain = bs::resolve_domain(cfg.preset.empty() ? cfg.domain : cfg.preset, cfg.genus,
                                bs::parse_pairing(cfg.pairing), cfg.tol);
    CodingArgs ca{cfg.label_policy, cfg.choices};
    const auto g = ca.build(*domain);
    coding = g.coding;
    report["markov_check"] = markov_summary(g.markov);
  }
  bs::save_coding(coding, path("coding.json"));

  if (cfg.analyze) report.update(bs::chain_report_to_json(coding, bs::analyze(coding.P, cfg.horizon)));

  if (cfg.spheres > 0 || cfg.oracle) {
    const std::size_t N = cfg.spheres > 0 ? cfg.spheres : 6;
    auto rows = bs::sphere_table(coding, N, cfg.full_enum_limit, cfg.budget);
    if (cfg.oracle) {
      bs::OracleOptions opts;
      opts.max_elements = cfg.oracle_budget;
      opts.eps_key = cfg.tol.key;
      const auto cmp = bs::compare_with_oracle(coding, domain->generators(), N, cfg.budget, opts);
      for (auto& r : rows) {
        r.oracle_K = cmp.oracle_K[r.n];
        if (r.K != bs::BigInt(cmp.oracle_K[r.n]))
          failures.push_back("K_" + std::to_string(r.n) + " differs from the oracle");
      }
      for (const auto& f : cmp.failures) failures.push_back(f);
      report["oracle"] = Json{{"max_n", N}, {"ok", cmp.ok && failures.empty()}, {"failures", cmp.failures}};
    }
    emit(path("spheres.csv"), bs::sphere_csv(rows, cfg.oracle));
  }

  if (!cfg.action.empty()) {
    const auto series = compute_series(coding, cfg.action, cfg.phi, cfg.N);
    emit(path("series.csv"), bs::series_csv(series));
    report["series"] = Json{{"N", cfg.N}, {"final_error", std::stod(bs::fmt12(series.error.back()))}};
  }

  report["invariants_ok"] = failures.empty();
  emit(path("report.json"), report.dump(2) + "\n");
  if (!failures.empty()) {
    std::string msg;
    for (const auto& f : failures) msg += f + "\n";
    throw InvariantFailure(msg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bowen-Series codings of Fuchsian groups"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* domain = app.add_subcommand("domain", "fundamental domains");
  domain->require_subcommand(1);
  DomainArgs verify_args, export_args;
  std::string verify_out, export_out;
  auto* verify = domain->add_subcommand("verify", "check a domain and print its vertex data");
  verify_args.add(verify);
  verify->add_option("-o,--out", verify_out, "report file (default stdout)");
  auto* exporter = domain->add_subcommand("export", "write a domain as a JSON domain file");
  export_args.add(exporter);
  exporter->add_option("-o,--out", export_out, "output file (default stdout)");

  auto* coding = app.add_subcommand("coding", "Markov codings");
  coding->require_subcommand(1);
  DomainArgs build_domain;
  CodingArgs build_args;
  std::string build_out;
  auto* build = coding->add_subcommand("build", "build the coding of a domain");
  build_domain.add(build);
  build_args.add(build);
  build->add_option("-o,--out", build_out, "coding file (default stdout)");

  std::string analyze_path, analyze_out;
  std::size_t analyze_horizon = 12;
  auto* analyze = app.add_subcommand("analyze", "irreducibility analysis of a coding");
  analyze->add_option("coding", analyze_path, "coding JSON file")->required();
  analyze->add_option("--horizon", analyze_horizon, "largest n for the word counts");
  analyze->add_option("-o,--out", analyze_out, "report file (default stdout)");

  std::string spheres_path, spheres_out;
  std::size_t spheres_max = 0, spheres_limit = 6;
  std::uint64_t spheres_budget = bs::kDefaultEnumerationBudget;
  auto* spheres = app.add_subcommand("spheres", "sphere sizes and collisions");
  spheres->add_option("coding", spheres_path, "coding JSON file")->required();
  spheres->add_option("--max-n", spheres_max, "largest word length")->required()->check(CLI::PositiveNumber);
  spheres->add_option("--full-enum-limit", spheres_limit, "enumerate words up to this length");
  spheres->add_option("--budget", spheres_budget, "maximum number of enumerated sequences")->check(CLI::PositiveNumber);
  spheres->add_option("-o,--out", spheres_out, "CSV file (default stdout)");

  DomainArgs oracle_domain;
  std::size_t oracle_max = 0;
  bool oracle_words = false;
  std::uint64_t oracle_budget = 10'000'000;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "breadth-first spheres of the Cayley graph");
  oracle_domain.add(oracle);
  oracle->add_option("--max-n", oracle_max, "largest radius")->required();
  oracle->add_flag("--words", oracle_words, "list the canonical words");
  oracle->add_option("--budget", oracle_budget, "maximum number of group elements")->check(CLI::PositiveNumber);
  oracle->add_option("-o,--out", oracle_out, "CSV file (default stdout)");

  std::string avg_path, avg_action, avg_phi, avg_out;
  std::size_t avg_N = 500;
  auto* average = app.add_subcommand("average", "sphere averages and Cesaro means");
  average->add_option("coding", avg_path, "coding JSON file")->required();
  average->add_option("--action", avg_action, "action JSON file")->required();
  average->add_option("--phi", avg_phi, "observable JSON file")->required();
  average->add_option("--N", avg_N, "number of sphere averages s_0..s_{N-1}")->check(CLI::PositiveNumber);
  average->add_option("--out", avg_out, "CSV file (default stdout)");

  RunConfig cfg;
  std::string config_path;
  auto* run = app.add_subcommand("run", "whole pipeline");
  run->add_option("--config", config_path, "JSON config file; flags take precedence");
  run->add_option("--preset", cfg.preset, "preset domain");
  run->add_option("--domain", cfg.domain, "domain JSON file");
  run->add_option("--coding", cfg.coding, "coding JSON file");
  run->add_option("--genus", cfg.genus, "genus of the surface_4g preset");
  run->add_option("--pairing", cfg.pairing, "surface_4g side pairing");
  run->add_option("--label-policy", cfg.label_policy, "label policy for ambiguous intervals");
  run->add_option("--choice", cfg.choices, "label override NUMBER=LABEL");
  run->add_flag("--analyze", cfg.analyze, "write the irreducibility report");
  run->add_option("--horizon", cfg.horizon, "largest n for the word counts");
  run->add_option("--spheres", cfg.spheres, "sphere table up to this length");
  run->add_flag("--oracle", cfg.oracle, "compare spheres with the Cayley graph");
  run->add_option("--full-enum-limit", cfg.full_enum_limit, "enumerate words up to this length");
  run->add_option("--budget", cfg.budget, "maximum number of enumerated sequences");
  run->add_option("--oracle-budget", cfg.oracle_budget, "maximum number of oracle group elements");
  run->add_option("--action", cfg.action, "action JSON file");
  run->add_option("--phi", cfg.phi, "observable JSON file");
  run->add_option("--N", cfg.N, "number of sphere averages");
  run->add_option("--out-dir", cfg.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_domain_verify(verify_args, verify_out);
    if (exporter->parsed()) return cmd_domain_export(export_args, export_out);
    if (build->parsed()) return cmd_coding_build(build_domain, build_args, build_out);
    if (analyze->parsed()) return cmd_analyze(analyze_path, analyze_horizon, analyze_out);
    if (spheres->parsed()) return cmd_spheres(spheres_path, spheres_max, spheres_limit, spheres_budget, spheres_out);
    if (oracle->parsed()) return cmd_oracle(oracle_domain, oracle_max, oracle_words, oracle_budget, oracle_out);
    if (average->parsed()) return cmd_average(avg_path, avg_action, avg_phi, avg_N, avg_out);
    if (run->parsed()) {
      if (!config_path.empty()) apply_config(config_path, run, cfg);
      return cmd_run(cfg);
    }
  } catch (const bs::Error& e) {
    std::cerr << "bs: " << bs::to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const InvariantFailure& e) {
    std::cerr << "bs: invariant check failed\n" << e.what();
    return kInvariantFailure;
  } catch (const std::exception& e) {
    std::cerr << "bs: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
