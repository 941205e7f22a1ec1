// scma — command-line front end for the codebook design / analysis pipeline.
//
// Exit codes: 0 success, 2 config error, 3 codebook schema error,
// 4 enumeration budget refusal.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "scma/codebook_io.hpp"
#include "scma/optimize.hpp"
#include "scma/pnmetrics.hpp"
#include "scma/sim.hpp"
#include "toml_lite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSchema = 3;
constexpr int kExitBudget = 4;

struct CommonOpts {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Every subcommand drops exactly one manifest.json into its output
/// directory; digests cover all inputs and outputs except the manifest.
void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const CommonOpts& opts, std::uint64_t effective_seed,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
  json m;
  m["tool"] = "scma";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["timestamp"] = iso_now();
  m["seed"] = effective_seed;
  m["workers"] = opts.workers;
  if (!opts.config.empty()) {
    m["config"]["path"] = opts.config;
    m["config"]["text"] = slurp(opts.config);
  }
  auto digest_list = [](const std::vector<fs::path>& files) {
    json arr = json::array();
    for (const fs::path& f : files)
      arr.push_back({{"path", f.string()}, {"sha256", sha256_file(f)}});
    return arr;
  };
  m["inputs"] = digest_list(inputs);
  m["outputs"] = digest_list(outputs);
  std::ofstream(out_dir / "manifest.json") << m.dump(2) << '\n';
}

scma::FactorGraph graph_from_config(const std::string& spec) {
  if (spec == "4x6") return scma::FactorGraph::preset_4x6();
  if (spec == "5x10") return scma::FactorGraph::preset_5x10();
  // Anything else is a JSON file: {"K":..,"J":..,"incidence":[K*J ints],
  // "slots":[K*J ints]} with slots optional.
  std::ifstream in(spec);
  if (!in) throw std::runtime_error("graph '" + spec + "' is not a preset or readable file");
  json g = json::parse(in);
  const int K = g.at("K").get<int>();
  const int J = g.at("J").get<int>();
  std::vector<std::uint8_t> inc;
  for (const auto& v : g.at("incidence")) inc.push_back(v.get<int>() ? 1 : 0);
  scma::FactorGraph fg(K, J, std::move(inc));
  if (g.contains("slots")) fg.set_slots(g.at("slots").get<std::vector<int>>());
  return fg;
}

json design_space_json(const scma::DesignSpace& x) {
  return {{"theta", x.theta}, {"energy", x.energy}, {"alpha", x.alpha}};
}

scma::MpnmOptions report_options(const toml_lite::Table& cfg, const std::string& prefix,
                                 std::uint64_t codewords) {
  scma::MpnmOptions opt;
  const std::string mode = toml_lite::get_string(cfg, prefix + ".mode", "auto");
  opt.q = static_cast<int>(toml_lite::get_int(cfg, prefix + ".q", 2));
  opt.samples = static_cast<std::uint64_t>(toml_lite::get_int(cfg, prefix + ".samples", 200000));
  if (mode == "exact") {
    opt.mode = scma::MpnmOptions::Mode::exact;
  } else if (mode == "pruned") {
    opt.mode = scma::MpnmOptions::Mode::pruned;
  } else if (mode == "auto") {
    opt.mode = codewords * (codewords - 1) <= opt.max_exact_pairs
                   ? scma::MpnmOptions::Mode::exact
                   : scma::MpnmOptions::Mode::pruned;
  } else {
    throw std::runtime_error("unknown enumeration mode '" + mode + "'");
  }
  return opt;
}

int cmd_design(const CommonOpts& opts) {
  const toml_lite::Table cfg = toml_lite::parse_file(opts.config);

  scma::DesignProblem pb;
  pb.fg = graph_from_config(toml_lite::get_string(cfg, "design.graph", "4x6"));
  pb.M = static_cast<int>(toml_lite::require(cfg, "design.M").as_int());
  pb.T = static_cast<int>(toml_lite::require(cfg, "design.T").as_int());
  pb.alpha_max = toml_lite::get_double(cfg, "design.alpha_max", 4.0);

  scma::OptimizerConfig oc;
  oc.objective.sigma_p2 = toml_lite::require(cfg, "objective.sigma_p2").as_double();
  oc.objective.eb_n0_db = toml_lite::get_double(cfg, "objective.eb_n0_db", 14.0);
  oc.objective.q = static_cast<int>(toml_lite::get_int(cfg, "objective.q", 0));
  const std::string strategy = toml_lite::get_string(cfg, "search.strategy", "de");
  if (strategy == "de")
    oc.strategy = scma::OptimizerConfig::Strategy::differential_evolution;
  else if (strategy == "multistart")
    oc.strategy = scma::OptimizerConfig::Strategy::multistart_local;
  else
    throw std::runtime_error("unknown search.strategy '" + strategy + "'");
  oc.population = static_cast<int>(toml_lite::get_int(cfg, "search.population", 24));
  oc.max_evaluations =
      static_cast<std::uint64_t>(toml_lite::get_int(cfg, "search.max_evaluations", 10000));
  oc.polish_fraction = toml_lite::get_double(cfg, "search.polish_fraction", 0.25);
  oc.rng_seed = opts.seed ? *opts.seed
                          : static_cast<std::uint64_t>(toml_lite::get_int(cfg, "search.seed", 1));
  std::uint64_t cw = 1;
  for (int j = 0; j < pb.fg.J(); ++j) cw *= pb.M;
  oc.report = report_options(cfg, "report", cw);

  const std::string name = toml_lite::get_string(cfg, "design.name", "design");

  scma::OptimizeResult res = scma::optimize(oc, pb);
  res.codebooks.name = name;

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  const fs::path cb_path = out_dir / (name + ".json");
  const fs::path trace_path = out_dir / (name + ".trace.csv");
  const fs::path report_path = out_dir / (name + ".report.json");

  scma::save_codebook(res.codebooks, cb_path.string());
  {
    std::ofstream tr(trace_path);
    tr << "evaluation,best_mpnm\n";
    for (const auto& tp : res.trace) tr << tp.evaluation << ',' << tp.best << '\n';
  }
  {
    json rj;
    rj["design"] = design_space_json(res.best);
    rj["objective"] = res.best_objective;
    rj["evaluations"] = res.evaluations;
    rj["report"] = scma::metric_report_to_json(res.report);
    std::ofstream(report_path) << rj.dump(2) << '\n';
  }
  write_manifest(out_dir, "design", opts, oc.rng_seed, {fs::path(opts.config)},
                 {cb_path, trace_path, report_path});
  std::cout << name << ": MPNM " << res.report.mpnm << " (" << res.report.mode << "), MED "
            << res.report.med << ", " << res.evaluations << " evaluations\n";
  return kExitOk;
}

int cmd_metrics(const CommonOpts& opts) {
  const toml_lite::Table cfg = toml_lite::parse_file(opts.config);
  const std::string cb_file = toml_lite::require(cfg, "metrics.codebook").as_string();
  const std::vector<double> sigmas = toml_lite::get_doubles(cfg, "metrics.sigma_p2", {0.0});
  const std::vector<double> ebn0s = toml_lite::get_doubles(cfg, "metrics.eb_n0_db", {10.0});

  const scma::CodebookSet cbs = scma::load_codebook(cb_file);
  const scma::MpnmOptions opt = report_options(cfg, "metrics", cbs.codeword_count());

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / "metrics.csv";
  const fs::path json_path = out_dir / "metrics.json";

  std::ofstream csv(csv_path);
  csv << "codebook,sigma_p2,eb_n0_db,mpnm,med,union_bound,mode,pairs_enumerated\n";
  json rows = json::array();
  for (double sp2 : sigmas) {
    for (double db : ebn0s) {
      const scma::PnChannelParams p = scma::params_from_ebn0(cbs, sp2, db);
      const scma::MetricReport r = scma::mpnm(cbs, p, opt);
      csv << cbs.name << ',' << sp2 << ',' << db << ',' << r.mpnm << ',' << r.med << ','
          << r.pep_bound << ',' << r.mode << ',' << r.pairs_enumerated << '\n';
      rows.push_back(scma::metric_report_to_json(r));
    }
  }
  csv.close();
  std::ofstream(json_path) << json{{"codebook", cbs.name}, {"rows", rows}}.dump(2) << '\n';
  write_manifest(out_dir, "metrics", opts, 0, {fs::path(opts.config), fs::path(cb_file)},
                 {csv_path, json_path});
  std::cout << "wrote " << csv_path.string() << " (" << rows.size() << " rows)\n";
  return kExitOk;
}

int cmd_simulate(const CommonOpts& opts) {
  const toml_lite::Table cfg = toml_lite::parse_file(opts.config);
  const std::vector<std::string> cb_files = toml_lite::get_strings(cfg, "simulate.codebooks");
  if (cb_files.empty()) throw std::runtime_error("simulate.codebooks must list at least one file");
  const std::vector<std::string> det_names =
      toml_lite::get_strings(cfg, "simulate.detectors", {"ml-euclidean"});
  const std::vector<double> ebn0s = toml_lite::get_doubles(cfg, "simulate.eb_n0_db", {10.0});
  const std::vector<double> sigmas = toml_lite::get_doubles(cfg, "simulate.sigma_p2", {0.0});

  scma::SimConfig sim;
  sim.stop.min_errors =
      static_cast<std::uint64_t>(toml_lite::get_int(cfg, "simulate.min_errors", 400));
  sim.stop.max_bits =
      static_cast<std::uint64_t>(toml_lite::get_int(cfg, "simulate.max_bits", 20000000));
  sim.mpa_iterations = static_cast<int>(toml_lite::get_int(cfg, "simulate.mpa_iterations", 8));
  sim.rng_seed = opts.seed ? *opts.seed
                           : static_cast<std::uint64_t>(toml_lite::get_int(cfg, "simulate.seed", 1));
  sim.workers = opts.workers;

  std::vector<scma::CodebookSet> books;
  for (const std::string& f : cb_files) books.push_back(scma::load_codebook(f));

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / "results.csv";
  std::ofstream csv(csv_path);
  csv << "codebook,detector,sigma_p2,eb_n0_db,seed,frames,bits,bit_errors,ber,ber_ci95,"
         "ser,w_ser,censored\n";

  bool any_censored = false;
  // The channel seed is shared across codebooks so each (detector, sigma,
  // Eb/N0) row is a paired comparison.
  for (const scma::CodebookSet& cbs : books) {
    for (const std::string& dn : det_names) {
      sim.detector = scma::detector_from_name(dn);
      for (double sp2 : sigmas) {
        for (double db : ebn0s) {
          const scma::PnChannelParams p = scma::params_from_ebn0(cbs, sp2, db);
          const scma::SimResult r = scma::run_ber(cbs, p, sim);
          csv << cbs.name << ',' << dn << ',' << sp2 << ',' << db << ',' << sim.rng_seed << ','
              << r.frames << ',' << r.bits_simulated << ',' << r.bit_errors << ',' << r.ber
              << ',' << r.ber_ci95 << ',' << r.ser << ',' << r.w_ser << ','
              << (r.censored ? 1 : 0) << '\n';
          any_censored |= r.censored;
          std::cout << cbs.name << ' ' << dn << " sigma_p2=" << sp2 << " EbN0=" << db
                    << "dB: BER " << r.ber << " (" << r.bit_errors << '/' << r.bits_simulated
                    << (r.censored ? ", censored" : "") << ")\n";
        }
      }
    }
  }
  csv.close();
  std::vector<fs::path> inputs{fs::path(opts.config)};
  for (const std::string& f : cb_files) inputs.emplace_back(f);
  write_manifest(out_dir, "simulate", opts, sim.rng_seed, inputs, {csv_path});
  if (any_censored) std::cout << "note: some estimates are censored (zero errors at budget)\n";
  return kExitOk;
}

int cmd_validate(const std::vector<std::string>& files) {
  for (const std::string& f : files) {
    const scma::CodebookSet cbs = scma::load_codebook(f);
    std::cout << f << ": ok (" << cbs.K() << 'x' << cbs.J() << ", M=" << cbs.M << ", \""
              << cbs.name << "\")\n";
  }
  return kExitOk;
}

// Re-slices a results.csv from `simulate` into one file per
// (codebook, detector, sigma_p2) series with columns eb_n0_db, ber, ci.
int cmd_export_plotdata(const std::string& results, const CommonOpts& opts) {
  std::ifstream in(results);
  if (!in) throw std::runtime_error("cannot read " + results);
  std::string header;
  std::getline(in, header);
  if (header.rfind("codebook,detector,sigma_p2,eb_n0_db,", 0) != 0)
    throw std::runtime_error(results + ": not a scma results.csv");

  struct Row {
    std::string key;
    double ebn0, ber, ci;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    if (cols.size() < 13) throw std::runtime_error(results + ": malformed row: " + line);
    rows.push_back({cols[0] + "_" + cols[1] + "_sp" + cols[2], std::stod(cols[3]),
                    std::stod(cols[8]), std::stod(cols[9])});
  }

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  std::vector<fs::path> outputs;
  std::map<std::string, std::vector<const Row*>> series;
  for (const Row& r : rows) series[r.key].push_back(&r);
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end(),
              [](const Row* a, const Row* b) { return a->ebn0 < b->ebn0; });
    const fs::path p = out_dir / ("plot_" + key + ".csv");
    std::ofstream f(p);
    f << "eb_n0_db,ber,ber_ci95\n";
    for (const Row* r : pts) f << r->ebn0 << ',' << r->ber << ',' << r->ci << '\n';
    outputs.push_back(p);
  }
  CommonOpts mo = opts;
  write_manifest(out_dir, "export-plotdata", mo, 0, {fs::path(results)}, outputs);
  std::cout << "wrote " << outputs.size() << " series\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SCMA phase-noise-resilient codebook toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOpts opts;
  std::vector<std::string> validate_files;
  std::string results_csv;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config, "TOML config file");
    if (needs_config) c->required();
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--seed", [&](const std::vector<std::string>& v) {
      opts.seed = std::stoull(v[0]);
      return true;
    }, "override the config RNG seed");
    sub->add_option("--workers", opts.workers, "worker thread cap");
  };

  CLI::App* design = app.add_subcommand("design", "optimize a codebook design");
  add_common(design, true);
  CLI::App* metrics = app.add_subcommand("metrics", "score a codebook file");
  add_common(metrics, true);
  CLI::App* simulate = app.add_subcommand("simulate", "run a BER/SER sweep");
  add_common(simulate, true);
  CLI::App* validate = app.add_subcommand("validate", "schema-check codebook files");
  validate->add_option("files", validate_files, "codebook JSON files")->required();
  CLI::App* plot = app.add_subcommand("export-plotdata", "slice results.csv into plot series");
  plot->add_option("results", results_csv, "results.csv from simulate")->required();
  plot->add_option("--out", opts.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) return cmd_design(opts);
    if (metrics->parsed()) return cmd_metrics(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (validate->parsed()) return cmd_validate(validate_files);
    if (plot->parsed()) return cmd_export_plotdata(results_csv, opts);
  } catch (const scma::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const scma::EnumerationBudgetError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitBudget;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
