#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cwm/csv.hpp"
#include "cwm/errors.hpp"
#include "cwm/ess.hpp"
#include "cwm/evaluation.hpp"
#include "cwm/scenarios.hpp"

namespace cwm::cli {

namespace fs = std::filesystem;

namespace {

std::string join_path(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

// Faithful has no generating mixture; its reference is a two-component fit
// to the complete eruptions.
UnivariateGmm truth_marginal(const Scenario& scenario, const SimulatedScenario& sim, std::uint64_t seed) {
  if (scenario.spec) return response_marginal(MixtureWeights{scenario.spec->weights}, scenario.spec->components());
  Rng rng(seed, 1);
  return fit_gmm_em(sim.complete_y, GmmFitConfig{}, rng).model;
}

}  // namespace

void cmd_simulate(const SimulateOptions& opt) {
  Scenario scenario;
  if (!opt.spec_file.empty()) {
    scenario = scenario_from_json(read_json_file(opt.spec_file));
  } else if (!opt.scenario.empty()) {
    scenario = builtin_scenario(opt.scenario);
  } else {
    throw ValidationError("simulate: give a scenario name or --config <scenario.json>");
  }
  const SimulatedScenario sim = simulate_scenario(scenario, opt.seed);
  ensure_dir(opt.out);
  write_file_atomic(join_path(opt.out, "data.csv"), dataset_to_csv(sim.data));

  json truth;
  truth["scenario"] = scenario.name;
  truth["seed"] = opt.seed;
  truth["columns"] = sim.data.column_names;
  truth["response"] = sim.data.column_names.back();
  truth["n"] = sim.data.n();
  truth["n_missing"] = sim.data.n_missing();
  truth["spec"] = scenario.spec ? to_json(*scenario.spec) : json(nullptr);
  truth["rule"] = to_json(scenario.rule, sim.data.column_names);
  truth["response_marginal"] = to_json(truth_marginal(scenario, sim, opt.seed));
  truth["response_marginal_fitted"] = !scenario.spec.has_value();
  json labels = json::array();
  for (int g : sim.labels) labels.push_back(g + 1);
  truth["labels"] = labels;
  truth["complete_y"] = to_json(sim.complete_y);
  write_json_file(join_path(opt.out, "truth.json"), truth);
}

namespace {

std::string pick_response(const CsvTable& table, const std::string& requested) {
  if (!requested.empty()) return requested;
  if (table.column_index("y") >= 0) return "y";
  return table.header.back();
}

json lcwm_components_json(const GibbsState& s, int d) {
  json out = json::array();
  const auto occupied = component_counts(s.z, static_cast<int>(s.components.size()));
  for (std::size_t g = 0; g < s.components.size(); ++g) {
    const JointComponent& c = s.components[g];
    json j;
    j["component"] = g + 1;
    j["alpha"] = s.alpha[static_cast<Eigen::Index>(g)];
    j["rows"] = occupied[g];
    j["mu_w"] = to_json(c.mu_w);
    j["sigma_w"] = to_json(c.sigma_w);
    const LcwmComponent l = d > 0 ? fmm_to_lcwm(c) : marginal_only(c);
    j["mu_x"] = to_json(l.mu_x);
    j["sigma_xx"] = to_json(l.sigma_xx);
    j["b0"] = l.b0;
    j["b"] = to_json(l.b);
    j["sigma2"] = l.sigma2;
    out.push_back(std::move(j));
  }
  return out;
}

json chain_diagnostics_json(const Chain& chain, int d) {
  const auto& diag = chain.diagnostics;
  json j;
  json ess;
  for (const auto& e : diag.ess) ess[monitor_name(e.monitor)] = json{{"ess", e.ess}, {"defined", e.defined}};
  j["ess"] = ess;
  j["target_reached"] = diag.target_reached;
  j["sweeps"] = diag.sweeps;
  j["retained"] = chain.retained;
  j["map_index"] = chain.map_index;
  j["map_iteration"] = chain.map_iteration;
  j["map_log_posterior"] = chain.map_state.log_posterior;
  j["alpha_map"] = to_json(chain.map_state.alpha);
  j["components_map"] = lcwm_components_json(chain.map_state, d);
  j["max_occupied_after_burn_in"] = diag.max_occupied_after_burn_in;
  j["saturated"] = diag.saturated;
  j["occupied"] = diag.occupied;
  j["hyper"] = to_json(chain.hyper);
  return j;
}

std::string grid_csv(const MissingDataset& data, const GibbsState& map, int size) {
  const int d = data.d();
  if (d < 1 || d > 2) throw ValidationError("--emit-grid needs one or two inputs");
  const LcwmModel model = LcwmModel::from_joint(MixtureWeights{map.alpha}, map.components);
  std::vector<Vector> axes;
  for (int j = 0; j < d; ++j) {
    const double m = data.X.col(j).mean();
    const double sd = std::sqrt((data.X.col(j).array() - m).square().sum() / std::max(1, data.n() - 1));
    axes.push_back(Vector::LinSpaced(size, m - 3 * sd, m + 3 * sd));
  }
  std::string out;
  for (int j = 0; j < d; ++j) out += data.column_names[static_cast<std::size_t>(j)] + ",";
  const int G = model.size();
  for (int g = 0; g < G; ++g) out += "alpha_" + std::to_string(g + 1) + (g + 1 < G ? "," : "\n");
  auto emit = [&](const Vector& x) {
    for (int j = 0; j < d; ++j) out += format_double(x[j]) + ",";
    const Vector p = posterior_z_given_x(x, model);
    for (int g = 0; g < G; ++g) out += format_double(p[g]) + (g + 1 < G ? "," : "\n");
  };
  Vector x(d);
  for (int a = 0; a < size; ++a) {
    x[0] = axes[0][a];
    if (d == 1) {
      emit(x);
      continue;
    }
    for (int b = 0; b < size; ++b) {
      x[1] = axes[1][b];
      emit(x);
    }
  }
  return out;
}

}  // namespace

void cmd_impute(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.data.empty()) throw ValidationError("impute: --data is required");
  const CsvTable table = read_csv(cfg.data);
  const std::string response = pick_response(table, cfg.response);
  MissingDataset data = dataset_from_table(table, response, cfg.inputs);
  ensure_dir(cfg.out);

  json diag;
  diag["method"] = method_name(cfg.method);
  diag["data"] = fs::path(cfg.data).filename().string();
  diag["response"] = response;
  json inputs = json::array();
  for (int j = 0; j < data.d(); ++j) inputs.push_back(data.column_names[static_cast<std::size_t>(j)]);
  diag["inputs"] = inputs;
  diag["n"] = data.n();
  diag["n_missing"] = data.n_missing();
  diag["seed"] = cfg.mcmc.seed;

  ImputeResult result;
  if (cfg.method == Method::Norm || cfg.method == Method::Pmm) {
    Rng rng(cfg.mcmc.seed);
    if (cfg.method == Method::Norm) {
      result = impute_norm(data, rng);
    } else {
      PmmConfig pc;
      if (cfg.donors) pc.donors = *cfg.donors;
      result = impute_pmm(data, pc, rng);
      diag["donors"] = pc.donors;
    }
  } else {
    const std::string chain_path = join_path(cfg.out, "chain.jsonl");
    const std::string chain_tmp = chain_path + ".tmp";
    std::ofstream chain_out;
    StateSink sink;
    if (cfg.emit_chain) {
      chain_out.open(chain_tmp, std::ios::trunc);
      if (!chain_out) throw IoError("cannot write " + chain_tmp);
      json header;
      header["schema"] = "cwm-chain";
      header["version"] = kChainSchemaVersion;
      header["method"] = method_name(cfg.method);
      header["columns"] = cfg.method == Method::Mean ? json::array({response}) : json(data.column_names);
      header["n"] = data.n();
      header["n_missing"] = data.n_missing();
      header["G"] = cfg.hyper.G.value_or(10);
      header["fields"] = {"iteration", "log_posterior", "eta", "alpha", "nu", "delta", "mu", "sigma", "z", "z_mis", "y_fill"};
      chain_out << header.dump() << '\n';
      sink = [&](int iteration, const GibbsState& s) { chain_out << state_record(iteration, s).dump() << '\n'; };
    }
    ChainImputation ci = cfg.method == Method::Cwm ? impute_cwm(data, cfg.hyper, cfg.mcmc, sink)
                                                   : impute_mean(data, cfg.hyper, cfg.mcmc, sink);
    if (cfg.emit_chain) {
      chain_out.close();
      if (!chain_out) throw IoError("error writing " + chain_tmp);
      std::error_code ec;
      fs::rename(chain_tmp, chain_path, ec);
      if (ec) throw IoError("cannot rename " + chain_tmp + ": " + ec.message());
    }
    const int d = cfg.method == Method::Mean ? 0 : data.d();
    diag["mcmc"] = to_json(cfg.mcmc);
    diag["chain"] = chain_diagnostics_json(ci.chain, d);
    if (cfg.emit_grid) {
      write_file_atomic(join_path(cfg.out, "grid.csv"), grid_csv(data, ci.chain.map_state, cfg.grid_size));
    }
    result = std::move(ci.result);
  }
  diag["warnings"] = result.warnings;
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  // original cells are copied verbatim
  std::ostringstream csv;
  for (const auto& h : table.header) csv << h << ',';
  csv << response << "_imputed,source,component\n";
  for (int i = 0; i < data.n(); ++i) {
    for (const auto& cell : table.cells[static_cast<std::size_t>(i)]) csv << cell << ',';
    const bool missing = data.mask[static_cast<std::size_t>(i)];
    csv << format_double(result.y_completed[i]) << ',' << (missing ? "imputed" : "observed") << ',';
    if (result.labels.empty()) {
      csv << "NA";
    } else {
      csv << result.labels[static_cast<std::size_t>(i)] + 1;
    }
    csv << '\n';
  }
  write_file_atomic(join_path(cfg.out, "imputed.csv"), csv.str());
  write_json_file(join_path(cfg.out, "diagnostics.json"), diag);
}

namespace {

struct EvalInput {
  std::string label;
  std::string path;
};

EvalInput split_input(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0) return {arg.substr(0, eq), arg.substr(eq + 1)};
  const fs::path p(arg);
  const std::string parent = p.parent_path().filename().string();
  return {parent.empty() ? p.stem().string() : parent, arg};
}

// Values of the response to fit: the imputed column when present, else the
// non-missing response cells.
Vector values_for_fit(const CsvTable& table, const std::string& response, const std::string& fit_on,
                      std::string& source) {
  const int imputed = table.column_index(response + "_imputed");
  std::vector<double> out;
  if (imputed >= 0) {
    const int src = table.column_index("source");
    const auto col = table.numeric_column(imputed);
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (!col[i]) throw ValidationError(table.context + ": NA in imputed column");
      if (fit_on == "imputed" && (src < 0 || table.cells[i][static_cast<std::size_t>(src)] != "imputed")) continue;
      out.push_back(*col[i]);
    }
    source = fit_on == "imputed" ? "imputed-only" : "completed";
  } else {
    const int iy = table.column_index(response);
    if (iy < 0) throw ValidationError(table.context + ": no column '" + response + "'");
    for (const auto& v : table.numeric_column(iy)) {
      if (v) out.push_back(*v);
    }
    source = static_cast<std::size_t>(out.size()) == table.rows() ? "complete" : "observed";
  }
  return Eigen::Map<const Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

bool cmd_evaluate(const EvaluateOptions& opt) {
  if (opt.truth.empty()) throw ValidationError("evaluate: --truth is required");
  if (opt.inputs.empty()) throw ValidationError("evaluate: no input files");
  if (opt.fit_on != "completed" && opt.fit_on != "imputed") throw ValidationError("--fit-on must be completed or imputed");
  const json truth_json = read_json_file(opt.truth);
  UnivariateGmm truth;
  std::string response;
  int n = 0;
  try {
    truth = gmm_from_json(truth_json.at("response_marginal"));
    response = truth_json.at("response").get<std::string>();
    n = truth_json.at("n").get<int>();
  } catch (const json::exception& e) {
    throw ValidationError(opt.truth + ": " + e.what());
  }
  GmmFitConfig fit;
  fit.components = truth.size();
  ensure_dir(opt.out);

  json key;
  key["response_marginal"] = to_json(truth);
  key["n"] = n;
  key["replications"] = opt.replications;
  key["level"] = opt.level;
  key["seed"] = opt.seed;
  key["components"] = fit.components;
  const std::string cache = opt.interval_cache.empty() ? join_path(opt.out, "interval.json") : opt.interval_cache;
  QuantileInterval interval;
  bool cached = false;
  if (fs::exists(cache)) {
    const json c = read_json_file(cache);
    if (c.contains("key") && c["key"] == key) {
      interval = interval_from_json(c.at("interval"));
      cached = true;
    }
  }
  if (!cached) {
    interval = kl_quantile_interval(truth, n, opt.replications, opt.level, fit, Rng(opt.seed));
    write_json_file(cache, json{{"key", key}, {"interval", to_json(interval)}});
  }

  json rows = json::array();
  std::ostringstream csv;
  csv << "method,source,kl,lo,hi,relative_distance\n";
  bool ok = true;
  std::uint64_t k = 0;
  for (const auto& arg : opt.inputs) {
    const EvalInput in = split_input(arg);
    json row;
    row["method"] = in.label;
    row["file"] = in.path;
    try {
      std::string source;
      const Vector values = values_for_fit(read_csv(in.path), response, opt.fit_on, source);
      Rng rng(opt.seed, 1000 + k);
      const KlReport r = evaluate_values(in.label, values, truth, interval, fit, rng);
      row["source"] = source;
      row["n_values"] = values.size();
      row["kl"] = r.kl;
      row["interval"] = {interval.lo, interval.hi};
      row["within"] = r.distance.within;
      row["relative_distance"] = r.distance.within ? json("WI") : json(*r.distance.ratio);
      row["fit"] = to_json(r.fit);
      csv << in.label << ',' << source << ',' << format_double(r.kl) << ',' << format_double(interval.lo) << ','
          << format_double(interval.hi) << ',' << (r.distance.within ? "WI" : format_double(*r.distance.ratio)) << '\n';
    } catch (const Error& e) {
      ok = false;
      row["error"] = e.what();
      std::cerr << "error: " << in.path << ": " << e.what() << '\n';
      csv << in.label << ",,NA," << format_double(interval.lo) << ',' << format_double(interval.hi) << ",NA\n";
    }
    rows.push_back(std::move(row));
    ++k;
  }
  json report;
  report["truth"] = opt.truth;
  report["fit_on"] = opt.fit_on;
  report["interval"] = to_json(interval);
  report["rows"] = rows;
  write_json_file(join_path(opt.out, "report.json"), report);
  write_file_atomic(join_path(opt.out, "report.csv"), csv.str());
  return ok;
}

std::vector<std::string> cmd_diagnose(const DiagnoseOptions& opt) {
  if (opt.chain.empty()) throw ValidationError("diagnose: chain file required");
  std::ifstream in(opt.chain);
  if (!in) throw IoError("cannot open " + opt.chain);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(opt.chain + ": empty chain file");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(opt.chain + ": bad header: " + e.what());
  }
  if (header.value("schema", std::string()) != "cwm-chain") throw ValidationError(opt.chain + ": not a chain file");
  if (header.value("version", -1) != kChainSchemaVersion) {
    throw ValidationError(opt.chain + ": chain schema version " + header.value("version", json(-1)).dump() +
                          " is not supported (expected " + std::to_string(kChainSchemaVersion) + ")");
  }
  const int n_missing = header.value("n_missing", 0);

  std::vector<int> iterations;
  std::vector<double> lp;
  std::vector<double> mean_imp;
  std::vector<int> occupied;
  int G = header.value("G", 0);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json r = json::parse(line);
      iterations.push_back(r.at("iteration").get<int>());
      lp.push_back(r.at("log_posterior").get<double>());
      const auto fill = r.at("y_fill").get<std::vector<double>>();
      double m = 0.0;
      for (double v : fill) m += v;
      mean_imp.push_back(fill.empty() ? 0.0 : m / static_cast<double>(fill.size()));
      const auto z = r.at("z").get<std::vector<int>>();
      occupied.push_back(static_cast<int>(std::set<int>(z.begin(), z.end()).size()));
      G = static_cast<int>(r.at("alpha").size());
    } catch (const json::exception& e) {
      throw ValidationError(opt.chain + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (iterations.empty()) throw ValidationError(opt.chain + ": chain has no records");

  ensure_dir(opt.out);
  std::ostringstream trace;
  trace << "iteration,log_posterior,mean_imputed,occupied\n";
  for (std::size_t s = 0; s < iterations.size(); ++s) {
    trace << iterations[s] << ',' << format_double(lp[s]) << ',' << format_double(mean_imp[s]) << ',' << occupied[s]
          << '\n';
  }
  write_file_atomic(join_path(opt.out, "trace.csv"), trace.str());

  std::vector<std::string> warnings;
  json ess;
  auto add_ess = [&](const std::string& name, const std::vector<double>& series) {
    if (series.size() < 10) {
      ess[name] = json{{"ess", nullptr}, {"defined", false}};
      warnings.push_back(name + ": fewer than 10 records, ESS not computed");
      return;
    }
    const EssResult r = effective_sample_size(series);
    ess[name] = json{{"ess", r.ess}, {"defined", r.defined}};
  };
  add_ess("log_posterior", lp);
  if (n_missing > 0) add_ess("mean_imputed", mean_imp);

  std::map<int, int> hist;
  for (int k : occupied) ++hist[k];
  json histogram = json::object();
  for (const auto& [k, c] : hist) histogram[std::to_string(k)] = c;
  const int max_occ = *std::max_element(occupied.begin(), occupied.end());
  if (G > 0 && max_occ >= G) {
    warnings.push_back("occupied components reached G = " + std::to_string(G) + "; consider increasing G");
  }

  json report;
  report["chain"] = opt.chain;
  report["records"] = iterations.size();
  report["ess"] = ess;
  report["occupancy_histogram"] = histogram;
  report["max_occupied"] = max_occ;
  report["G"] = G;
  report["warnings"] = warnings;
  write_json_file(join_path(opt.out, "diagnose.json"), report);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return warnings;
}

int run(int argc, char** argv) {
  CLI::App app{"Imputation of a missing response with a Bayesian linear cluster-weighted model", "cwm-impute"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "generate a scenario dataset (data.csv, truth.json)");
  simulate->add_option("scenario,--scenario", sim.scenario, "builtin scenario name");
  simulate->add_option("--config", sim.spec_file, "scenario JSON file");
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--out", sim.out, "output directory");

  RunConfig rc;
  std::string config_file;
  std::string method;
  std::optional<int> burn_in;
  std::optional<double> target_ess;
  std::optional<int> max_iterations;
  std::optional<int> thin;
  std::optional<int> components;
  std::optional<int> donors;
  std::optional<std::uint64_t> impute_seed;
  std::optional<std::string> data;
  std::optional<std::string> out;
  std::optional<std::string> response;
  std::vector<std::string> inputs;
  bool emit_chain = false;
  bool emit_grid = false;
  auto* impute = app.add_subcommand("impute", "impute the missing responses of a CSV file");
  impute->add_option("--config", config_file, "run configuration JSON");
  impute->add_option("--data", data, "input CSV (NA marks a missing response)");
  impute->add_option("--out", out, "output directory");
  impute->add_option("--method", method, "cwm, norm, mean or pmm");
  impute->add_option("--seed", impute_seed, "random seed");
  impute->add_option("--burn-in", burn_in, "burn-in sweeps");
  impute->add_option("--target-ess", target_ess, "ESS required of every monitor");
  impute->add_option("--max-iterations", max_iterations, "cap on retained-phase sweeps");
  impute->add_option("--thin", thin, "keep every k-th sweep");
  impute->add_option("--components", components, "truncation level G");
  impute->add_option("--donors", donors, "pmm donor pool size");
  impute->add_option("--response", response, "response column (default y, else the last column)");
  impute->add_option("--inputs", inputs, "covariate columns (default: all others)")->delimiter(',');
  impute->add_flag("--emit-chain", emit_chain, "write chain.jsonl");
  impute->add_flag("--emit-grid", emit_grid, "write grid.csv of p(Z | x) at the MAP state");

  EvaluateOptions ev;
  std::vector<std::string> ev_data;
  auto* evaluate = app.add_subcommand("evaluate", "KL divergence of completed variables against the truth");
  evaluate->add_option("--truth", ev.truth, "truth.json from simulate")->required();
  evaluate->add_option("--data", ev_data, "imputed CSV files (label=path allowed)");
  evaluate->add_option("files", ev.inputs, "imputed CSV files (label=path allowed)");
  evaluate->add_option("--replications", ev.replications, "replications for the reference interval");
  evaluate->add_option("--level", ev.level, "interval level");
  evaluate->add_option("--seed", ev.seed, "random seed");
  evaluate->add_option("--out", ev.out, "output directory");
  evaluate->add_option("--fit-on", ev.fit_on, "completed or imputed");
  evaluate->add_option("--interval-cache", ev.interval_cache, "interval cache file");

  DiagnoseOptions dg;
  auto* diagnose = app.add_subcommand("diagnose", "traces, ESS and occupancy of a chain.jsonl file");
  diagnose->add_option("chain,--data", dg.chain, "chain.jsonl");
  diagnose->add_option("--out", dg.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      cmd_simulate(sim);
    } else if (impute->parsed()) {
      if (!config_file.empty()) apply_config(read_json_file(config_file), rc);
      if (!method.empty()) rc.method = parse_method(method);
      if (impute_seed) rc.mcmc.seed = *impute_seed;
      if (burn_in) rc.mcmc.burn_in = *burn_in;
      if (target_ess) rc.mcmc.target_ess = *target_ess;
      if (max_iterations) rc.mcmc.max_iterations = *max_iterations;
      if (thin) rc.mcmc.thin = *thin;
      if (components) rc.hyper.G = *components;
      if (donors) rc.donors = *donors;
      if (data) rc.data = *data;
      if (out) rc.out = *out;
      if (response) rc.response = *response;
      if (!inputs.empty()) rc.inputs = inputs;
      rc.emit_chain = rc.emit_chain || emit_chain;
      rc.emit_grid = rc.emit_grid || emit_grid;
      cmd_impute(rc);
    } else if (evaluate->parsed()) {
      ev.inputs.insert(ev.inputs.begin(), ev_data.begin(), ev_data.end());
      if (!cmd_evaluate(ev)) return 3;
    } else if (diagnose->parsed()) {
      cmd_diagnose(dg);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cwm::cli
