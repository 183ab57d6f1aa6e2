// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
// Scenario criteria drive the cwm-impute executable; the rest call the
// library directly. Exit status is 0 once every criterion has been
// evaluated (failures are reported, not fatal); a harness error exits 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cwm/baselines.hpp"
#include "cwm/csv.hpp"
#include "cwm/errors.hpp"
#include "cwm/ess.hpp"
#include "cwm/gibbs.hpp"
#include "cwm/kl.hpp"
#include "cwm/model.hpp"
#include "json_io.hpp"

using namespace cwm;
using cwm::cli::json;
namespace fs = std::filesystem;

namespace {

fs::path work;
std::set<int> only;
int failures = 0;
// copy of the verdict lines; ctest hides stdout of passing tests
std::ofstream results;

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void report(int id, const std::function<Result()>& body) {
  if (!only.empty() && !only.count(id)) return;
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.pass) ++failures;
  const std::string line = "criterion " + std::to_string(id) + ": " + (r.pass ? "PASS" : "FAIL") + "  " + r.detail +
                           " [" + fmt("%.1f", secs) + " s]";
  std::cout << line << std::endl;
  results << line << std::endl;
}

// Runs cwm-impute; throws when the exit code differs from `expect`.
void cli(const std::string& args, int expect = 0) {
  const std::string cmd = std::string("\"") + CWM_IMPUTE_EXE + "\" " + args + " 2>>\"" +
                          (work / "cli_stderr.log").string() + "\"";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code != expect) throw std::runtime_error("`cwm-impute " + args + "` exited " + std::to_string(code));
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Simulated once per scenario and seed, shared across criteria.
fs::path simulated(const std::string& scenario) {
  const fs::path dir = work / ("sim-" + scenario);
  if (!fs::exists(dir / "truth.json")) cli("simulate " + scenario + " --seed 1 --out " + q(dir));
  return dir;
}

fs::path imputed(const std::string& scenario, const std::string& tag, const std::string& args) {
  const fs::path dir = work / (scenario + "-" + tag);
  if (!fs::exists(dir / "imputed.csv")) {
    cli("impute --data " + q(simulated(scenario) / "data.csv") + " --seed 1 " + args + " --out " + q(dir));
  }
  return dir;
}

// True cluster (0-based) of each MAP component: the cluster whose response
// mean is closest to the component's response mean.
std::vector<int> component_clusters(const json& truth, const json& diagnostics) {
  std::vector<double> cluster_y;
  for (const auto& m : truth.at("spec").at("means")) cluster_y.push_back(m.back().get<double>());
  std::vector<int> out;
  for (const auto& c : diagnostics.at("chain").at("components_map")) {
    const double y = c.at("mu_w").back().get<double>();
    int best = 0;
    for (std::size_t k = 1; k < cluster_y.size(); ++k) {
      if (std::abs(cluster_y[k] - y) < std::abs(cluster_y[static_cast<std::size_t>(best)] - y)) best = static_cast<int>(k);
    }
    out.push_back(best);
  }
  return out;
}

struct ClusterSummary {
  std::vector<double> alpha;
  std::vector<int> imputed;
  int n_imputed = 0;
};

ClusterSummary summarize(const fs::path& sim, const fs::path& run) {
  const json truth = cli::read_json_file((sim / "truth.json").string());
  const json diag = cli::read_json_file((run / "diagnostics.json").string());
  const auto map = component_clusters(truth, diag);
  const std::size_t K = truth.at("spec").at("means").size();
  ClusterSummary s;
  s.alpha.assign(K, 0.0);
  s.imputed.assign(K, 0);
  const auto& alpha = diag.at("chain").at("alpha_map");
  for (std::size_t g = 0; g < map.size(); ++g) s.alpha[static_cast<std::size_t>(map[g])] += alpha[g].get<double>();
  const CsvTable t = read_csv((run / "imputed.csv").string());
  const int src = t.column_index("source");
  const int comp = t.column_index("component");
  for (const auto& row : t.cells) {
    if (row[static_cast<std::size_t>(src)] != "imputed") continue;
    ++s.n_imputed;
    ++s.imputed[static_cast<std::size_t>(map[static_cast<std::size_t>(std::stoi(row[static_cast<std::size_t>(comp)]) - 1)])];
  }
  return s;
}

// label -> report row
std::map<std::string, json> evaluate(const std::string& scenario, const std::vector<std::string>& inputs) {
  const fs::path sim = simulated(scenario);
  const fs::path out = work / (scenario + "-eval");
  std::string args = "evaluate --truth " + q(sim / "truth.json") + " --replications 1000 --seed 1 --out " + q(out);
  for (const auto& in : inputs) args += " \"" + in + "\"";
  cli(args);
  std::map<std::string, json> rows;
  const json report = cli::read_json_file((out / "report.json").string());
  for (const auto& r : report.at("rows")) {
    rows[r.at("method").get<std::string>()] = r;
  }
  return rows;
}

double kl_of(const json& row) { return row.at("kl").get<double>(); }
bool within(const json& row) { return row.at("within").get<bool>(); }
double ratio(const json& row) {
  return within(row) ? 0.0 : row.at("relative_distance").get<double>();
}

std::string kl_line(const std::map<std::string, json>& rows, const std::vector<std::string>& order) {
  std::string s;
  for (const auto& m : order) {
    const json& r = rows.at(m);
    s += m + "=" + fmt("%.4f", kl_of(r)) + (within(r) ? "(WI) " : "(" + fmt("%.1f", ratio(r)) + "x) ");
  }
  return s;
}

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

// ---------------------------------------------------------------------------

Result equivalence() {
  Rng rng(1);
  double worst_density = 0.0;
  double worst_resp = 0.0;
  for (int d = 1; d <= 4; ++d) {
    const int p = d + 1;
    const int G = 3;
    std::vector<JointComponent> comps;
    MixtureWeights w{Vector(G)};
    for (int g = 0; g < G; ++g) {
      Matrix a(p, p);
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) a(i, j) = rng.normal();
      }
      Vector mu(p);
      for (int j = 0; j < p; ++j) mu[j] = 3.0 * rng.normal();
      comps.push_back({mu, a * a.transpose() + 0.5 * Matrix::Identity(p, p)});
      w.alpha[g] = 0.2 + rng.uniform();
    }
    w.alpha /= w.alpha.sum();
    const LcwmModel m = LcwmModel::from_joint(w, comps);
    for (int k = 0; k < 2500; ++k) {
      Vector wv(p);
      for (int j = 0; j < p; ++j) wv[j] = 4.0 * rng.normal();
      const Vector x = wv.head(d);
      const double y = wv[d];
      worst_density = std::max(worst_density, std::abs(lcwm_joint_logdensity(x, y, m) -
                                                       joint_mixture_logdensity(wv, w, comps)));
      worst_resp = std::max(worst_resp, (posterior_z_given_xy(x, y, m) - joint_responsibilities(wv, w, comps))
                                            .cwiseAbs()
                                            .maxCoeff());
    }
  }
  return {worst_density < 1e-10 && worst_resp < 1e-12,
          "10000 points, d = 1..4: max |log density diff| " + fmt("%.2e", worst_density) +
              ", max responsibility diff " + fmt("%.2e", worst_resp)};
}

Result conjugacy() {
  Rng rng(2);
  bool ok = true;
  std::string detail;
  for (int p : {1, 2}) {
    const int n = 20;
    MissingDataset data;
    data.X.resize(n, p - 1);
    data.y.resize(n);
    data.mask.assign(n, false);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p - 1; ++j) data.X(i, j) = 1.0 + rng.normal();
      data.y[i] = 2.0 + (p > 1 ? 0.8 * data.X(i, 0) : 0.0) + 0.5 * rng.normal();
    }
    HyperOverrides o;
    o.G = 1;
    o.mu0 = Vector::Constant(p, 0.5);
    o.h = 0.7;
    o.f = p + 3.0;
    o.fixed_delta = Vector::LinSpaced(p, 0.8, 1.5);
    GibbsSampler sampler(data, o, 3);
    const int sweeps = 100000;
    const int m = p + p * (p + 1) / 2;
    Vector sum = Vector::Zero(m);
    Vector sq = Vector::Zero(m);
    for (int s = 0; s < sweeps; ++s) {
      sampler.sweep();
      const auto& c = sampler.state().components[0];
      Vector v(m);
      int k = 0;
      for (int j = 0; j < p; ++j) v[k++] = c.mu_w[j];
      for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) v[k++] = c.sigma_w(i, j);
      }
      sum += v;
      sq += v.cwiseProduct(v);
    }
    const Matrix W = sampler.completed();
    const Vector xbar = W.colwise().mean().transpose();
    const Matrix centered = W.rowwise() - xbar.transpose();
    const Vector diff = xbar - *o.mu0;
    const double kn = *o.h + n;
    const Matrix psi = Matrix(o.fixed_delta->asDiagonal()) + centered.transpose() * centered +
                       (*o.h * n / kn) * diff * diff.transpose();
    const Vector mean_mu = (*o.h * *o.mu0 + n * xbar) / kn;
    const Matrix mean_sigma = psi / (*o.f + n - p - 1);
    Vector expected(m);
    int k = 0;
    for (int j = 0; j < p; ++j) expected[k++] = mean_mu[j];
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) expected[k++] = mean_sigma(i, j);
    }
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
      const double mean = sum[j] / sweeps;
      const double se = std::sqrt((sq[j] / sweeps - mean * mean) / sweeps);
      worst = std::max(worst, std::abs(mean - expected[j]) / se);
    }
    ok = ok && worst < 3.0;
    detail += "p=" + std::to_string(p) + ": worst |error| " + fmt("%.2f", worst) + " s.e.; ";
  }
  return {ok, detail + "100000 sweeps each"};
}

Result scenario1() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path run = imputed("paper-mar", "x1", "--inputs x1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const ClusterSummary s = summarize(simulated("paper-mar"), run);
  const double p1 = double(s.imputed[0]) / s.n_imputed;
  const bool ok = near(s.alpha[0], 0.418, 0.07) && near(s.alpha[1], 0.582, 0.07) && near(p1, 0.409, 0.07) &&
                  near(1 - p1, 0.591, 0.07) && secs < 900;
  return {ok, "alpha by true cluster (" + fmt("%.3f", s.alpha[0]) + ", " + fmt("%.3f", s.alpha[1]) +
                  "), imputed share (" + fmt("%.3f", p1) + ", " + fmt("%.3f", 1 - p1) + ") of " +
                  std::to_string(s.n_imputed) + " rows, run " + fmt("%.0f", secs) + " s"};
}

std::map<std::string, json> mar_report() {
  const fs::path sim = simulated("paper-mar");
  return evaluate("paper-mar", {"obs=" + (sim / "data.csv").string(),
                                "cwm-x1=" + (imputed("paper-mar", "x1", "--inputs x1") / "imputed.csv").string(),
                                "cwm-x2=" + (imputed("paper-mar", "x2", "--inputs x2") / "imputed.csv").string(),
                                "cwm-x1x2=" + (imputed("paper-mar", "x1x2", "") / "imputed.csv").string()});
}

Result scenario2() {
  const ClusterSummary s = summarize(simulated("paper-mar"), imputed("paper-mar", "x2", "--inputs x2"));
  const double p1 = double(s.imputed[0]) / s.n_imputed;
  const auto rows = mar_report();
  const bool ok = near(p1, 0.86, 0.05) && within(rows.at("cwm-x2")) && within(rows.at("cwm-x1x2"));
  return {ok, "imputed share by true cluster (" + fmt("%.3f", p1) + ", " + fmt("%.3f", 1 - p1) + "), alpha (" +
                  fmt("%.3f", s.alpha[0]) + ", " + fmt("%.3f", s.alpha[1]) + "); interval hi " +
                  fmt("%.4f", rows.at("cwm-x2").at("interval")[1].get<double>()) + "; " +
                  kl_line(rows, {"cwm-x2", "cwm-x1x2"})};
}

Result scenario1_kl() {
  const auto rows = mar_report();
  const bool ok = ratio(rows.at("cwm-x1")) > 5 && ratio(rows.at("obs")) > 5;
  return {ok, kl_line(rows, {"cwm-x1", "obs"})};
}

Result mnar_threshold() {
  const fs::path sim = simulated("paper-mnar-threshold");
  const ClusterSummary x2 = summarize(sim, imputed("paper-mnar-threshold", "x2", "--inputs x2"));
  const ClusterSummary x1 = summarize(sim, imputed("paper-mnar-threshold", "x1", "--inputs x1"));
  const double share = double(x2.imputed[0]) / x2.n_imputed;
  const bool ok = share >= 0.95 && std::abs(x1.imputed[0] - 39) <= 10 && std::abs(x1.imputed[1] - 36) <= 10;
  return {ok, "X2: " + fmt("%.3f", share) + " of " + std::to_string(x2.n_imputed) +
                  " imputed rows in cluster 1; X1: counts (" + std::to_string(x1.imputed[0]) + ", " +
                  std::to_string(x1.imputed[1]) + ")"};
}

Result censored() {
  const auto rows = evaluate(
      "paper-censored", {"cwm=" + (imputed("paper-censored", "cwm", "") / "imputed.csv").string(),
                         "pmm=" + (imputed("paper-censored", "pmm", "--method pmm") / "imputed.csv").string(),
                         "norm=" + (imputed("paper-censored", "norm", "--method norm") / "imputed.csv").string()});
  const double c = kl_of(rows.at("cwm"));
  const double p = kl_of(rows.at("pmm"));
  const double n = kl_of(rows.at("norm"));
  const bool ok = c < p && p < n && within(rows.at("cwm")) && !within(rows.at("pmm")) && !within(rows.at("norm"));
  return {ok, kl_line(rows, {"cwm", "pmm", "norm"})};
}

Result faithful() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path sim = simulated("faithful-mnar");
  const json truth = cli::read_json_file((sim / "truth.json").string());
  double mean = 0.0;
  double var = 0.0;
  for (const auto& y : truth.at("complete_y")) {
    const double theta = 1.0 / (1.0 + std::exp(-(-4.23 + 1.02 * y.get<double>())));
    mean += theta;
    var += theta * (1 - theta);
  }
  const int missing = truth.at("n_missing").get<int>();
  const double half = 2.5758 * std::sqrt(var);
  const bool in_band = std::abs(missing - mean) <= half;
  const auto rows =
      evaluate("faithful-mnar", {"cwm=" + (imputed("faithful-mnar", "cwm", "") / "imputed.csv").string(),
                                 "pmm=" + (imputed("faithful-mnar", "pmm", "--method pmm") / "imputed.csv").string(),
                                 "obs=" + (sim / "data.csv").string(),
                                 "mean=" + (imputed("faithful-mnar", "mean", "--method mean") / "imputed.csv").string(),
                                 "norm=" + (imputed("faithful-mnar", "norm", "--method norm") / "imputed.csv").string()});
  const std::vector<std::string> order{"cwm", "pmm", "obs", "mean", "norm"};
  bool ordered = true;
  for (std::size_t k = 1; k < order.size(); ++k) ordered = ordered && kl_of(rows.at(order[k - 1])) < kl_of(rows.at(order[k]));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {in_band && ordered && secs < 600,
          std::to_string(missing) + " missing (99% band " + fmt("%.1f", mean - half) + ".." + fmt("%.1f", mean + half) +
              "); " + kl_line(rows, order)};
}

Result kl_engine() {
  Rng rng(9);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double m1 = 5 * rng.normal();
    const double m2 = 5 * rng.normal();
    const double v1 = std::exp(1.5 * rng.normal());
    const double v2 = std::exp(1.5 * rng.normal());
    const double exact = 0.5 * (std::log(v2 / v1) + (v1 + (m1 - m2) * (m1 - m2)) / v2 - 1.0);
    const UnivariateGmm f{Vector::Ones(1), Vector::Constant(1, m1), Vector::Constant(1, v1)};
    const UnivariateGmm g{Vector::Ones(1), Vector::Constant(1, m2), Vector::Constant(1, v2)};
    worst = std::max(worst, std::abs(kl_divergence(f, g) - exact));
  }
  double self = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    auto random_gmm = [&] {
      const double w = 0.1 + 0.8 * rng.uniform();
      return UnivariateGmm{Vector{{w, 1 - w}}, Vector{{3 * rng.normal(), 3 * rng.normal()}},
                           Vector{{std::exp(rng.normal()), std::exp(rng.normal())}}};
    };
    const UnivariateGmm f = random_gmm();
    const UnivariateGmm g = random_gmm();
    self = std::max(self, std::abs(kl_divergence(f, f)));
    lowest = std::min(lowest, kl_divergence(f, g));
  }
  return {worst < 1e-6 && self < 1e-8 && lowest >= -1e-8,
          "closed-form max error " + fmt("%.2e", worst) + ", max KL(f,f) " + fmt("%.2e", self) + ", min KL " +
              fmt("%.2e", lowest)};
}

Result baselines() {
  Rng rng(10);
  long checked = 0;
  bool donors_ok = true;
  for (int rep = 0; rep < 200; ++rep) {
    MissingDataset data;
    const int n = 30 + static_cast<int>(rng.index(200));
    const int d = 1 + static_cast<int>(rng.index(3));
    data.X.resize(n, d);
    data.y.resize(n);
    data.mask.assign(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) data.X(i, j) = rng.normal();
      data.y[i] = data.X.row(i).sum() + rng.normal();
      data.mask[static_cast<std::size_t>(i)] = rng.uniform() < 0.3;
    }
    data.mask[0] = true;
    for (int i = 1; i < d + 4; ++i) data.mask[static_cast<std::size_t>(i)] = false;
    std::set<double> observed;
    for (int i : data.observed_rows()) observed.insert(data.y[i]);
    const ImputeResult r = impute_pmm(data, PmmConfig{1 + static_cast<int>(rng.index(8))}, rng);
    for (Eigen::Index k = 0; k < r.y_fill.size(); ++k, ++checked) donors_ok = donors_ok && observed.count(r.y_fill[k]);
  }
  // pmm outputs of the scenario runs
  for (const auto& run : {work / "paper-censored-pmm", work / "faithful-mnar-pmm"}) {
    if (!fs::exists(run / "imputed.csv")) continue;
    const CsvTable t = read_csv((run / "imputed.csv").string());
    const std::string response = t.header[t.header.size() - 4];
    const int y = t.column_index(response);
    const int yi = t.column_index(response + "_imputed");
    std::set<std::string> observed;
    for (const auto& row : t.cells) {
      if (row[static_cast<std::size_t>(y)] != "NA") observed.insert(format_double(std::stod(row[static_cast<std::size_t>(y)])));
    }
    for (const auto& row : t.cells) {
      if (row[static_cast<std::size_t>(y)] == "NA") {
        donors_ok = donors_ok && observed.count(row[static_cast<std::size_t>(yi)]);
        ++checked;
      }
    }
  }

  MissingDataset line;
  const int n = 500;
  line.X.resize(n, 1);
  line.y.resize(n);
  line.mask.assign(n, false);
  for (int i = 0; i < n; ++i) {
    line.X(i, 0) = -3.0 + 6.0 * rng.uniform();
    line.y[i] = 2.0 + 3.0 * line.X(i, 0);
    line.mask[static_cast<std::size_t>(i)] = i % 4 == 0;
  }
  const ImputeResult r = impute_norm(line, rng);
  double worst = 0.0;
  const auto mis = line.missing_rows();
  for (std::size_t k = 0; k < mis.size(); ++k) {
    worst = std::max(worst, std::abs(r.y_fill[static_cast<Eigen::Index>(k)] - (2.0 + 3.0 * line.X(mis[k], 0))));
  }
  return {donors_ok && worst <= 0.1, std::to_string(checked) + " pmm imputations checked (" +
                                         (donors_ok ? "all" : "not all") + " observed values); norm max deviation " +
                                         fmt("%.2e", worst)};
}

Result diagnostics() {
  bool ok = true;
  std::string detail = "ESS/analytic:";
  const int n = 100000;
  for (double rho : {0.3, 0.5, 0.9}) {
    Rng rng(12);
    std::vector<double> x(n);
    double v = rng.normal() / std::sqrt(1 - rho * rho);
    for (auto& e : x) {
      v = rho * v + rng.normal();
      e = v;
    }
    const double r = effective_sample_size(x).ess / (n * (1 - rho) / (1 + rho));
    ok = ok && std::abs(r - 1) <= 0.1;
    detail += " " + fmt("%.3f", r);
  }
  int worst = 0;
  std::string runs;
  for (const char* tag : {"x2", "x1", "x1x2"}) {
    const fs::path run = work / (std::string("paper-mar-") + tag);
    if (!fs::exists(run / "diagnostics.json")) continue;
    const json chain = cli::read_json_file((run / "diagnostics.json").string()).at("chain");
    const int m = chain.at("max_occupied_after_burn_in").get<int>();
    worst = std::max(worst, m);
    runs += std::string(" ") + tag + "=" + std::to_string(m);
  }
  if (runs.empty()) {
    fs::path run = imputed("paper-mar", "x2", "--inputs x2");
    worst = cli::read_json_file((run / "diagnostics.json").string()).at("chain").at("max_occupied_after_burn_in");
    runs = " x2=" + std::to_string(worst);
  }
  ok = ok && worst <= 2;
  return {ok, detail + "; max occupied after burn-in:" + runs};
}

Result determinism() {
  const fs::path a = imputed("paper-mar", "x1", "--inputs x1");
  const fs::path b = imputed("paper-mar", "x1-repeat", "--inputs x1");
  const bool csv = slurp(a / "imputed.csv") == slurp(b / "imputed.csv");
  const bool diag = slurp(a / "diagnostics.json") == slurp(b / "diagnostics.json");
  return {csv && diag, std::string("imputed.csv ") + (csv ? "identical" : "differs") + ", diagnostics.json " +
                           (diag ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  work = fs::current_path() / "acceptance_work";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream s(argv[++i]);
      std::string item;
      while (std::getline(s, item, ',')) only.insert(std::stoi(item));
    } else if (a == "--fresh") {
      fs::remove_all(work);
    } else {
      std::cerr << "usage: acceptance [--work-dir DIR] [--only 1,2,...] [--fresh]\n";
      return 1;
    }
  }
  fs::create_directories(work);
  std::cout << "work directory: " << work.string() << std::endl;
  results.open(work / "results.txt");

  report(1, equivalence);
  report(2, conjugacy);
  report(3, scenario1);
  report(4, scenario2);
  report(5, scenario1_kl);
  report(6, mnar_threshold);
  report(7, censored);
  report(8, faithful);
  report(9, kl_engine);
  report(10, baselines);
  report(11, diagnostics);
  report(12, determinism);

  const std::string summary = failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed";
  std::cout << summary << std::endl;
  results << summary << std::endl;
  return 0;
}
