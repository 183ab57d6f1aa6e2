#include "cwm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cwm/csv.hpp"
#include "cwm/distributions.hpp"
#include "cwm/errors.hpp"

namespace cwm {

namespace {

// FNV-1a 64 of data/faithful.csv
constexpr std::uint64_t kFaithfulChecksum = 0x5ad8ecf3807f57e9ULL;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Matrix sym3(double d0, double d1, double d2, double o01, double o02, double o12) {
  Matrix m(3, 3);
  m << d0, o01, o02, o01, d1, o12, o02, o12, d2;
  return m;
}

}  // namespace

void MixtureSpec::validate() const {
  const auto G = static_cast<std::size_t>(weights.size());
  if (G == 0) throw ValidationError("mixture spec: no components");
  if (means.size() != G || covariances.size() != G) {
    throw ValidationError("mixture spec: weights, means and covariances differ in length");
  }
  if (n < 1) throw ValidationError("mixture spec: n must be positive");
  MixtureWeights{weights}.validate();
  const int dim = p();
  if (dim < 1) throw ValidationError("mixture spec: empty mean vector");
  for (const auto& c : components()) {
    if (c.mu_w.size() != dim) throw ValidationError("mixture spec: mean vectors differ in length");
    c.validate();
  }
}

std::vector<JointComponent> MixtureSpec::components() const {
  std::vector<JointComponent> out;
  for (std::size_t g = 0; g < means.size(); ++g) out.push_back({means[g], covariances[g]});
  return out;
}

std::string rule_kind(const MissingnessRule& rule) {
  switch (rule.index()) {
    case 0:
      return "mcar_by_cluster";
    case 1:
      return "mnar_threshold";
    case 2:
      return "mnar_logistic";
    default:
      return "censor";
  }
}

GeneratedData gen_mixture_dataset(const MixtureSpec& spec, Rng& rng) {
  spec.validate();
  const int p = spec.p();
  const int d = p - 1;
  std::vector<CholFactor> factors;
  for (const auto& s : spec.covariances) factors.push_back(CholFactor::of(s));

  GeneratedData out;
  out.data.X.resize(spec.n, d);
  out.data.y.resize(spec.n);
  out.data.mask.assign(static_cast<std::size_t>(spec.n), false);
  out.labels.resize(static_cast<std::size_t>(spec.n));
  const std::span<const double> w(spec.weights.data(), static_cast<std::size_t>(spec.weights.size()));
  for (int i = 0; i < spec.n; ++i) {
    const auto g = sample_categorical(w, rng);
    out.labels[static_cast<std::size_t>(i)] = static_cast<int>(g);
    const Vector row = sample_mvn(spec.means[g], factors[g], rng);
    out.data.X.row(i) = row.head(d).transpose();
    out.data.y[i] = row[d];
  }
  for (int j = 0; j < d; ++j) out.data.column_names.push_back("x" + std::to_string(j + 1));
  out.data.column_names.push_back("y");
  return out;
}

namespace {

double variable_value(const MissingDataset& data, int variable, int i) {
  if (variable < 0 || variable > data.d()) throw ValidationError("missingness rule: variable index out of range");
  return variable == data.d() ? data.y[i] : data.X(i, variable);
}

void require_labels(const MissingDataset& data, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != data.n()) {
    throw ValidationError("missingness rule needs true cluster labels for every row");
  }
}

}  // namespace

MissingDataset apply_missingness(const MissingDataset& data, const std::vector<int>& labels,
                                 const MissingnessRule& rule, Rng& rng) {
  data.validate();
  MissingDataset out = data;
  out.mask.assign(static_cast<std::size_t>(data.n()), false);
  const int n = data.n();

  if (const auto* r = std::get_if<McarByCluster>(&rule)) {
    require_labels(data, labels);
    for (double rate : r->rates) {
      if (!(rate >= 0.0 && rate <= 1.0)) throw ValidationError("mcar_by_cluster: rates must lie in [0, 1]");
    }
    for (int i = 0; i < n; ++i) {
      const auto g = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
      if (g >= r->rates.size()) throw ValidationError("mcar_by_cluster: no rate for cluster " + std::to_string(g + 1));
      out.mask[static_cast<std::size_t>(i)] = rng.uniform() < r->rates[g];
    }
  } else if (const auto* r = std::get_if<MnarThreshold>(&rule)) {
    if (!(r->rate >= 0.0 && r->rate <= 1.0)) throw ValidationError("mnar_threshold: rate must lie in [0, 1]");
    std::vector<int> above;
    for (int i = 0; i < n; ++i) {
      if (variable_value(data, r->variable, i) > r->cutoff) above.push_back(i);
    }
    const auto take = static_cast<std::size_t>(std::llround(r->rate * static_cast<double>(above.size())));
    // partial Fisher-Yates
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t j = k + rng.index(above.size() - k);
      std::swap(above[k], above[j]);
      out.mask[static_cast<std::size_t>(above[k])] = true;
    }
  } else if (const auto* r = std::get_if<MnarLogistic>(&rule)) {
    if (!std::isfinite(r->beta0) || !std::isfinite(r->beta1)) throw ValidationError("mnar_logistic: non-finite coefficients");
    for (int i = 0; i < n; ++i) {
      const double theta = 1.0 / (1.0 + std::exp(-(r->beta0 + r->beta1 * data.y[i])));
      out.mask[static_cast<std::size_t>(i)] = rng.uniform() < theta;
    }
  } else {
    const auto& c = std::get<Censor>(rule);
    require_labels(data, labels);
    const int G = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    if (c.cluster < 0 || c.cluster >= G) throw ValidationError("censor: cluster " + std::to_string(c.cluster + 1) + " does not occur");
    for (int i = 0; i < n; ++i) {
      out.mask[static_cast<std::size_t>(i)] =
          labels[static_cast<std::size_t>(i)] == c.cluster && variable_value(data, c.variable, i) > c.cutoff;
    }
  }
  return out;
}

std::string default_faithful_path() { return std::string(CWM_DATA_DIR) + "/faithful.csv"; }

MissingDataset load_faithful(const std::string& path) {
  const std::string file = path.empty() ? default_faithful_path() : path;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  if (fnv1a64(bytes) != kFaithfulChecksum) throw IoError(file + ": checksum mismatch (data file altered)");

  const CsvTable table = parse_csv(bytes, file);
  MissingDataset data = dataset_from_table(table, "eruptions", {"waiting"});
  if (data.n_missing() > 0) throw IoError(file + ": unexpected NA");
  data.column_names = {"waiting", "eruptions"};
  data.validate();
  return data;
}

std::vector<std::string> builtin_scenario_names() {
  return {"paper-mar", "paper-mnar-threshold", "paper-censored", "faithful-mnar"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "paper-mar" || name == "paper-mnar-threshold") {
    MixtureSpec spec;
    spec.weights = Vector{{0.6, 0.4}};
    spec.means = {Vector{{1.0, 9.0, 7.0}}, Vector{{1.0, 3.0, 3.0}}};
    spec.covariances = {sym3(1, 1, 1, 0.5, 0.5, 0.5), sym3(1, 1, 1, 0.5, -0.5, -0.5)};
    spec.n = 1000;
    s.spec = spec;
    s.column_names = {"x1", "x2", "y"};
    if (name == "paper-mar") {
      s.rule = McarByCluster{{0.5, 0.1}};
    } else {
      s.rule = MnarThreshold{2, 6.5, 0.2};
    }
  } else if (name == "paper-censored") {
    MixtureSpec spec;
    spec.weights = Vector{{0.6, 0.4}};
    spec.means = {Vector{{4.0, 10.0}}, Vector{{7.0, 4.0}}};
    Matrix s1(2, 2);
    s1 << 0.5, 0.35, 0.35, 0.5;
    Matrix s2(2, 2);
    s2 << 0.5, -0.64, -0.64, 1.0;
    spec.covariances = {s1, s2};
    spec.n = 1000;
    s.spec = spec;
    s.column_names = {"x", "y"};
    s.rule = Censor{0, 5.0, 1};
  } else if (name == "faithful-mnar") {
    s.column_names = {"waiting", "eruptions"};
    s.rule = MnarLogistic{-4.23, 1.02};
  } else {
    std::string known;
    for (const auto& k : builtin_scenario_names()) known += " " + k;
    throw ValidationError("unknown scenario '" + name + "' (known:" + known + ")");
  }
  return s;
}

SimulatedScenario simulate_scenario(const Scenario& scenario, std::uint64_t seed) {
  Rng rng(seed);
  SimulatedScenario out;
  MissingDataset complete;
  if (scenario.spec) {
    GeneratedData g = gen_mixture_dataset(*scenario.spec, rng);
    complete = std::move(g.data);
    out.labels = std::move(g.labels);
  } else {
    complete = load_faithful();
  }
  if (!scenario.column_names.empty()) {
    if (static_cast<int>(scenario.column_names.size()) != complete.p()) {
      throw ValidationError("scenario: column_names must have p entries");
    }
    complete.column_names = scenario.column_names;
  }
  out.complete_y = complete.y;
  out.data = apply_missingness(complete, out.labels, scenario.rule, rng);
  return out;
}

}  // namespace cwm
