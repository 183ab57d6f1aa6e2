#include "json_io.hpp"

#include <fstream>

#include "cwm/csv.hpp"
#include "cwm/errors.hpp"

namespace cwm::cli {

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw ValidationError(what + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(what + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + ": expected a nested array");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ValidationError(what + ": ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = vector_from_json(j[i], what).transpose();
  }
  return m;
}

json to_json(const Hyperparams& h) {
  json j;
  j["G"] = h.G;
  j["mu0"] = to_json(h.mu0);
  j["h"] = h.h;
  j["f"] = h.f;
  j["a_eta"] = h.a_eta;
  j["b_eta"] = h.b_eta;
  j["a_delta"] = h.a_delta;
  j["b_delta"] = to_json(h.b_delta);
  if (h.fixed_delta) j["fixed_delta"] = to_json(*h.fixed_delta);
  return j;
}

json to_json(const McmcConfig& c) {
  json j;
  j["burn_in"] = c.burn_in;
  j["target_ess"] = c.target_ess;
  j["max_iterations"] = c.max_iterations;
  j["thin"] = c.thin;
  j["seed"] = c.seed;
  json mon = json::array();
  for (Monitor m : c.monitor) mon.push_back(monitor_name(m));
  j["monitor"] = mon;
  j["check_every"] = c.check_every;
  return j;
}

json to_json(const UnivariateGmm& m) {
  return json{{"weights", to_json(m.weights)}, {"means", to_json(m.means)}, {"variances", to_json(m.variances)}};
}

UnivariateGmm gmm_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("mixture: expected an object");
  UnivariateGmm m;
  m.weights = vector_from_json(j.at("weights"), "weights");
  m.means = vector_from_json(j.at("means"), "means");
  m.variances = vector_from_json(j.at("variances"), "variances");
  m.validate();
  return m;
}

json to_json(const MixtureSpec& spec) {
  json means = json::array();
  json covs = json::array();
  for (const auto& m : spec.means) means.push_back(to_json(m));
  for (const auto& s : spec.covariances) covs.push_back(to_json(s));
  return json{{"weights", to_json(spec.weights)}, {"means", means}, {"covariances", covs}, {"n", spec.n}};
}

MixtureSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("spec: expected an object");
  MixtureSpec spec;
  spec.weights = vector_from_json(j.at("weights"), "spec.weights");
  for (const auto& m : j.at("means")) spec.means.push_back(vector_from_json(m, "spec.means"));
  for (const auto& s : j.at("covariances")) spec.covariances.push_back(matrix_from_json(s, "spec.covariances"));
  spec.n = j.at("n").get<int>();
  spec.validate();
  return spec;
}

namespace {

int variable_index(const json& v, const std::vector<std::string>& columns) {
  if (v.is_number_integer()) return v.get<int>() - 1;
  const auto name = v.get<std::string>();
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return static_cast<int>(k);
  }
  throw ValidationError("rule references unknown variable '" + name + "'");
}

}  // namespace

json to_json(const MissingnessRule& rule, const std::vector<std::string>& columns) {
  auto name = [&](int v) {
    return v >= 0 && v < static_cast<int>(columns.size()) ? json(columns[static_cast<std::size_t>(v)]) : json(v + 1);
  };
  json j;
  j["kind"] = rule_kind(rule);
  if (const auto* r = std::get_if<McarByCluster>(&rule)) {
    j["rates"] = r->rates;
  } else if (const auto* r = std::get_if<MnarThreshold>(&rule)) {
    j["variable"] = name(r->variable);
    j["cutoff"] = r->cutoff;
    j["rate"] = r->rate;
  } else if (const auto* r = std::get_if<MnarLogistic>(&rule)) {
    j["beta0"] = r->beta0;
    j["beta1"] = r->beta1;
  } else {
    const auto& c = std::get<Censor>(rule);
    j["variable"] = name(c.variable);
    j["cutoff"] = c.cutoff;
    j["cluster"] = c.cluster + 1;
  }
  return j;
}

MissingnessRule rule_from_json(const json& j, const std::vector<std::string>& columns) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "mcar_by_cluster") return McarByCluster{j.at("rates").get<std::vector<double>>()};
    if (kind == "mnar_threshold") {
      return MnarThreshold{variable_index(j.at("variable"), columns), j.at("cutoff").get<double>(),
                           j.at("rate").get<double>()};
    }
    if (kind == "mnar_logistic") return MnarLogistic{j.at("beta0").get<double>(), j.at("beta1").get<double>()};
    if (kind == "censor") {
      return Censor{variable_index(j.at("variable"), columns), j.at("cutoff").get<double>(),
                    j.at("cluster").get<int>() - 1};
    }
    throw ValidationError("unknown missingness rule '" + kind + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("missingness rule: ") + e.what());
  }
}

Scenario scenario_from_json(const json& j) {
  try {
    Scenario s;
    s.name = j.value("name", std::string("custom"));
    if (j.contains("columns")) s.column_names = j.at("columns").get<std::vector<std::string>>();
    if (j.contains("spec")) {
      s.spec = spec_from_json(j.at("spec"));
      if (s.column_names.empty()) {
        for (int k = 1; k < s.spec->p(); ++k) s.column_names.push_back("x" + std::to_string(k));
        s.column_names.push_back("y");
      }
    } else if (!j.value("faithful", false)) {
      throw ValidationError("scenario: needs either a spec or \"faithful\": true");
    } else if (s.column_names.empty()) {
      s.column_names = {"waiting", "eruptions"};
    }
    s.rule = rule_from_json(j.at("rule"), s.column_names);
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario file: ") + e.what());
  }
}

json to_json(const QuantileInterval& q) {
  return json{{"lo", q.lo}, {"hi", q.hi}, {"level", q.level}, {"replications", q.replications}, {"skipped", q.skipped}};
}

QuantileInterval interval_from_json(const json& j) {
  QuantileInterval q;
  q.lo = j.at("lo").get<double>();
  q.hi = j.at("hi").get<double>();
  q.level = j.at("level").get<double>();
  q.replications = j.at("replications").get<int>();
  q.skipped = j.at("skipped").get<int>();
  return q;
}

json state_record(int iteration, const GibbsState& s) {
  json j;
  j["iteration"] = iteration;
  j["log_posterior"] = s.log_posterior;
  j["eta"] = s.eta;
  j["alpha"] = to_json(s.alpha);
  j["nu"] = to_json(s.nu);
  j["delta"] = to_json(s.delta);
  json mu = json::array();
  json sigma = json::array();
  for (const auto& c : s.components) {
    mu.push_back(to_json(c.mu_w));
    sigma.push_back(to_json(c.sigma_w));
  }
  j["mu"] = mu;
  j["sigma"] = sigma;
  json z = json::array();
  for (int v : s.z) z.push_back(v + 1);
  j["z"] = z;
  json zm = json::array();
  for (int v : s.z_mis) zm.push_back(v + 1);
  j["z_mis"] = zm;
  j["y_fill"] = to_json(s.y_fill);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

}  // namespace cwm::cli
