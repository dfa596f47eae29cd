/*
Copyright 2026 The gbnlearn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "gbnlearn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "gbnlearn/error.hpp"
#include "gbnlearn/io.hpp"
#include "gbnlearn/stats.hpp"
#include "json.hpp"

namespace gbnlearn::bench {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

void reject_unknown_keys(const json& object, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) config_error(std::string(where) + " must be an object");
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      config_error("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
T required(const json& object, const char* key, std::string_view where) {
  if (!object.contains(key)) config_error(std::string(where) + " is missing '" + key + "'");
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
T optional_or(const json& object, const char* key, T fallback, std::string_view where) {
  if (!object.contains(key)) return fallback;
  return required<T>(object, key, where);
}

GraphSpec parse_graph(const json& j) {
  reject_unknown_keys(j, "graph", {"type", "n", "d"});
  GraphSpec g;
  const auto type = required<std::string>(j, "type", "graph");
  g.n = required<std::size_t>(j, "n", "graph");
  if (type == "tree") {
    g.family = GraphSpec::Family::Tree;
    if (j.contains("d")) config_error("graph.d applies to type 'er' only");
    g.expected_degree = 1.0;
  } else if (type == "er") {
    g.family = GraphSpec::Family::ErdosRenyi;
    g.expected_degree = required<double>(j, "d", "graph");
  } else {
    config_error("graph.type must be 'tree' or 'er', got '" + type + "'");
  }
  return g;
}

VarianceSpec parse_variance(const json& j) {
  reject_unknown_keys(j, "variance", {"type", "lo", "hi"});
  const auto type = required<std::string>(j, "type", "variance");
  if (type == "unit") {
    if (j.contains("lo") || j.contains("hi")) config_error("variance 'unit' takes no bounds");
    return VarianceSpec::unit();
  }
  if (type == "uniform") {
    return VarianceSpec::uniform_range(required<double>(j, "lo", "variance"), required<double>(j, "hi", "variance"));
  }
  config_error("variance.type must be 'unit' or 'uniform', got '" + type + "'");
}

Scenario parse_scenario(const json& j) {
  Scenario s;
  if (!j.is_object()) config_error("scenario must be an object");
  const auto type = required<std::string>(j, "type", "scenario");
  if (type == "clean") {
    reject_unknown_keys(j, "scenario", {"type"});
    s.kind = Scenario::Kind::Clean;
  } else if (type == "contaminated") {
    reject_unknown_keys(j, "scenario", {"type", "sample_fraction", "node_count", "noise", "location", "scale"});
    s.kind = Scenario::Kind::Contaminated;
    auto& c = s.contamination;
    c.sample_fraction = optional_or<double>(j, "sample_fraction", 0.05, "scenario");
    c.node_count = optional_or<std::size_t>(j, "node_count", 5, "scenario");
    const auto noise = optional_or<std::string>(j, "noise", "gaussian", "scenario");
    if (noise == "gaussian") {
      c.noise_law = NoiseLaw::Gaussian;
    } else if (noise == "cauchy") {
      c.noise_law = NoiseLaw::Cauchy;
    } else {
      config_error("scenario.noise must be 'gaussian' or 'cauchy'");
    }
    c.location = optional_or<double>(j, "location", 1000.0, "scenario");
    c.scale = optional_or<double>(j, "scale", 1.0, "scenario");
  } else if (type == "ill_conditioned") {
    reject_unknown_keys(j, "scenario", {"type", "nodes", "node_count", "variance"});
    s.kind = Scenario::Kind::IllConditioned;
    s.ill_nodes = optional_or<std::vector<NodeId>>(j, "nodes", {}, "scenario");
    s.ill_node_count = optional_or<std::size_t>(j, "node_count", 3, "scenario");
    if (!s.ill_nodes.empty() && j.contains("node_count")) {
      config_error("scenario takes either 'nodes' or 'node_count', not both");
    }
    s.ill_variance = optional_or<double>(j, "variance", 1e-20, "scenario");
  } else if (type == "agnostic") {
    reject_unknown_keys(j, "scenario", {"type", "remove_edges"});
    s.kind = Scenario::Kind::Agnostic;
    s.removed_edges = required<std::size_t>(j, "remove_edges", "scenario");
  } else {
    config_error("scenario.type must be one of clean, contaminated, ill_conditioned, agnostic");
  }
  return s;
}

MethodSpec parse_method(const json& j) {
  reject_unknown_keys(j, "methods[]", {"name", "method", "batch_extra", "split_fraction", "variance_method"});
  MethodSpec spec;
  const auto method = required<std::string>(j, "method", "methods[]");
  const auto parsed = parse_coefficient_method(method);
  if (!parsed) config_error("unknown method '" + method + "'");
  spec.fit.method = *parsed;
  spec.fit.batch_extra = optional_or<std::size_t>(j, "batch_extra", 20, "methods[]");
  spec.fit.split_fraction = optional_or<double>(j, "split_fraction", 0.5, "methods[]");
  const auto variance = required<std::string>(j, "variance_method", "methods[]");
  const auto vm = parse_variance_method(variance);
  if (!vm) config_error("variance_method must be 'empirical' or 'mad', got '" + variance + "'");
  spec.fit.variance_method = *vm;

  std::string fallback(to_string(spec.fit.method));
  if (spec.fit.method == CoefficientMethod::BatchAvg || spec.fit.method == CoefficientMethod::BatchMed) {
    fallback += "+" + std::to_string(spec.fit.batch_extra);
  }
  spec.name = optional_or<std::string>(j, "name", fallback, "methods[]");
  return spec;
}

std::string scenario_label(Scenario::Kind kind) {
  switch (kind) {
    case Scenario::Kind::Clean: return "clean";
    case Scenario::Kind::Contaminated: return "contaminated";
    case Scenario::Kind::IllConditioned: return "ill_conditioned";
    case Scenario::Kind::Agnostic: return "agnostic";
  }
  return "unknown";
}

std::string csv_optional(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

// Seed streams within one repetition.
enum Stream : std::uint64_t {
  kGraphStream = 1,
  kModelStream = 2,
  kSampleStream = 3,
  kContaminationStream = 4,
  kIllNodeStream = 5,
  kAgnosticStream = 6,
};

}  // namespace

void ExperimentConfig::validate() const {
  if (graph.n < 2 && graph.family == GraphSpec::Family::Tree) config_error("tree graphs need n >= 2");
  if (graph.n < 1) config_error("graph.n must be positive");
  if (graph.family == GraphSpec::Family::ErdosRenyi &&
      !(graph.expected_degree > 0.0 && graph.expected_degree <= static_cast<double>(graph.n))) {
    config_error("graph.d must lie in (0, n]");
  }
  if (!(weight_lo > 0.0 && weight_hi > weight_lo)) config_error("weight_range must satisfy 0 < lo < hi");
  if (repetitions < 1) config_error("repetitions must be >= 1");
  if (sample_sizes.empty()) config_error("sample_sizes must be non-empty");
  for (std::size_t k = 0; k < sample_sizes.size(); ++k) {
    if (sample_sizes[k] < 1) config_error("sample sizes must be positive");
    if (k > 0 && sample_sizes[k] <= sample_sizes[k - 1]) config_error("sample_sizes must be strictly increasing");
  }
  if (methods.empty()) config_error("methods must be non-empty");
  std::set<std::string> names;
  for (const auto& m : methods) {
    if (m.name.empty()) config_error("method names must be non-empty");
    for (char ch : m.name) {
      const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                      ch == '_' || ch == '-' || ch == '+' || ch == '.';
      if (!ok) config_error("method name '" + m.name + "' may only use [A-Za-z0-9_+.-]");
    }
    if (!names.insert(m.name).second) config_error("duplicate method name '" + m.name + "'");
    try {
      m.fit.validate();
    } catch (const Error& e) {
      config_error("method '" + m.name + "': " + e.detail());
    }
  }
  if (scenario.kind == Scenario::Kind::Contaminated) {
    try {
      scenario.contamination.validate(graph.n);
    } catch (const Error& e) {
      config_error(e.detail());
    }
  }
  if (scenario.kind == Scenario::Kind::IllConditioned) {
    if (!(scenario.ill_variance > 0.0)) config_error("ill-conditioned variance must be positive");
    for (NodeId v : scenario.ill_nodes) {
      if (v >= graph.n) config_error("ill-conditioned node index out of range");
    }
    if (scenario.ill_nodes.empty() && scenario.ill_node_count > graph.n) {
      config_error("ill-conditioned node_count exceeds n");
    }
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown_keys(doc, "config", {"graph", "weight_range", "variance", "scenario", "methods", "sample_sizes",
                                      "repetitions", "base_seed", "record_timing"});
  ExperimentConfig cfg;
  if (!doc.contains("graph")) config_error("config is missing 'graph'");
  cfg.graph = parse_graph(doc.at("graph"));
  const auto range = optional_or<std::vector<double>>(doc, "weight_range", {1.0, 2.0}, "config");
  if (range.size() != 2) config_error("weight_range must be [lo, hi]");
  cfg.weight_lo = range[0];
  cfg.weight_hi = range[1];
  if (doc.contains("variance")) cfg.variances = parse_variance(doc.at("variance"));
  if (doc.contains("scenario")) cfg.scenario = parse_scenario(doc.at("scenario"));
  if (!doc.contains("methods") || !doc.at("methods").is_array()) config_error("config needs a 'methods' array");
  for (const auto& m : doc.at("methods")) cfg.methods.push_back(parse_method(m));
  cfg.sample_sizes = required<std::vector<std::size_t>>(doc, "sample_sizes", "config");
  cfg.repetitions = optional_or<std::size_t>(doc, "repetitions", 20, "config");
  cfg.base_seed = optional_or<std::uint64_t>(doc, "base_seed", 0, "config");
  cfg.record_timing = optional_or<bool>(doc, "record_timing", false, "config");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t rep) { return derive_seed(base_seed, rep); }

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool agnostic = config.scenario.kind == Scenario::Kind::Agnostic;
  const std::string graph_label = config.graph.family == GraphSpec::Family::Tree ? "tree" : "er";
  const std::string scenario = scenario_label(config.scenario.kind);
  const std::size_t m_max = config.sample_sizes.back();

  struct Keyed {
    std::size_t method_index;
    ResultRow row;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(config.repetitions * config.sample_sizes.size() * config.methods.size());

  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t seed = repetition_seed(config.base_seed, rep);

    Rng graph_rng(derive_seed(seed, kGraphStream));
    const Dag dag = config.graph.family == GraphSpec::Family::Tree
                        ? random_tree_dag(config.graph.n, graph_rng)
                        : random_er_dag(config.graph.n, config.graph.expected_degree, graph_rng);

    VarianceSpec variances = config.variances;
    if (config.scenario.kind == Scenario::Kind::IllConditioned) {
      auto nodes = config.scenario.ill_nodes;
      if (nodes.empty()) {
        Rng ill_rng(derive_seed(seed, kIllNodeStream));
        nodes = sample_without_replacement(dag.node_count(), config.scenario.ill_node_count, ill_rng);
      }
      variances = VarianceSpec::ill_conditioned(std::move(nodes), config.scenario.ill_variance);
    }
    Rng model_rng(derive_seed(seed, kModelStream));
    const GaussianBayesNet truth = random_gbn(dag, config.weight_lo, config.weight_hi, variances, model_rng);

    Dag fit_dag = dag;
    if (agnostic) {
      Rng edit_rng(derive_seed(seed, kAgnosticStream));
      fit_dag = agnostic_pair(dag, config.scenario.removed_edges, edit_rng).fit;
    }

    Rng sample_rng(derive_seed(seed, kSampleStream));
    SampleMatrix data;
    if (config.scenario.kind == Scenario::Kind::Contaminated) {
      ContaminationSpec spec = config.scenario.contamination;
      spec.seed = derive_seed(seed, kContaminationStream);
      data = contaminated_sample(truth, m_max, spec, sample_rng);
    } else {
      data = sample(truth, m_max, sample_rng);
    }
    const Eigen::MatrixXd truth_cov = covariance(truth);

    for (std::size_t m : config.sample_sizes) {
      const SampleMatrix prefix = data.topRows(static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < config.methods.size(); ++k) {
        const auto& method = config.methods[k];
        ResultRow row;
        row.method = method.name;
        row.graph = graph_label;
        row.n = config.graph.n;
        row.d = config.graph.expected_degree;
        row.scenario = scenario;
        row.m = m;
        row.rep = rep;
        row.seed = seed;

        const auto start = std::chrono::steady_clock::now();
        try {
          double kl = 0.0;
          if (method.fit.method == CoefficientMethod::EmpiricalMle) {
            kl = gaussian_kl(truth_cov, empirical_mle(prefix));
          } else {
            const FitResult result = fit(fit_dag, prefix, method.fit);
            if (result.any_degenerate()) {
              row.degenerate = true;
            } else if (agnostic) {
              kl = gaussian_kl(truth_cov, covariance(result.model));
            } else {
              kl = kl_divergence(truth, result.model).kl_total;
            }
          }
          if (!row.degenerate) {
            row.kl_total = std::max(kl, 0.0);
            row.tv_upper = pinsker_tv_bound(kl);
          }
        } catch (const Error& e) {
          if (!is_numerical(e.code())) {
            throw Error(ErrorCode::ConfigInvalid, "method '" + method.name + "' at m=" + std::to_string(m) +
                                                      ", rep " + std::to_string(rep) + ": " + e.what());
          }
          row.degenerate = true;
        }
        if (config.record_timing) {
          row.fit_wall_ms =
              std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        keyed.push_back({k, std::move(row)});
      }
    }
  }

  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.method_index != b.method_index) return a.method_index < b.method_index;
    if (a.row.m != b.row.m) return a.row.m < b.row.m;
    return a.row.rep < b.row.rep;
  });
  std::vector<ResultRow> rows;
  rows.reserve(keyed.size());
  for (auto& k : keyed) rows.push_back(std::move(k.row));
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no result rows to summarize");
  // Cells keep first-appearance order of methods, then ascending m.
  std::vector<std::string> method_order;
  std::map<std::pair<std::string, std::size_t>, std::pair<std::vector<double>, std::size_t>> cells;
  for (const auto& r : rows) {
    if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end()) {
      method_order.push_back(r.method);
    }
    auto& cell = cells[{r.method, r.m}];
    if (r.degenerate || !r.kl_total) {
      ++cell.second;
    } else {
      cell.first.push_back(*r.kl_total);
    }
  }
  std::vector<SummaryRow> out;
  for (const auto& name : method_order) {
    for (const auto& [key, cell] : cells) {
      if (key.first != name) continue;
      SummaryRow s;
      s.method = name;
      s.m = key.second;
      s.degenerate_count = cell.second;
      if (!cell.first.empty()) {
        s.mean_kl = stats::mean(cell.first);
        s.median_kl = stats::median(cell.first);
        s.iqr_kl = stats::quantile(cell.first, 0.75) - stats::quantile(cell.first, 0.25);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.graph << ',' << r.n << ',' << io::format_double(r.d) << ',' << r.scenario << ','
        << r.m << ',' << r.rep << ',' << r.seed << ',' << csv_optional(r.kl_total) << ','
        << csv_optional(r.tv_upper) << ',' << io::format_double(r.fit_wall_ms) << ',' << (r.degenerate ? 1 : 0)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    out << s.method << ',' << s.m << ',' << csv_optional(s.mean_kl) << ',' << csv_optional(s.median_kl) << ','
        << csv_optional(s.iqr_kl) << ',' << s.degenerate_count << '\n';
  }
}

void write_outputs(const std::filesystem::path& directory, const std::vector<ResultRow>& rows) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());

  auto open = [&](const std::string& name) {
    std::ofstream f(directory / name);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + (directory / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_results_csv(f, rows);
  }
  const auto summary = summarize(rows);
  {
    auto f = open("summary.csv");
    write_summary_csv(f, summary);
  }
  std::vector<std::string> methods;
  for (const auto& s : summary) {
    if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) methods.push_back(s.method);
  }
  for (const auto& name : methods) {
    auto f = open("plot_" + name + ".csv");
    f << "m,median_kl\n";
    for (const auto& s : summary) {
      if (s.method == name) f << s.m << ',' << csv_optional(s.median_kl) << '\n';
    }
  }
}

}  // namespace gbnlearn::bench
