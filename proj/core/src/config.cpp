#include "rdlp/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "rdlp/error.hpp"

namespace rdlp {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

YAML::Node parse_yaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed YAML: ") + e.what());
  }
}

void require_map(const YAML::Node& node, std::string_view where) {
  if (!node.IsMap()) throw ConfigError(std::string(where) + " must be a mapping");
}

void check_keys(const YAML::Node& node, std::string_view where, std::initializer_list<std::string_view> allowed) {
  require_map(node, where);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const YAML::Node& node, std::string_view key) {
  try {
    return node[std::string(key)].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for '" + std::string(key) + "'");
  }
}

template <class T>
void read_opt(const YAML::Node& node, std::string_view key, T& out) {
  if (node[std::string(key)]) out = get<T>(node, key);
}

// A list of integers, or a range {from, to, step} with `to` inclusive.
std::vector<int> parse_int_grid(const YAML::Node& node, std::string_view key) {
  std::vector<int> values;
  if (node.IsSequence()) {
    for (const auto& v : node) values.push_back(v.as<int>());
  } else if (node.IsMap()) {
    check_keys(node, key, {"from", "to", "step"});
    const int from = get<int>(node, "from");
    const int to = get<int>(node, "to");
    int step = 1;
    read_opt(node, "step", step);
    if (step < 1) throw ConfigError(std::string(key) + ": step must be >= 1");
    for (int v = from; v <= to; v += step) values.push_back(v);
  } else if (node.IsScalar()) {
    values.push_back(node.as<int>());
  }
  if (values.empty()) throw ConfigError(std::string(key) + ": grid is empty");
  return values;
}

std::vector<NormalisationMethod> parse_normalisations(const YAML::Node& node) {
  std::vector<NormalisationMethod> out;
  for (const auto& v : node) out.push_back(parse_normalisation(v.as<std::string>()));
  return out;
}

SyntheticSpec synthetic_from(const YAML::Node& node) {
  check_keys(node, "synthetic", {"n_households", "days", "start_date", "rng_seed", "archetypes"});
  SyntheticSpec spec;
  spec.n_households = get<std::size_t>(node, "n_households");
  spec.days = get<std::size_t>(node, "days");
  read_opt(node, "rng_seed", spec.rng_seed);
  if (node["start_date"]) {
    try {
      spec.start_date = parse_date(get<std::string>(node, "start_date"));
    } catch (const DataError& e) {
      throw ConfigError(std::string("synthetic.start_date: ") + e.what());
    }
  }
  if (!node["archetypes"] || !node["archetypes"].IsSequence())
    throw ConfigError("synthetic: 'archetypes' must be a list");
  for (const auto& a : node["archetypes"]) {
    check_keys(a, "archetype", {"name", "shape", "amplitude", "noise"});
    Archetype arch;
    read_opt(a, "name", arch.name);
    const auto shape = a["shape"];
    if (!shape || !shape.IsSequence() || shape.size() != kHours)
      throw ConfigError("archetype '" + arch.name + "': shape needs 24 values");
    for (std::size_t t = 0; t < kHours; ++t) arch.shape[t] = shape[t].as<double>();
    if (const auto amp = a["amplitude"]) {
      if (amp.IsSequence() && amp.size() == 2) {
        arch.amplitude_min = amp[0].as<double>();
        arch.amplitude_max = amp[1].as<double>();
      } else {
        arch.amplitude_min = arch.amplitude_max = amp.as<double>();
      }
    }
    read_opt(a, "noise", arch.noise);
    spec.archetypes.push_back(std::move(arch));
  }
  try {
    validate(spec);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

void emit_synthetic(YAML::Emitter& out, const SyntheticSpec& spec) {
  out << YAML::BeginMap;
  out << YAML::Key << "n_households" << YAML::Value << spec.n_households;
  out << YAML::Key << "days" << YAML::Value << spec.days;
  out << YAML::Key << "start_date" << YAML::Value << format_date(spec.start_date);
  out << YAML::Key << "rng_seed" << YAML::Value << spec.rng_seed;
  out << YAML::Key << "archetypes" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : spec.archetypes) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << a.name;
    out << YAML::Key << "shape" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : a.shape) out << v;
    out << YAML::EndSeq;
    out << YAML::Key << "amplitude" << YAML::Value << YAML::Flow << YAML::BeginSeq << a.amplitude_min
        << a.amplitude_max << YAML::EndSeq;
    out << YAML::Key << "noise" << YAML::Value << a.noise;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
}

template <class Seq>
void emit_flow(YAML::Emitter& out, const Seq& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& v : values) out << v;
  out << YAML::EndSeq;
}

}  // namespace

std::string_view to_string(PreBinning prebin) {
  switch (prebin) {
    case PreBinning::none: return "none";
    case PreBinning::amc: return "amc";
    case PreBinning::integral_kmeans: return "integral_kmeans";
  }
  return "?";
}

PreBinning parse_prebinning(std::string_view name) {
  for (auto p : {PreBinning::none, PreBinning::amc, PreBinning::integral_kmeans})
    if (to_string(p) == name) return p;
  throw ConfigError("unknown pre-binning '" + std::string(name) + "'");
}

std::vector<GridPoint> expand(const AlgorithmGrid& grid) {
  std::vector<GridPoint> points;
  switch (grid.algorithm) {
    case Algorithm::kmeans:
      for (int m : grid.m) points.push_back({m, 0});
      break;
    case Algorithm::som:
      for (int s : grid.s) points.push_back({0, s});
      break;
    case Algorithm::som_kmeans:
      for (int s : grid.s)
        for (int m : grid.m)
          if (static_cast<long>(s) * s > m) points.push_back({m, s});
      break;
  }
  return points;
}

void validate(const ExperimentConfig& config) {
  if (!config.dataset.csv && !config.dataset.synthetic)
    throw ConfigError("dataset: either 'csv' or 'synthetic' is required");
  if (config.dataset.csv && config.dataset.synthetic)
    throw ConfigError("dataset: 'csv' and 'synthetic' are mutually exclusive");
  if (config.experiments.empty()) throw ConfigError("no experiments configured");
  if (config.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (config.top_n < 1) throw ConfigError("top_n must be >= 1");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  if (config.n_bins < 1) throw ConfigError("n_bins must be >= 1");
  if (config.kmeans.max_iterations < 1) throw ConfigError("kmeans.max_iterations must be >= 1");
  if (config.som.epochs < 1) throw ConfigError("som.epochs must be >= 1");
  validate(config.amc);

  std::set<std::string> names;
  for (const auto& e : config.experiments) {
    if (e.name.empty()) throw ConfigError("experiment without a name");
    if (!names.insert(e.name).second) throw ConfigError("duplicate experiment '" + e.name + "'");
    if (e.algorithms.empty()) throw ConfigError(e.name + ": no algorithms");
    if (e.normalisations.empty() && config.normalisations.empty())
      throw ConfigError(e.name + ": no normalisation methods");
    for (const auto& g : e.algorithms) {
      const auto where = e.name + "." + std::string(to_string(g.algorithm));
      const bool needs_m = g.algorithm != Algorithm::som;
      const bool needs_s = g.algorithm != Algorithm::kmeans;
      if (needs_m && g.m.empty()) throw ConfigError(where + ": m grid is empty");
      if (needs_s && g.s.empty()) throw ConfigError(where + ": s grid is empty");
      for (int m : g.m)
        if (needs_m && m < 2) throw ConfigError(where + ": m must be >= 2");
      for (int s : g.s)
        if (needs_s && s < 2) throw ConfigError(where + ": s must be >= 2");
      if (expand(g).empty()) throw ConfigError(where + ": no (s, m) pair satisfies s^2 > m");
    }
  }
}

ExperimentConfig parse_config(std::string_view yaml, const std::filesystem::path& base_dir) {
  const auto root = parse_yaml(yaml);
  check_keys(root, "config",
             {"dataset", "normalisations", "experiments", "seeds", "top_n", "scoring_matrix", "output_dir",
              "amc", "n_bins", "kmeans", "som", "silhouette_sample_cap", "qualitative", "workers"});
  ExperimentConfig c;

  if (const auto ds = root["dataset"]) {
    check_keys(ds, "dataset", {"csv", "synthetic"});
    if (ds["csv"]) c.dataset.csv = resolve(base_dir, get<std::string>(ds, "csv"));
    if (const auto syn = ds["synthetic"]) {
      c.dataset.synthetic =
          syn.IsScalar() ? load_synthetic_spec(resolve(base_dir, syn.as<std::string>())) : synthetic_from(syn);
    }
  }
  if (root["normalisations"]) c.normalisations = parse_normalisations(root["normalisations"]);
  if (const auto seeds = root["seeds"]) {
    c.seeds.clear();
    for (const auto& s : seeds) c.seeds.push_back(s.as<std::uint64_t>());
  }
  read_opt(root, "top_n", c.top_n);
  read_opt(root, "workers", c.workers);
  read_opt(root, "n_bins", c.n_bins);
  read_opt(root, "silhouette_sample_cap", c.silhouette_sample_cap);
  if (root["scoring_matrix"]) c.scoring_matrix = resolve(base_dir, get<std::string>(root, "scoring_matrix"));
  if (root["output_dir"]) c.output_dir = resolve(base_dir, get<std::string>(root, "output_dir"));
  if (const auto amc = root["amc"]) {
    check_keys(amc, "amc", {"edges", "scale"});
    if (amc["edges"]) c.amc.edges = get<std::vector<double>>(amc, "edges");
    read_opt(amc, "scale", c.amc.scale);
  }
  if (const auto km = root["kmeans"]) {
    check_keys(km, "kmeans", {"max_iterations", "tolerance"});
    read_opt(km, "max_iterations", c.kmeans.max_iterations);
    read_opt(km, "tolerance", c.kmeans.tolerance);
  }
  if (const auto som = root["som"]) {
    check_keys(som, "som", {"epochs"});
    read_opt(som, "epochs", c.som.epochs);
  }
  if (const auto q = root["qualitative"]) {
    check_keys(q, "qualitative", {"threshold", "max_clusters", "zero_tol"});
    read_opt(q, "threshold", c.usability.threshold);
    read_opt(q, "max_clusters", c.usability.max_clusters);
    read_opt(q, "zero_tol", c.usability.zero_tol);
  }
  if (const auto exps = root["experiments"]) {
    if (!exps.IsSequence()) throw ConfigError("experiments must be a list");
    for (const auto& e : exps) {
      check_keys(e, "experiment", {"name", "zeros", "prebin", "algorithms", "normalisations"});
      ExperimentSpec spec;
      spec.name = get<std::string>(e, "name");
      read_opt(e, "zeros", spec.keep_zeros);
      if (e["prebin"]) spec.prebin = parse_prebinning(get<std::string>(e, "prebin"));
      if (e["normalisations"]) spec.normalisations = parse_normalisations(e["normalisations"]);
      if (!e["algorithms"] || !e["algorithms"].IsSequence())
        throw ConfigError(spec.name + ": 'algorithms' must be a list");
      for (const auto& a : e["algorithms"]) {
        check_keys(a, spec.name + ".algorithms", {"algorithm", "m", "s"});
        AlgorithmGrid g;
        try {
          g.algorithm = parse_algorithm(get<std::string>(a, "algorithm"));
        } catch (const ParameterError& err) {
          throw ConfigError(err.what());
        }
        if (a["m"]) g.m = parse_int_grid(a["m"], "m");
        if (a["s"]) g.s = parse_int_grid(a["s"], "s");
        spec.algorithms.push_back(std::move(g));
      }
      c.experiments.push_back(std::move(spec));
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "dataset" << YAML::Value << YAML::BeginMap;
  if (c.dataset.csv) out << YAML::Key << "csv" << YAML::Value << c.dataset.csv->string();
  if (c.dataset.synthetic) {
    out << YAML::Key << "synthetic" << YAML::Value;
    emit_synthetic(out, *c.dataset.synthetic);
  }
  out << YAML::EndMap;
  std::vector<std::string> norms;
  for (auto n : c.normalisations) norms.emplace_back(to_string(n));
  out << YAML::Key << "normalisations" << YAML::Value;
  emit_flow(out, norms);
  out << YAML::Key << "seeds" << YAML::Value;
  emit_flow(out, c.seeds);
  out << YAML::Key << "top_n" << YAML::Value << c.top_n;
  out << YAML::Key << "workers" << YAML::Value << c.workers;
  if (c.scoring_matrix) out << YAML::Key << "scoring_matrix" << YAML::Value << c.scoring_matrix->string();
  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir.string();
  out << YAML::Key << "n_bins" << YAML::Value << c.n_bins;
  out << YAML::Key << "amc" << YAML::Value << YAML::BeginMap << YAML::Key << "edges" << YAML::Value;
  emit_flow(out, c.amc.edges);
  out << YAML::Key << "scale" << YAML::Value << c.amc.scale << YAML::EndMap;
  out << YAML::Key << "kmeans" << YAML::Value << YAML::BeginMap << YAML::Key << "max_iterations" << YAML::Value
      << c.kmeans.max_iterations << YAML::Key << "tolerance" << YAML::Value << c.kmeans.tolerance << YAML::EndMap;
  out << YAML::Key << "som" << YAML::Value << YAML::BeginMap << YAML::Key << "epochs" << YAML::Value
      << c.som.epochs << YAML::EndMap;
  out << YAML::Key << "silhouette_sample_cap" << YAML::Value << c.silhouette_sample_cap;
  out << YAML::Key << "qualitative" << YAML::Value << YAML::BeginMap << YAML::Key << "threshold" << YAML::Value
      << c.usability.threshold << YAML::Key << "max_clusters" << YAML::Value << c.usability.max_clusters
      << YAML::Key << "zero_tol" << YAML::Value << c.usability.zero_tol << YAML::EndMap;
  out << YAML::Key << "experiments" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : c.experiments) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << e.name;
    out << YAML::Key << "zeros" << YAML::Value << e.keep_zeros;
    out << YAML::Key << "prebin" << YAML::Value << std::string(to_string(e.prebin));
    if (!e.normalisations.empty()) {
      std::vector<std::string> en;
      for (auto n : e.normalisations) en.emplace_back(to_string(n));
      out << YAML::Key << "normalisations" << YAML::Value;
      emit_flow(out, en);
    }
    out << YAML::Key << "algorithms" << YAML::Value << YAML::BeginSeq;
    for (const auto& g : e.algorithms) {
      out << YAML::BeginMap << YAML::Key << "algorithm" << YAML::Value << std::string(to_string(g.algorithm));
      if (!g.m.empty()) {
        out << YAML::Key << "m" << YAML::Value;
        emit_flow(out, g.m);
      }
      if (!g.s.empty()) {
        out << YAML::Key << "s" << YAML::Value;
        emit_flow(out, g.s);
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

SyntheticSpec parse_synthetic_spec(std::string_view yaml) {
  auto root = parse_yaml(yaml);
  if (root["synthetic"]) root = root["synthetic"];
  return synthetic_from(root);
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) { return parse_synthetic_spec(read_file(path)); }

ScoringMatrix parse_scoring_matrix(std::string_view yaml) {
  const auto root = parse_yaml(yaml);
  check_keys(root, "scoring matrix", {"measures"});
  if (!root["measures"] || !root["measures"].IsSequence())
    throw ConfigError("scoring matrix: 'measures' must be a list");
  std::vector<Measure> measures;
  for (const auto& m : root["measures"]) {
    check_keys(m, "measure", {"name", "weight", "direction"});
    Measure measure;
    measure.name = get<std::string>(m, "name");
    measure.weight = get<int>(m, "weight");
    measure.direction = parse_direction(get<std::string>(m, "direction"));
    measures.push_back(std::move(measure));
  }
  return ScoringMatrix(std::move(measures));
}

ScoringMatrix load_scoring_matrix(const std::filesystem::path& path) { return parse_scoring_matrix(read_file(path)); }

std::string to_yaml(const ScoringMatrix& matrix) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "measures" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : matrix.measures()) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << m.name << YAML::Key << "weight"
        << YAML::Value << m.weight << YAML::Key << "direction" << YAML::Value << std::string(to_string(m.direction))
        << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace rdlp
