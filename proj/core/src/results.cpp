#include "rdlp/results.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rdlp/csv_io.hpp"
#include "rdlp/error.hpp"

namespace rdlp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json number_or_null(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json params_json(const GridPoint& p) {
  json j = json::object();
  if (p.m > 0) j["m"] = p.m;
  if (p.s > 0) j["s"] = p.s;
  return j;
}

GridPoint params_from(const json& j) {
  GridPoint p;
  if (j.is_null()) return p;
  p.m = j.value("m", 0);
  p.s = j.value("s", 0);
  return p;
}

json quant_json(const BinQuant& q) {
  return {{"dbi", number_or_null(q.dbi)},
          {"mia", number_or_null(q.mia)},
          {"silhouette", number_or_null(q.silhouette)},
          {"ix", q.valid ? number_or_null(q.ix) : json(nullptr)}};
}

BinQuant quant_from(const json& j, std::size_t n_bin) {
  BinQuant q;
  q.n_bin = n_bin;
  q.dbi = number_or_nan(j.at("dbi"));
  q.mia = number_or_nan(j.at("mia"));
  q.silhouette = number_or_nan(j.at("silhouette"));
  q.ix = number_or_nan(j.at("ix"));
  q.valid = !j.at("ix").is_null();
  return q;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

std::string csv_field(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

json to_json(const RunRecord& r) {
  json bins = json::array();
  for (const auto& b : r.bins) {
    json centroids = json::array();
    for (std::size_t k = 0; k < b.centroids.rows(); ++k) {
      const auto row = b.centroids.row(k);
      centroids.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json trials = json::array();
    for (const auto& t : b.trials) {
      json tj = {{"params", params_json(t.params)}};
      if (t.quant) {
        tj.update(quant_json(*t.quant));
        tj["error"] = nullptr;
      } else {
        tj["dbi"] = tj["mia"] = tj["silhouette"] = tj["ix"] = nullptr;
        tj["error"] = t.error;
      }
      trials.push_back(std::move(tj));
    }
    const bool fitted = b.centroids.rows() > 0;
    json bj = {{"bin", b.bin},
               {"n_bin", b.rows.empty() ? b.quant.n_bin : b.rows.size()},
               {"fitted", fitted},
               {"params", fitted ? params_json(b.params) : json(nullptr)},
               {"cluster_offset", b.cluster_offset},
               {"n_clusters", b.centroids.rows()},
               {"sizes", b.sizes},
               {"centroids", std::move(centroids)},
               {"trials", std::move(trials)}};
    bj.update(fitted ? quant_json(b.quant) : json{{"dbi", nullptr}, {"mia", nullptr}, {"silhouette", nullptr}, {"ix", nullptr}});
    bins.push_back(std::move(bj));
  }

  json clusters = json::array();
  for (std::size_t k = 0; k < r.cluster_sizes.size(); ++k) {
    const auto& rdlp = r.rdlps[k];
    clusters.push_back({{"cluster", k},
                        {"size", r.cluster_sizes[k]},
                        {"rdlp", rdlp ? json(std::vector<double>(rdlp->begin(), rdlp->end())) : json(nullptr)}});
  }

  return {{"schema_version", kResultSchemaVersion},
          {"run_id", r.run_id},
          {"experiment", r.experiment},
          {"normalisation", std::string(to_string(r.normalisation))},
          {"algorithm", std::string(to_string(r.algorithm))},
          {"prebin", std::string(to_string(r.prebin))},
          {"zeros", r.keep_zeros},
          {"seed", r.seed},
          {"params", r.prebin == PreBinning::none ? params_json(r.params) : json(nullptr)},
          {"status", std::string(to_string(r.status))},
          {"error", r.error.empty() ? json(nullptr) : json(r.error)},
          {"n_input", r.n_input},
          {"n_total", r.n_total},
          {"n_excluded", r.n_excluded},
          {"ci", number_or_null(r.ci)},
          {"n_clusters", r.n_clusters()},
          {"bins", std::move(bins)},
          {"clusters", std::move(clusters)},
          {"timing_ms", r.timing_ms}};
}

RunRecord run_record_from_json(const json& j) {
  try {
    RunRecord r;
    if (j.at("schema_version").get<int>() != kResultSchemaVersion) throw DataError("unsupported schema_version");
    r.run_id = j.at("run_id").get<std::string>();
    r.experiment = j.at("experiment").get<std::string>();
    r.normalisation = parse_normalisation(j.at("normalisation").get<std::string>());
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.prebin = parse_prebinning(j.at("prebin").get<std::string>());
    r.keep_zeros = j.at("zeros").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = params_from(j.at("params"));
    r.status = parse_run_status(j.at("status").get<std::string>());
    if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
    r.n_input = j.at("n_input").get<std::size_t>();
    r.n_total = j.at("n_total").get<std::size_t>();
    r.n_excluded = j.at("n_excluded").get<std::size_t>();
    if (!j.at("ci").is_null()) r.ci = j.at("ci").get<double>();
    for (const auto& bj : j.at("bins")) {
      BinModel b;
      b.bin = bj.at("bin").get<int>();
      const auto n_bin = bj.at("n_bin").get<std::size_t>();
      b.cluster_offset = bj.at("cluster_offset").get<int>();
      b.sizes = bj.at("sizes").get<std::vector<std::size_t>>();
      for (const auto& row : bj.at("centroids")) b.centroids.append_row(row.get<std::vector<double>>());
      if (bj.at("fitted").get<bool>()) {
        b.params = params_from(bj.at("params"));
        b.quant = quant_from(bj, n_bin);
      } else {
        b.quant.n_bin = n_bin;
      }
      for (const auto& tj : bj.at("trials")) {
        TrialResult t;
        t.params = params_from(tj.at("params"));
        if (tj.at("error").is_null()) {
          t.quant = quant_from(tj, n_bin);
        } else {
          t.error = tj.at("error").get<std::string>();
        }
        b.trials.push_back(std::move(t));
      }
      r.bins.push_back(std::move(b));
    }
    for (const auto& cj : j.at("clusters")) {
      r.cluster_sizes.push_back(cj.at("size").get<std::size_t>());
      if (cj.at("rdlp").is_null()) {
        r.rdlps.emplace_back();
      } else {
        const auto v = cj.at("rdlp").get<std::vector<double>>();
        if (v.size() != kHours) throw DataError("rdlp must have 24 values");
        HourlyValues h;
        std::copy(v.begin(), v.end(), h.begin());
        r.rdlps.emplace_back(h);
      }
    }
    r.timing_ms = j.value("timing_ms", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed run record: ") + e.what());
  } catch (const Error& e) {
    throw DataError(std::string("malformed run record: ") + e.what());
  }
}

json to_json(const SetQualScores& s) {
  return {{"mape_total", number_or_null(s.mape_total)},
          {"mdape_total", number_or_null(s.mdape_total)},
          {"mdlq_total", number_or_null(s.mdlq_total)},
          {"mdsyma_total", number_or_null(s.mdsyma_total)},
          {"mape_peak", number_or_null(s.mape_peak)},
          {"mdape_peak", number_or_null(s.mdape_peak)},
          {"mdlq_peak", number_or_null(s.mdlq_peak)},
          {"mdsyma_peak", number_or_null(s.mdsyma_peak)},
          {"mpc_ratio", number_or_null(s.mpc_ratio)},
          {"entropy_weekday", number_or_null(s.entropy_weekday)},
          {"entropy_month", number_or_null(s.entropy_month)},
          {"entropy_total_demand", number_or_null(s.entropy_total_demand)},
          {"entropy_peak_demand", number_or_null(s.entropy_peak_demand)},
          {"n_qualifying", s.n_qualifying},
          {"pct_above_threshold", s.pct_above_threshold},
          {"zero_profile_represented", s.zero_profile_represented},
          {"n_clusters_ok", s.n_clusters_ok},
          {"n_clusters", s.n_clusters}};
}

json to_json(const FinalReport& report) {
  json by_ci = json::array();
  for (const auto& r : report.by_ci) by_ci.push_back({{"rank", r.rank}, {"run_id", r.run_id}, {"ci", r.ci}});

  json qual = json::array();
  for (const auto& q : report.qualitative) {
    qual.push_back({{"run_id", q.run_id},
                    {"scores", q.scores ? to_json(*q.scores) : json(nullptr)},
                    {"error", q.error.empty() ? json(nullptr) : json(q.error)}});
  }

  json measures = json::array();
  for (const auto& m : report.matrix.measures())
    measures.push_back({{"name", m.name}, {"weight", m.weight}, {"direction", std::string(to_string(m.direction))}});

  json by_score = json::array();
  for (const auto& s : report.by_score) {
    json ranks = json::object();
    for (std::size_t i = 0; i < s.ranks.size(); ++i) ranks[report.matrix.measures()[i].name] = s.ranks[i];
    by_score.push_back({{"rank", s.final_rank},
                        {"run_id", s.run_id},
                        {"total", number_or_null(s.total)},
                        {"measure_ranks", std::move(ranks)},
                        {"disqualified", s.disqualified},
                        {"reason", s.reason.empty() ? json(nullptr) : json(s.reason)}});
  }

  json sensitivity = json::array();
  for (const auto& c : report.sensitivity) {
    sensitivity.push_back(
        {{"measure", c.measure}, {"weight", c.weight}, {"order", c.order}, {"top_changed", c.top_changed}});
  }

  return {{"n_records", report.n_records},  {"n_valid_ci", report.n_valid_ci},
          {"matrix", std::move(measures)},  {"by_ci", std::move(by_ci)},
          {"qualitative", std::move(qual)}, {"by_score", std::move(by_score)},
          {"weight_sensitivity", std::move(sensitivity)}};
}

std::string dump_record(const RunRecord& record) { return to_json(record).dump(2) + "\n"; }

void write_results(const fs::path& dir, const std::vector<RunRecord>& records, const ExperimentConfig& config) {
  fs::create_directories(dir / "runs");
  fs::create_directories(dir / "labels");

  auto resolved = config;
  if (resolved.dataset.csv) resolved.dataset.csv = fs::absolute(*resolved.dataset.csv);
  if (resolved.scoring_matrix) resolved.scoring_matrix = fs::absolute(*resolved.scoring_matrix);
  resolved.output_dir = fs::absolute(dir);
  write_text(dir / "config.yaml", to_yaml(resolved));

  std::ostringstream index;
  index << "run_id,experiment,normalisation,algorithm,prebin,zeros,seed,m,s,n_clusters,ci,status\n";
  for (const auto& r : records) {
    write_text(dir / "runs" / (r.run_id + ".json"), dump_record(r));
    std::ostringstream labels;
    for (int l : r.labels) labels << l << '\n';
    write_text(dir / "labels" / (r.run_id + ".csv"), labels.str());
    index << r.run_id << ',' << r.experiment << ',' << to_string(r.normalisation) << ',' << to_string(r.algorithm)
          << ',' << to_string(r.prebin) << ',' << (r.keep_zeros ? "true" : "false") << ',' << r.seed << ','
          << (r.params.m > 0 ? std::to_string(r.params.m) : "") << ','
          << (r.params.s > 0 ? std::to_string(r.params.s) : "") << ',' << r.n_clusters() << ',' << csv_field(r.ci)
          << ',' << to_string(r.status) << '\n';
  }
  write_text(dir / "index.csv", index.str());
}

void write_report(const fs::path& dir, const FinalReport& report) {
  fs::create_directories(dir);
  write_text(dir / "report.json", to_json(report).dump(2) + "\n");
}

RunRecord read_run(const fs::path& dir, const std::string& run_id) {
  const auto path = dir / "runs" / (run_id + ".json");
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
  auto record = run_record_from_json(j);
  const auto labels_path = dir / "labels" / (run_id + ".csv");
  if (fs::exists(labels_path)) {
    std::istringstream in(read_text(labels_path));
    int l = 0;
    while (in >> l) record.labels.push_back(l);
  }
  return record;
}

std::vector<RunRecord> read_results(const fs::path& dir) {
  std::istringstream index(read_text(dir / "index.csv"));
  std::string line;
  std::getline(index, line);  // header
  std::vector<RunRecord> records;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    records.push_back(read_run(dir, line.substr(0, line.find(','))));
  }
  return records;
}

ExperimentConfig read_results_config(const fs::path& dir) { return load_config(dir / "config.yaml"); }

}  // namespace rdlp
