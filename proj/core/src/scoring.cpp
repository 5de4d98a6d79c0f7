#include "rdlp/scoring.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "rdlp/error.hpp"

namespace rdlp {

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::lower_better: return "lower_better";
    case Direction::higher_better: return "higher_better";
    case Direction::boolean_good: return "boolean_good";
  }
  return "?";
}

Direction parse_direction(std::string_view name) {
  for (auto d : {Direction::lower_better, Direction::higher_better, Direction::boolean_good})
    if (to_string(d) == name) return d;
  throw ConfigError("unknown measure direction '" + std::string(name) + "'");
}

ScoringMatrix::ScoringMatrix(std::vector<Measure> measures) : measures_(std::move(measures)) {
  if (measures_.empty()) throw ConfigError("scoring matrix has no measures");
  std::set<std::string> seen;
  for (const auto& m : measures_) {
    if (m.name.empty()) throw ConfigError("scoring matrix measure without a name");
    if (m.weight < 1) throw ConfigError("measure '" + m.name + "' must have a positive weight");
    if (!seen.insert(m.name).second) throw ConfigError("duplicate measure '" + m.name + "'");
  }
}

int ScoringMatrix::total_weight() const {
  return std::accumulate(measures_.begin(), measures_.end(), 0,
                         [](int acc, const Measure& m) { return acc + m.weight; });
}

const Measure* ScoringMatrix::find(std::string_view name) const {
  for (const auto& m : measures_)
    if (m.name == name) return &m;
  return nullptr;
}

ScoringMatrix ScoringMatrix::with_weight(std::size_t index, int weight) const {
  auto copy = measures_;
  copy.at(index).weight = weight;
  return ScoringMatrix(std::move(copy));
}

ScoringMatrix default_matrix() {
  using namespace measures;
  return ScoringMatrix({
      {std::string(kSensibleCount), 2, Direction::higher_better},
      {std::string(kZeroProfile), 1, Direction::boolean_good},
      {std::string(kErrorTotal), 6, Direction::lower_better},
      {std::string(kErrorPeak), 6, Direction::lower_better},
      {std::string(kPeakCoincidence), 3, Direction::higher_better},
      {std::string(kEntropyWeekday), 4, Direction::lower_better},
      {std::string(kEntropyMonth), 4, Direction::lower_better},
      {std::string(kEntropyTotal), 5, Direction::lower_better},
      {std::string(kEntropyPeak), 5, Direction::lower_better},
  });
}

namespace {

const MeasureValue& value_of(const RunMeasures& run, const Measure& m) {
  auto it = run.values.find(m.name);
  if (it == run.values.end())
    throw ParameterError("run '" + run.run_id + "' has no value for measure '" + m.name + "'");
  return it->second;
}

// Rank of each entry of `runs` (indices into the full list) for one measure.
std::vector<double> rank_measure(std::span<const RunMeasures> all, const std::vector<std::size_t>& runs,
                                 const Measure& m) {
  std::vector<double> ranks(runs.size());
  if (m.direction == Direction::boolean_good) {
    std::size_t n_true = 0;
    std::vector<bool> flags;
    for (auto r : runs) {
      const auto* b = std::get_if<bool>(&value_of(all[r], m));
      if (!b) throw ParameterError("measure '" + m.name + "' expects a boolean value");
      flags.push_back(*b);
      n_true += *b ? 1 : 0;
    }
    for (std::size_t i = 0; i < runs.size(); ++i) ranks[i] = flags[i] ? 1.0 : static_cast<double>(n_true + 1);
    return ranks;
  }

  std::vector<double> values;
  for (auto r : runs) {
    const auto& v = value_of(all[r], m);
    if (const auto* d = std::get_if<double>(&v)) {
      values.push_back(*d);
    } else {
      values.push_back(std::get<bool>(v) ? 1.0 : 0.0);
    }
  }
  std::vector<std::size_t> order(runs.size());
  std::iota(order.begin(), order.end(), 0);
  const bool lower = m.direction == Direction::lower_better;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lower ? values[a] < values[b] : values[a] > values[b];
  });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean of ranks i+1..j+1
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::vector<RunScore> score_runs(std::span<const RunMeasures> runs, const ScoringMatrix& matrix) {
  if (runs.empty()) throw ParameterError("score_runs: no runs to score");

  std::vector<std::size_t> qualified;
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (!runs[i].disqualified) qualified.push_back(i);

  std::vector<RunScore> scores(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    scores[i].run_id = runs[i].run_id;
    scores[i].disqualified = runs[i].disqualified;
    scores[i].reason = runs[i].reason;
  }
  if (!qualified.empty()) {
    for (const auto& m : matrix.measures()) {
      const auto ranks = rank_measure(runs, qualified, m);
      for (std::size_t q = 0; q < qualified.size(); ++q) {
        auto& s = scores[qualified[q]];
        s.ranks.push_back(ranks[q]);
        s.total = s.total.value_or(0.0) + ranks[q] * m.weight;
      }
    }
  }

  std::stable_sort(scores.begin(), scores.end(), [](const RunScore& a, const RunScore& b) {
    if (a.disqualified != b.disqualified) return !a.disqualified;
    if (!a.disqualified && *a.total != *b.total) return *a.total < *b.total;
    return a.run_id < b.run_id;
  });
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].disqualified) {
      scores[i].final_rank = static_cast<int>(qualified.size()) + 1;
    } else if (i > 0 && scores[i].total == scores[i - 1].total) {
      scores[i].final_rank = scores[i - 1].final_rank;
    } else {
      scores[i].final_rank = static_cast<int>(i) + 1;
    }
  }
  return scores;
}

std::vector<SensitivityCase> weight_sensitivity(std::span<const RunMeasures> runs, const ScoringMatrix& matrix) {
  const auto baseline = score_runs(runs, matrix);
  std::vector<SensitivityCase> cases;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    const auto& m = matrix.measures()[i];
    for (int delta : {-1, +1}) {
      const int w = m.weight + delta;
      if (w < 1) continue;
      SensitivityCase c;
      c.measure = m.name;
      c.weight = w;
      for (const auto& s : score_runs(runs, matrix.with_weight(i, w))) c.order.push_back(s.run_id);
      c.top_changed = c.order.front() != baseline.front().run_id;
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

}  // namespace rdlp
