#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rdlp {

enum class Direction { lower_better, higher_better, boolean_good };

std::string_view to_string(Direction direction);
Direction parse_direction(std::string_view name);

struct Measure {
  std::string name;
  int weight = 1;
  Direction direction = Direction::lower_better;
};

/// Measure names of the default matrix.
namespace measures {
inline constexpr std::string_view kSensibleCount = "sensible_count";
inline constexpr std::string_view kZeroProfile = "zero_profile";
inline constexpr std::string_view kErrorTotal = "consumption_error_total";
inline constexpr std::string_view kErrorPeak = "consumption_error_peak";
inline constexpr std::string_view kPeakCoincidence = "peak_coincidence";
inline constexpr std::string_view kEntropyWeekday = "entropy_weekday";
inline constexpr std::string_view kEntropyMonth = "entropy_month";
inline constexpr std::string_view kEntropyTotal = "entropy_total_demand";
inline constexpr std::string_view kEntropyPeak = "entropy_peak_demand";
}  // namespace measures

class ScoringMatrix {
 public:
  ScoringMatrix() = default;
  /// Throws ConfigError on non-positive weights or duplicate names.
  explicit ScoringMatrix(std::vector<Measure> measures);

  std::span<const Measure> measures() const noexcept { return measures_; }
  std::size_t size() const noexcept { return measures_.size(); }
  int total_weight() const;
  const Measure* find(std::string_view name) const;

  /// Copy with one measure's weight replaced.
  ScoringMatrix with_weight(std::size_t index, int weight) const;

 private:
  std::vector<Measure> measures_;
};

/// The nine-measure expert matrix: usability (sensible count 2, zero profile
/// 1), representativeness (consumption error total 6 / peak 6, peak
/// coincidence 3) and specificity (weekday 4, month 4, total demand 5, peak
/// demand 5).
ScoringMatrix default_matrix();

using MeasureValue = std::variant<double, bool>;

struct RunMeasures {
  std::string run_id;
  std::map<std::string, MeasureValue, std::less<>> values;
  bool disqualified = false;
  std::string reason;
};

struct RunScore {
  std::string run_id;
  std::vector<double> ranks;    ///< per matrix measure; empty when disqualified
  std::optional<double> total;  ///< sum of rank * weight
  int final_rank = 0;
  bool disqualified = false;
  std::string reason;
};

/// Ranks runs per measure (1 = best, ties share the mean rank; for boolean
/// measures true = 1 and false = number of true runs + 1), totals rank *
/// weight and orders runs by ascending total (ties by run id). Disqualified
/// runs follow, sharing the last rank. Throws ParameterError on an empty run
/// list or a qualified run missing a measure.
std::vector<RunScore> score_runs(std::span<const RunMeasures> runs, const ScoringMatrix& matrix);

struct SensitivityCase {
  std::string measure;
  int weight = 0;                  ///< perturbed weight
  std::vector<std::string> order;  ///< run ids in final order
  bool top_changed = false;
};

/// Re-scores with every weight moved by -1 and +1 (weights stay >= 1).
std::vector<SensitivityCase> weight_sensitivity(std::span<const RunMeasures> runs, const ScoringMatrix& matrix);

}  // namespace rdlp
