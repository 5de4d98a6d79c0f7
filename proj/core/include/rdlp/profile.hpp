#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdlp {

inline constexpr std::size_t kHours = 24;
inline constexpr int kWeekdays = 7;
inline constexpr int kMonths = 12;

using HourlyValues = std::array<double, kHours>;
using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws DataError.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Day of week with Monday = 0 ... Sunday = 6.
int weekday_index(const Date& date);
/// Calendar month, 1..12.
int month_index(const Date& date);

/// One household-day: hourly mean current in Amperes. values[t] covers the
/// hour starting at t:00:00.
struct DailyLoadProfile {
  std::string household_id;
  Date date{};
  HourlyValues values{};
};

/// Throws DataError unless every reading is finite and non-negative.
void validate(const DailyLoadProfile& profile);

double total_demand(std::span<const double, kHours> values);
double peak_demand(std::span<const double, kHours> values);
inline double total_demand(const DailyLoadProfile& p) { return total_demand(p.values); }
inline double peak_demand(const DailyLoadProfile& p) { return peak_demand(p.values); }

/// Immutable, ordered collection of daily load profiles with derived
/// calendar features.
class ProfileSet {
 public:
  ProfileSet() = default;
  /// Validates every profile; throws DataError naming the offending index.
  explicit ProfileSet(std::vector<DailyLoadProfile> profiles);

  std::size_t size() const noexcept { return profiles_.size(); }
  bool empty() const noexcept { return profiles_.empty(); }

  const DailyLoadProfile& operator[](std::size_t i) const { return profiles_[i]; }
  std::span<const DailyLoadProfile> profiles() const noexcept { return profiles_; }
  auto begin() const noexcept { return profiles_.begin(); }
  auto end() const noexcept { return profiles_.end(); }

  int weekday(std::size_t i) const { return weekdays_[i]; }
  int month(std::size_t i) const { return months_[i]; }
  std::span<const int> weekdays() const noexcept { return weekdays_; }
  std::span<const int> months() const noexcept { return months_; }

  /// Row indices of every household, keyed by household id.
  std::map<std::string, std::vector<std::size_t>> households() const;

  /// Subset in the order given by `rows`.
  ProfileSet select(std::span<const std::size_t> rows) const;

 private:
  std::vector<DailyLoadProfile> profiles_;
  std::vector<int> weekdays_;
  std::vector<int> months_;
};

}  // namespace rdlp
