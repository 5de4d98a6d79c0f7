#include "rdlp/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rdlp/error.hpp"

namespace rdlp {

namespace {

bool parse_digits(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_digits(text.substr(0, 4), y) ||
      !parse_digits(text.substr(5, 2), m) || !parse_digits(text.substr(8, 2), d)) {
    throw DataError("unparsable date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

int weekday_index(const Date& date) {
  // iso_encoding(): Monday = 1 ... Sunday = 7
  return static_cast<int>(std::chrono::weekday{std::chrono::sys_days{date}}.iso_encoding()) - 1;
}

int month_index(const Date& date) { return static_cast<int>(static_cast<unsigned>(date.month())); }

void validate(const DailyLoadProfile& profile) {
  for (std::size_t t = 0; t < kHours; ++t) {
    const double v = profile.values[t];
    if (!std::isfinite(v) || v < 0.0) {
      throw DataError("household '" + profile.household_id + "' " + format_date(profile.date) +
                      ": reading h" + std::to_string(t) + " must be finite and >= 0");
    }
  }
}

double total_demand(std::span<const double, kHours> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double peak_demand(std::span<const double, kHours> values) {
  return *std::max_element(values.begin(), values.end());
}

ProfileSet::ProfileSet(std::vector<DailyLoadProfile> profiles) : profiles_(std::move(profiles)) {
  weekdays_.reserve(profiles_.size());
  months_.reserve(profiles_.size());
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const auto& p = profiles_[i];
    if (!p.date.ok()) throw DataError("profile " + std::to_string(i) + ": invalid date");
    validate(p);
    weekdays_.push_back(weekday_index(p.date));
    months_.push_back(month_index(p.date));
  }
}

std::map<std::string, std::vector<std::size_t>> ProfileSet::households() const {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < profiles_.size(); ++i) groups[profiles_[i].household_id].push_back(i);
  return groups;
}

ProfileSet ProfileSet::select(std::span<const std::size_t> rows) const {
  ProfileSet out;
  out.profiles_.reserve(rows.size());
  out.weekdays_.reserve(rows.size());
  out.months_.reserve(rows.size());
  for (std::size_t r : rows) {
    out.profiles_.push_back(profiles_.at(r));
    out.weekdays_.push_back(weekdays_[r]);
    out.months_.push_back(months_[r]);
  }
  return out;
}

}  // namespace rdlp
