#include "rdlp/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "rdlp/error.hpp"

namespace rdlp {

namespace {

constexpr std::size_t kColumns = kHours + 2;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_reading(std::string_view text, std::size_t hour, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw DataError("reading h" + std::to_string(hour) + " is not numeric: '" + std::string(text) + "'",
                    line);
  }
  if (!std::isfinite(value) || value < 0.0) {
    throw DataError("reading h" + std::to_string(hour) + " must be finite and >= 0", line);
  }
  return value;
}

}  // namespace

std::string profile_csv_header() {
  std::string header = "household_id,date";
  for (std::size_t t = 0; t < kHours; ++t) header += ",h" + std::to_string(t);
  return header;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

ProfileSet read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("empty input: missing header", 1);
  ++line_no;
  if (trim(line) != profile_csv_header()) {
    throw DataError("header must be '" + profile_csv_header() + "'", line_no);
  }

  std::vector<DailyLoadProfile> profiles;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    if (fields.size() != kColumns) {
      throw DataError("expected " + std::to_string(kColumns) + " columns, found " +
                          std::to_string(fields.size()),
                      line_no);
    }
    DailyLoadProfile p;
    p.household_id = std::string(trim(fields[0]));
    if (p.household_id.empty()) throw DataError("empty household_id", line_no);
    try {
      p.date = parse_date(trim(fields[1]));
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    }
    for (std::size_t t = 0; t < kHours; ++t) p.values[t] = parse_reading(fields[t + 2], t, line_no);
    profiles.push_back(std::move(p));
  }
  return ProfileSet(std::move(profiles));
}

ProfileSet load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const ProfileSet& set) {
  out << profile_csv_header() << '\n';
  for (const auto& p : set) {
    out << p.household_id << ',' << format_date(p.date);
    for (double v : p.values) out << ',' << format_real(v);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const ProfileSet& set) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_csv(out, set);
}

}  // namespace rdlp
