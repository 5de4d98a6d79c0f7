#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rdlp/profile.hpp"

namespace rdlp {

/// `household_id,date,h0,h1,...,h23`
std::string profile_csv_header();

/// Reads the profile CSV format. Rows keep file order. Any malformed row
/// (column count, negative or non-numeric reading, bad date) raises a
/// DataError carrying the file line number.
ProfileSet read_csv(std::istream& in);
ProfileSet load_csv(const std::filesystem::path& path);

/// Writes readings in shortest round-trip form, so read_csv(write_csv(x))
/// reproduces x exactly.
void write_csv(std::ostream& out, const ProfileSet& set);
void write_csv(const std::filesystem::path& path, const ProfileSet& set);

/// Shortest decimal representation that parses back to `value`.
std::string format_real(double value);

}  // namespace rdlp
