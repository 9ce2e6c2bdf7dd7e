#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace subdep::csv {

/// 17 significant digits: enough for parse(format(x)) == x for every double.
std::string format_double(double value);

/// Strict parse of a full field; throws Error(Config) on trailing garbage.
double parse_double(std::string_view field);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws Error(Config) if absent.
  std::size_t column(std::string_view name) const;
};

/// Comma-separated, first line is the header, blank lines skipped. No quoting:
/// every CSV this project writes is purely numeric or bare identifiers.
Table read(std::istream& in);

void write_row(std::ostream& out, const std::vector<std::string>& fields);
void write_row(std::ostream& out, const std::vector<double>& values);

}  // namespace subdep::csv
