#pragma once

// Minimal CSV reading used by the panel/weights file formats.

#include <string>
#include <vector>

namespace epicount {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

/// Reads a comma-separated file with a mandatory header row.
/// Fields are trimmed of surrounding whitespace; empty lines are skipped.
CsvTable read_csv(const std::string& path);

/// Parses an exact (possibly negative) integer; throws std::invalid_argument
/// with `what_for` in the message on any non-integer content.
long long parse_integer(const std::string& field, const std::string& what_for);

/// Parses a decimal number; throws std::invalid_argument on garbage.
double parse_decimal(const std::string& field, const std::string& what_for);

}  // namespace epicount
