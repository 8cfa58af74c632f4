#ifndef OSSP_CSV_HPP
#define OSSP_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ossp/partition.hpp"

namespace ossp {

/// Parses `weight,species` CSV (header required, UTF-8, RFC 4180 quoting for
/// the species field). Throws ParseError with the offending line number.
std::vector<Record> read_records(std::istream& in);
std::vector<Record> read_records_file(const std::string& path);

void write_records(std::ostream& out, const std::vector<Record>& records);

/// Shortest round-trippable decimal for a double.
std::string format_double(double x);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace ossp

#endif  // OSSP_CSV_HPP
