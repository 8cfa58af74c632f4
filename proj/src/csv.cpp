#include "ossp/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "ossp/error.hpp"

namespace ossp {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits one line into fields, honouring double-quoted fields.
std::vector<std::string> split_line(const std::string& line, int lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = true;
      was_quoted = true;
      cur.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else if (was_quoted) {
      if (c != ' ' && c != '\t' && c != '\r') {
        throw ParseError("line " + std::to_string(lineno) + ": text after closing quote");
      }
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(lineno) + ": unterminated quote");
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

double parse_weight(const std::string& s, int lineno) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError("line " + std::to_string(lineno) + ": bad weight '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<Record> read_records(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::vector<Record> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_line(line, lineno);
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "weight" || fields[1] != "species") {
        throw ParseError("line " + std::to_string(lineno) + ": expected header 'weight,species'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 2 fields, got " +
                       std::to_string(fields.size()));
    }
    out.push_back({parse_weight(fields[0], lineno), std::move(fields[1])});
  }
  if (!header_seen) throw ParseError("missing header 'weight,species'");
  return out;
}

std::vector<Record> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_records(in);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_records(std::ostream& out, const std::vector<Record>& records) {
  out << "weight,species\n";
  for (const auto& r : records) out << format_double(r.weight) << ',' << csv_field(r.species) << '\n';
}

}  // namespace ossp
