#include "medfilter/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "medfilter/errors.hpp"

namespace medfilter {

namespace {

// Splits the whole file into records of fields. Quotes follow RFC 4180:
// a quoted field may contain commas, newlines and "" escapes.
std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false, field_started = false, record_started = false;

  auto end_field = [&] {
    fields.push_back(cur);
    cur.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
    record_started = false;
  };

  std::size_t i = 0;
  // Tolerate a UTF-8 BOM written by spreadsheet exports.
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;

  for (; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') { cur += '"'; ++i; }
        else in_quotes = false;
      } else {
        cur += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !cur.empty())
          throw IoError(path + ": stray quote inside unquoted field");
        in_quotes = true;
        field_started = record_started = true;
        break;
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;  // part of CRLF
        [[fallthrough]];
      case '\n':
        if (record_started || field_started || !cur.empty()) end_record();
        break;
      default:
        cur += c;
        field_started = record_started = true;
        break;
    }
  }
  if (in_quotes) throw IoError(path + ": unterminated quoted field");
  if (record_started || field_started || !cur.empty()) end_record();
  return records;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t row,
                  const std::string& col) {
  auto fail = [&](const char* why) -> IoError {
    return IoError(path + ": row " + std::to_string(row) + ", column '" + col +
                   "': " + why + (cell.empty() ? "" : " ('" + cell + "')"));
  };
  if (cell.empty()) throw fail("missing value");
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) throw fail("not a number");
  return v;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");

  auto records = parse_records(buf.str(), path);
  if (records.empty()) throw IoError(path + ": empty file");

  CsvTable tab;
  tab.header = records.front();
  const std::size_t k = tab.header.size();
  std::unordered_set<std::string> seen;
  for (const auto& h : tab.header) {
    if (h.empty()) throw IoError(path + ": empty column name in header");
    if (!seen.insert(h).second)
      throw IoError(path + ": duplicate column name '" + h + "'");
  }

  const std::size_t n = records.size() - 1;
  tab.values.resize(static_cast<long>(n), static_cast<long>(k));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != k)
      throw IoError(path + ": row " + std::to_string(r + 2) + " has " +
                    std::to_string(rec.size()) + " fields, expected " +
                    std::to_string(k));
    for (std::size_t c = 0; c < k; ++c)
      tab.values(static_cast<long>(r), static_cast<long>(c)) =
          parse_cell(rec[c], path, r + 2, tab.header[c]);
  }
  return tab;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values) {
  if (static_cast<long>(header.size()) != values.cols())
    throw DimensionMismatch("write_csv: header width != value columns");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << csv_field(header[c]);
  }
  out << '\n';
  for (long r = 0; r < values.rows(); ++r) {
    for (long c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << csv_number(values(r, c));
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace medfilter
