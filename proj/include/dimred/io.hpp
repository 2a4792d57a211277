#pragma once

// Delimited-table ingestion and emission. Input is RFC-4180-style text
// (configurable delimiter, quoted fields, LF or CRLF); output is CSV with 17
// significant digits so every double round-trips.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimred/error.hpp"
#include "dimred/mca.hpp"
#include "dimred/types.hpp"

namespace dimred {
namespace io {

enum class HeaderMode { Auto, Yes, No };

struct IngestOptions {
  char delimiter = ',';
  HeaderMode header = HeaderMode::Auto;
  std::vector<std::string> categorical;  // column names (or 1-based indices) to expand
  std::string id_column;                 // optional column holding row labels
  bool auto_categorical = false;         // treat non-numeric columns as categorical
};

struct IngestedTable {
  Matrix numeric;                             // all numeric columns, input order
  std::vector<std::string> numeric_names;     // their headers
  std::vector<IndicatorMatrix> categorical;   // expanded categorical columns
  std::vector<std::string> categorical_names; // their headers
  std::vector<std::string> row_ids;           // from the id column or "1".."n"
};

namespace detail {

struct RawTable {
  std::vector<std::vector<std::string>> cells;  // data rows
  std::vector<std::string> header;              // empty if none
};

inline bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  if (begin < end && *begin == '+') ++begin;  // from_chars rejects a leading +
  if (begin == end) return false;
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

/// Split one logical CSV record; `line_no` is 1-based for error messages.
/// Quoted fields may contain the delimiter and doubled quotes.
inline std::vector<std::string> split_record(const std::string& line, char delimiter,
                                             std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == delimiter) {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw ParseError(line_no, fields.size() + 1, "line " + std::to_string(line_no) +
                                                     ": unterminated quoted field");
  }
  fields.push_back(field);
  return fields;
}

inline RawTable read_raw(std::istream& in, char delimiter, HeaderMode header) {
  RawTable raw;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();  // CRLF
    if (line.empty()) continue;
    records.push_back(split_record(line, delimiter, line_no));
    record_lines.push_back(line_no);
    if (records.back().size() != records.front().size()) {
      throw ParseError(line_no, records.back().size(),
                       "line " + std::to_string(line_no) + ": expected " +
                           std::to_string(records.front().size()) + " fields, got " +
                           std::to_string(records.back().size()));
    }
  }
  if (records.empty()) {
    throw ParseError(0, 0, "empty input table");
  }

  bool has_header = header == HeaderMode::Yes;
  if (header == HeaderMode::Auto) {
    // a first row with any non-numeric cell is a header
    double dummy = 0.0;
    has_header = false;
    for (const std::string& cell : records.front()) {
      if (!parse_double(cell, dummy)) {
        has_header = true;
        break;
      }
    }
  }
  if (has_header) {
    raw.header = records.front();
    records.erase(records.begin());
    if (records.empty()) {
      throw ParseError(1, 0, "table has a header but no data rows");
    }
  }
  raw.cells = std::move(records);
  return raw;
}

inline bool name_matches(const std::string& selector, const std::string& column_name,
                         std::size_t column_index) {
  if (selector == column_name) return true;
  // 1-based index selectors work with or without headers
  return selector == std::to_string(column_index + 1);
}

}  // namespace detail

/// Parse a delimited table into numeric columns and (declared or detected)
/// categorical indicator blocks. Cells of a numeric column that do not parse
/// raise ParseError with their 1-based position; a declared-numeric column
/// mixing kinds raises MixedTypeError naming the column.
inline IngestedTable ingest_table(std::istream& in, const IngestOptions& options = {}) {
  const detail::RawTable raw = detail::read_raw(in, options.delimiter, options.header);
  const std::size_t n_rows = raw.cells.size();
  const std::size_t n_cols = raw.cells.front().size();

  auto column_name = [&](std::size_t j) {
    return j < raw.header.size() ? raw.header[j] : "column " + std::to_string(j + 1);
  };
  // data rows start after the header, if any
  const std::size_t first_data_line = raw.header.empty() ? 1 : 2;

  IngestedTable out;
  out.row_ids.reserve(n_rows);

  std::optional<std::size_t> id_col;
  std::vector<bool> is_categorical(n_cols, false);
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (!options.id_column.empty() &&
        detail::name_matches(options.id_column, column_name(j), j)) {
      id_col = j;
      continue;
    }
    for (const std::string& selector : options.categorical) {
      if (detail::name_matches(selector, column_name(j), j)) {
        is_categorical[j] = true;
        break;
      }
    }
  }
  if (!options.id_column.empty() && !id_col) {
    throw ConfigError("id column '" + options.id_column + "' not found");
  }

  for (std::size_t i = 0; i < n_rows; ++i) {
    out.row_ids.push_back(id_col ? raw.cells[i][*id_col] : std::to_string(i + 1));
  }

  std::vector<std::size_t> numeric_cols;
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (id_col && j == *id_col) continue;
    if (is_categorical[j]) {
      std::vector<std::string> codes(n_rows);
      for (std::size_t i = 0; i < n_rows; ++i) codes[i] = raw.cells[i][j];
      out.categorical.push_back(indicator_from_categories(codes));
      out.categorical_names.push_back(column_name(j));
      continue;
    }
    // probe the column
    std::size_t bad = n_rows;
    std::size_t good = 0;
    double value = 0.0;
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (detail::parse_double(raw.cells[i][j], value)) {
        ++good;
      } else if (bad == n_rows) {
        bad = i;
      }
    }
    if (bad == n_rows) {
      numeric_cols.push_back(j);
    } else if (options.auto_categorical) {
      std::vector<std::string> codes(n_rows);
      for (std::size_t i = 0; i < n_rows; ++i) codes[i] = raw.cells[i][j];
      out.categorical.push_back(indicator_from_categories(codes));
      out.categorical_names.push_back(column_name(j));
    } else if (good > 0) {
      throw ParseError(first_data_line + bad, j + 1,
                       "line " + std::to_string(first_data_line + bad) + ", column " +
                           std::to_string(j + 1) + " (" + column_name(j) +
                           "): cell '" + raw.cells[bad][j] + "' is not numeric");
    } else {
      throw MixedTypeError(column_name(j), "column " + column_name(j) +
                                               " is not numeric; declare it categorical");
    }
  }

  out.numeric = Matrix(static_cast<Index>(n_rows), static_cast<Index>(numeric_cols.size()));
  for (std::size_t c = 0; c < numeric_cols.size(); ++c) {
    const std::size_t j = numeric_cols[c];
    out.numeric_names.push_back(column_name(j));
    for (std::size_t i = 0; i < n_rows; ++i) {
      double value = 0.0;
      detail::parse_double(raw.cells[i][j], value);
      out.numeric(static_cast<Index>(i), static_cast<Index>(c)) = value;
    }
  }
  return out;
}

inline IngestedTable ingest_file(const std::string& path, const IngestOptions& options = {}) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open input file '" + path + "'");
  }
  return ingest_table(in, options);
}

/// Read a plain numeric matrix (no categorical expansion).
inline Matrix read_matrix(const std::string& path, char delimiter = ',',
                          HeaderMode header = HeaderMode::Auto) {
  IngestOptions options;
  options.delimiter = delimiter;
  options.header = header;
  return ingest_file(path, options).numeric;
}

/// Read a vector: a single-column (or single-row) numeric table.
inline Vector read_vector(const std::string& path, char delimiter = ',') {
  const Matrix m = read_matrix(path, delimiter, HeaderMode::Auto);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw DimensionMismatchError("expected a vector in '" + path + "', got " +
                               std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

/// 17 significant digits: the shortest format that round-trips any double.
inline std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

inline std::string quote_csv_field(const std::string& field, char delimiter) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

/// Write a matrix as CSV with a header row and one id column. Empty
/// `row_ids` drops the id column; empty `col_names` generates c1..cp.
inline void write_matrix_csv(std::ostream& out, const Matrix& m,
                             const std::vector<std::string>& row_ids = {},
                             std::vector<std::string> col_names = {},
                             const std::string& id_header = "id") {
  if (col_names.empty()) {
    for (Index j = 0; j < m.cols(); ++j) col_names.push_back("c" + std::to_string(j + 1));
  }
  const bool with_ids = !row_ids.empty();
  if (with_ids) out << quote_csv_field(id_header, ',');
  for (Index j = 0; j < m.cols(); ++j) {
    if (with_ids || j > 0) out << ',';
    out << quote_csv_field(col_names[static_cast<std::size_t>(j)], ',');
  }
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    if (with_ids) out << quote_csv_field(row_ids[static_cast<std::size_t>(i)], ',');
    for (Index j = 0; j < m.cols(); ++j) {
      if (with_ids || j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline void write_matrix_csv_file(const std::string& path, const Matrix& m,
                                  const std::vector<std::string>& row_ids = {},
                                  std::vector<std::string> col_names = {},
                                  const std::string& id_header = "id") {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  write_matrix_csv(out, m, row_ids, std::move(col_names), id_header);
}

}  // namespace io
}  // namespace dimred
