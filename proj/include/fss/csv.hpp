#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fss::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> cells;
};

// A parsed comma-separated file with a header row. Quoted fields follow
// RFC 4180 (doubled quotes inside quotes); embedded newlines are not
// supported.
class Table {
 public:
  Table(std::string source, std::vector<std::string> header, std::vector<Row> rows);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }

  // Index of a required column; throws InputError naming the file otherwise.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;

  // Cell accessors that produce "file:line:column" diagnostics.
  const std::string& text(const Row& row, std::size_t col) const;
  double real(const Row& row, std::size_t col) const;
  std::int64_t integer(const Row& row, std::size_t col) const;

  [[noreturn]] void fail(const Row& row, std::size_t col, const std::string& what) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

Table parse(std::string_view text, std::string source);
Table read_file(const std::filesystem::path& path);

std::vector<std::string> split_line(std::string_view line);
void write_row(std::ostream& out, std::span<const std::string> fields);

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace fss::csv
