#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zeno::cli {

/// Malformed input table; message carries row and column.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-precision CSV writer: '#' provenance line, header, rows.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::string comment, std::vector<std::string> header);

  CsvWriter& num(double v);
  CsvWriter& integer(long long v);
  CsvWriter& text(const std::string& v);
  void end_row();

  /// Writes the file; throws std::runtime_error on I/O failure.
  void close();

 private:
  void sep();

  std::string path_;
  std::string body_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  bool closed_ = false;
};

/// %.9g, with "nan"/"inf" spelled out and -0 written as 0.
std::string format_number(double v);

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Reads a numeric CSV with a header row. Blank lines and lines starting
/// with '#' are skipped. Row numbers in errors are 1-based file lines.
NumericTable read_numeric_csv(const std::string& path, const std::vector<std::string>& required);

std::string sha256_hex(const std::string& bytes);

}  // namespace zeno::cli
