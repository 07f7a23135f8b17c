#include "cli/csv.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zeno::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CsvWriter::CsvWriter(std::string path, std::string comment, std::vector<std::string> header)
    : path_(std::move(path)), columns_(header.size()) {
  body_ = "# " + comment + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) body_ += (i ? "," : "") + header[i];
  body_ += "\n";
}

void CsvWriter::sep() {
  if (in_row_ >= columns_) throw std::logic_error("CsvWriter: too many fields in row of " + path_);
  if (in_row_++ > 0) body_ += ',';
}

CsvWriter& CsvWriter::num(double v) {
  sep();
  body_ += format_number(v);
  return *this;
}

CsvWriter& CsvWriter::integer(long long v) {
  sep();
  body_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::text(const std::string& v) {
  sep();
  if (v.find_first_of(",\"\n") == std::string::npos) {
    body_ += v;
  } else {
    body_ += '"';
    for (char ch : v) body_ += ch == '"' ? std::string("\"\"") : std::string(1, ch == '\n' ? ' ' : ch);
    body_ += '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CsvWriter: short row in " + path_);
  body_ += '\n';
  in_row_ = 0;
}

void CsvWriter::close() {
  if (closed_) return;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  out << body_;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path_);
  closed_ = true;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

NumericTable read_numeric_csv(const std::string& path, const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw CsvError(path + ": cannot open");
  NumericTable t;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> pick;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto fields = split(s);
    for (auto& f : fields) f = trim(f);
    if (t.header.empty()) {
      t.header = fields;
      for (const auto& name : required) {
        std::size_t idx = fields.size();
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == name) idx = i;
        }
        if (idx == fields.size()) {
          throw CsvError(path + ":" + std::to_string(lineno) + ": header lacks required column '" + name + "'");
        }
        pick.push_back(idx);
      }
      t.columns.assign(required.size(), {});
      continue;
    }
    if (fields.size() != t.header.size()) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected " << t.header.size() << " fields, found " << fields.size();
      throw CsvError(os.str());
    }
    for (std::size_t c = 0; c < pick.size(); ++c) {
      const std::string& f = fields[pick[c]];
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v)) {
        std::ostringstream os;
        os << path << ":" << lineno << ": column " << pick[c] + 1 << " ('" << required[c]
           << "'): not a finite number: '" << f << "'";
        throw CsvError(os.str());
      }
      t.columns[c].push_back(v);
    }
  }
  if (t.header.empty()) throw CsvError(path + ": no header row");
  return t;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

}  // namespace zeno::cli
