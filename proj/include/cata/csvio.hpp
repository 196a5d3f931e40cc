#pragma once
#include <string>
#include <vector>

namespace cata::csv {

// Deterministic CSV writing: fixed %.12g formatting so identical doubles
// always produce identical bytes.
std::string format_double(double v);

class Writer {
 public:
  Writer(std::string path, std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row_raw(const std::vector<std::string>& fields);
  void flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buf_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const;  // -1 if absent
  double num(std::size_t row, int col) const;
};

Table read_table(const std::string& path);

}  // namespace cata::csv
