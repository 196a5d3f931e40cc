#include "cata/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cata::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Writer::Writer(std::string path, std::vector<std::string> header) : path_(std::move(path)) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void Writer::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_double(values[i]);
  }
  buf_ += '\n';
}

void Writer::row_raw(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += fields[i];
  }
  buf_ += '\n';
}

void Writer::flush() {
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path_);
  out << buf_;
}

int Table::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

double Table::num(std::size_t row, int c) const {
  return std::stod(rows.at(row).at(static_cast<std::size_t>(c)));
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

}  // namespace cata::csv
