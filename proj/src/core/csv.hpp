#pragma once
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace dph {

// CSV writer with mandatory header; numbers carry 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) fail_config("cannot open output file: " + path);
    cols_ = header.size();
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) fail_config("csv row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
  size_t cols_ = 0;
};

}  // namespace dph
