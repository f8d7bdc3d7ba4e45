#pragma once
// Deterministic CSV emission: fixed %.12g formatting, '.' decimal separator,
// newline-terminated rows, header required.

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopmdp {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string> header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    row(std::vector<std::string>(header));
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void close() { out_.close(); }

 private:
  std::ofstream out_;
};

}  // namespace hopmdp
