#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace levyshrink::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each row.
  std::vector<std::size_t> lines;
};

/// RFC-4180 reader: quoted fields, doubled quotes, CRLF.  The first record is the header.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format(double v);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
};

}  // namespace levyshrink::csv
