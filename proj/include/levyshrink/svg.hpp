#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace levyshrink::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool line = true;
  bool markers = false;
  bool dashed = false;
};

/// Vertical bars from lo to hi at each x.
struct Intervals {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#999999";
};

class Plot {
 public:
  Plot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void add(Intervals iv) { intervals_.push_back(std::move(iv)); }

  std::string render(int width = 640, int height = 420) const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string title_;
  std::string xlabel_;
  std::string ylabel_;
  std::vector<Series> series_;
  std::vector<Intervals> intervals_;
};

}  // namespace levyshrink::svg
