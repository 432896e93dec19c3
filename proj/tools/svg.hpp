#pragma once

#include <string>
#include <vector>

namespace frachc::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<Series> series;
};

std::string render_svg(const Plot& plot);
void save_svg(const std::string& path, const Plot& plot);

}  // namespace frachc::io
