#pragma once

#include <span>
#include <string>
#include <vector>

#include "hbart/data.hpp"

namespace hbart {

// Minimal static SVG line/point/interval plotting, enough for the
// diagnostic figures without an external plotting toolchain.
class SvgPlot {
 public:
  SvgPlot(double xmin, double xmax, double ymin, double ymax,
          std::string title = "", std::string xlabel = "", std::string ylabel = "");

  void polyline(std::span<const double> x, std::span<const double> y,
                const std::string& color, double width = 1.0,
                const std::string& dash = "");
  void points(std::span<const double> x, std::span<const double> y,
              const std::string& color, double radius = 1.5);
  void vsegment(double x, double ylo, double yhi, const std::string& color,
                double width = 1.0);
  void hline(double y, const std::string& color, double width = 1.0,
             const std::string& dash = "");
  // simple box-and-whisker glyph centered at x
  void box(double x, double half_width, double q1, double med, double q3,
           double wlo, double whi, const std::string& color);

  void write(const std::string& path) const;

 private:
  double px(double x) const;
  double py(double y) const;
  double xmin_, xmax_, ymin_, ymax_;
  std::string title_, xlabel_, ylabel_;
  std::vector<std::string> body_;
};

}  // namespace hbart
