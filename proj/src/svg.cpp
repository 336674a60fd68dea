#include "hbart/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hbart/errors.hpp"

namespace hbart {

namespace {
constexpr double kW = 640.0, kH = 420.0;
constexpr double kL = 60.0, kR = 20.0, kT = 34.0, kB = 46.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}
}  // namespace

SvgPlot::SvgPlot(double xmin, double xmax, double ymin, double ymax,
                 std::string title, std::string xlabel, std::string ylabel)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax),
      title_(std::move(title)), xlabel_(std::move(xlabel)),
      ylabel_(std::move(ylabel)) {
  if (!(xmax_ > xmin_)) xmax_ = xmin_ + 1.0;
  if (!(ymax_ > ymin_)) ymax_ = ymin_ + 1.0;
}

double SvgPlot::px(double x) const {
  return kL + (x - xmin_) / (xmax_ - xmin_) * (kW - kL - kR);
}

double SvgPlot::py(double y) const {
  return kH - kB - (y - ymin_) / (ymax_ - ymin_) * (kH - kT - kB);
}

void SvgPlot::polyline(std::span<const double> x, std::span<const double> y,
                       const std::string& color, double width,
                       const std::string& dash) {
  std::string pts;
  for (std::size_t i = 0; i < x.size(); ++i)
    pts += num(px(x[i])) + "," + num(py(y[i])) + " ";
  std::string attr = "fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                     num(width) + "\"";
  if (!dash.empty()) attr += " stroke-dasharray=\"" + dash + "\"";
  body_.push_back("<polyline " + attr + " points=\"" + pts + "\"/>");
}

void SvgPlot::points(std::span<const double> x, std::span<const double> y,
                     const std::string& color, double radius) {
  for (std::size_t i = 0; i < x.size(); ++i)
    body_.push_back("<circle cx=\"" + num(px(x[i])) + "\" cy=\"" + num(py(y[i])) +
                    "\" r=\"" + num(radius) + "\" fill=\"" + color + "\"/>");
}

void SvgPlot::vsegment(double x, double ylo, double yhi, const std::string& color,
                       double width) {
  body_.push_back("<line x1=\"" + num(px(x)) + "\" y1=\"" + num(py(ylo)) +
                  "\" x2=\"" + num(px(x)) + "\" y2=\"" + num(py(yhi)) +
                  "\" stroke=\"" + color + "\" stroke-width=\"" + num(width) +
                  "\"/>");
}

void SvgPlot::hline(double y, const std::string& color, double width,
                    const std::string& dash) {
  std::string attr = "stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\"";
  if (!dash.empty()) attr += " stroke-dasharray=\"" + dash + "\"";
  body_.push_back("<line x1=\"" + num(kL) + "\" y1=\"" + num(py(y)) + "\" x2=\"" +
                  num(kW - kR) + "\" y2=\"" + num(py(y)) + "\" " + attr + "/>");
}

void SvgPlot::box(double x, double half_width, double q1, double med, double q3,
                  double wlo, double whi, const std::string& color) {
  const double x0 = px(x - half_width), x1 = px(x + half_width);
  body_.push_back("<rect x=\"" + num(x0) + "\" y=\"" + num(py(q3)) + "\" width=\"" +
                  num(x1 - x0) + "\" height=\"" + num(py(q1) - py(q3)) +
                  "\" fill=\"none\" stroke=\"" + color + "\"/>");
  body_.push_back("<line x1=\"" + num(x0) + "\" y1=\"" + num(py(med)) + "\" x2=\"" +
                  num(x1) + "\" y2=\"" + num(py(med)) + "\" stroke=\"" + color +
                  "\" stroke-width=\"2\"/>");
  vsegment(x, wlo, q1, color);
  vsegment(x, q3, whi, color);
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  // frame
  out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << (kW - kL - kR)
      << "\" height=\"" << (kH - kT - kB)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  // axis ticks (5 per axis)
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin_ + (xmax_ - xmin_) * t / 4.0;
    const double fy = ymin_ + (ymax_ - ymin_) * t / 4.0;
    out << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(kH - kB + 16)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx)
        << "</text>\n";
    out << "<text x=\"" << num(kL - 6) << "\" y=\"" << num(py(fy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(fy)
        << "</text>\n";
  }
  if (!title_.empty())
    out << "<text x=\"" << (kW / 2) << "\" y=\"20\" font-size=\"14\" "
        << "text-anchor=\"middle\">" << title_ << "</text>\n";
  if (!xlabel_.empty())
    out << "<text x=\"" << (kL + (kW - kL - kR) / 2) << "\" y=\"" << (kH - 10)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel_ << "</text>\n";
  if (!ylabel_.empty())
    out << "<text x=\"14\" y=\"" << (kT + (kH - kT - kB) / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << (kT + (kH - kT - kB) / 2) << ")\">" << ylabel_ << "</text>\n";
  // clip drawing to the frame
  out << "<clipPath id=\"plotarea\"><rect x=\"" << kL << "\" y=\"" << kT
      << "\" width=\"" << (kW - kL - kR) << "\" height=\"" << (kH - kT - kB)
      << "\"/></clipPath>\n<g clip-path=\"url(#plotarea)\">\n";
  for (const std::string& el : body_) out << el << "\n";
  out << "</g>\n</svg>\n";
}

}  // namespace hbart
