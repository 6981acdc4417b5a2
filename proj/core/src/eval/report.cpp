/*
 * Copyright 2026 The wumrsi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wumrsi/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "wumrsi/common/error.hpp"

namespace wumrsi::eval {
namespace {

std::string num(double v)
{
  if (!std::isfinite(v)) {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path.string() + ": cannot open for writing");
  }
  out << text;
  if (!out) {
    throw IoError(path.string() + ": write failed");
  }
}

std::string csv_escape(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

struct Frame {
  double x0 = 70.0;
  double y0 = 30.0;
  double w = 520.0;
  double h = 300.0;
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double y(double v) const { return y0 + h * (1.0 - (v - lo) / (hi - lo)); }
};

void axis(std::ostringstream &s, const Frame &f, const std::string &y_label)
{
  s << "<line x1=\"" << f.x0 << "\" y1=\"" << f.y0 << "\" x2=\"" << f.x0 << "\" y2=\"" << f.y0 + f.h
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << f.x0 << "\" y1=\"" << f.y0 + f.h << "\" x2=\"" << f.x0 + f.w << "\" y2=\"" << f.y0 + f.h
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = f.lo + (f.hi - f.lo) * k / 4.0;
    s << "<text x=\"" << f.x0 - 6 << "\" y=\"" << f.y(v) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << num(v)
      << "</text>\n";
  }
  s << "<text x=\"16\" y=\"" << f.y0 + f.h / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
    << f.y0 + f.h / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
}

std::pair<double, double> padded_range(double lo, double hi)
{
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    return {0.0, 1.0};
  }
  if (hi - lo < 1e-12) {
    return {lo - 1.0, hi + 1.0};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string file_tag(const std::string &s)
{
  std::string out = s;
  for (char &c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) {
      c = '_';
    }
  }
  return out;
}

std::string svg_box_plot(const std::vector<std::string> &labels, const std::vector<std::vector<double>> &series,
                         const std::string &y_label)
{
  if (labels.size() != series.size()) {
    throw InvalidArgument("svg_box_plot: label and series counts differ");
  }
  std::vector<Summary> sums;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &v : series) {
    sums.push_back(summarize(v));
    if (sums.back().n > 0) {
      lo = std::min(lo, sums.back().min);
      hi = std::max(hi, sums.back().max);
    }
  }
  Frame f;
  std::tie(f.lo, f.hi) = padded_range(lo, hi);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"620\" height=\"380\">\n";
  axis(s, f, y_label);
  const double slot = series.empty() ? f.w : f.w / static_cast<double>(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double cx = f.x0 + slot * (static_cast<double>(i) + 0.5);
    const double bw = std::min(60.0, 0.5 * slot);
    const Summary &m = sums[i];
    s << "<text x=\"" << cx << "\" y=\"" << f.y0 + f.h + 18 << "\" font-size=\"12\" text-anchor=\"middle\">"
      << labels[i] << " (n=" << m.n << ")</text>\n";
    if (m.n == 0) {
      continue;
    }
    s << "<line x1=\"" << cx << "\" y1=\"" << f.y(m.min) << "\" x2=\"" << cx << "\" y2=\"" << f.y(m.max)
      << "\" stroke=\"black\"/>\n";
    s << "<rect x=\"" << cx - bw / 2 << "\" y=\"" << f.y(m.q3) << "\" width=\"" << bw << "\" height=\""
      << std::max(f.y(m.q1) - f.y(m.q3), 0.5) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << cx - bw / 2 << "\" y1=\"" << f.y(m.median) << "\" x2=\"" << cx + bw / 2 << "\" y2=\""
      << f.y(m.median) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    s << "<circle cx=\"" << cx << "\" cy=\"" << f.y(m.mean) << "\" r=\"3\" fill=\"#d62728\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_bland_altman(const BlandAltman &ba, const std::string &title)
{
  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  double ylo = std::min(ba.loa_low, 0.0);
  double yhi = std::max(ba.loa_high, 0.0);
  for (const auto &[m, d] : ba.pairs) {
    xlo = std::min(xlo, m);
    xhi = std::max(xhi, m);
    ylo = std::min(ylo, d);
    yhi = std::max(yhi, d);
  }
  Frame f;
  std::tie(f.lo, f.hi) = padded_range(ylo, yhi);
  const auto [mx0, mx1] = padded_range(xlo, xhi);
  const auto x = [&](double v) { return f.x0 + f.w * (v - mx0) / (mx1 - mx0); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"620\" height=\"380\">\n";
  s << "<text x=\"" << f.x0 + f.w / 2 << "\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">" << title
    << "</text>\n";
  axis(s, f, ba.difference == Difference::percent ? "difference (%)" : "difference");
  for (const auto &[m, d] : ba.pairs) {
    s << "<circle cx=\"" << x(m) << "\" cy=\"" << f.y(d) << "\" r=\"2\" fill=\"#1f77b4\"/>\n";
  }
  const auto hline = [&](double v, const char *colour, const char *dash) {
    s << "<line x1=\"" << f.x0 << "\" y1=\"" << f.y(v) << "\" x2=\"" << f.x0 + f.w << "\" y2=\"" << f.y(v)
      << "\" stroke=\"" << colour << "\" stroke-dasharray=\"" << dash << "\"/>\n";
  };
  hline(ba.bias, "black", "none");
  hline(ba.loa_low, "#d62728", "4 3");
  hline(ba.loa_high, "#d62728", "4 3");
  s << "<text x=\"" << f.x0 + f.w / 2 << "\" y=\"" << f.y0 + f.h + 30
    << "\" font-size=\"12\" text-anchor=\"middle\">mean of measurements</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::vector<std::filesystem::path> write_benchmark_report(const std::filesystem::path &dir,
                                                          const std::vector<EvalReport> &reports)
{
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  if (reports.empty()) {
    return files;
  }
  const std::string id = file_tag(reports.front().benchmark_id);
  std::ostringstream summary;
  summary << "# nrmse_percent = 100*|est-truth|_2/|truth|_2 per spectrum over " << reports.front().window << "\n";
  summary << "benchmark,method,n_cases,n_failed,mean,median,q1,q3,min,max,seconds\n";
  std::vector<std::string> labels;
  std::vector<std::vector<double>> series;
  for (const auto &r : reports) {
    std::ostringstream cases;
    cases << "# nrmse_percent = 100*|est-truth|_2/|truth|_2 over " << r.window << "\n";
    cases << "case,voxel,nrmse_percent,failure\n";
    for (std::size_t i = 0; i < r.voxels.size(); ++i) {
      cases << i << "," << r.voxels[i] << "," << num(r.nrmse_per_case[i]) << "," << csv_escape(r.failure[i]) << "\n";
    }
    const auto path = dir / (id + "_" + file_tag(r.method_tag) + "_nrmse.csv");
    write_text(path, cases.str());
    files.push_back(path);
    const Summary &m = r.summary;
    summary << csv_escape(r.benchmark_id) << "," << csv_escape(r.method_tag) << "," << r.voxels.size() << ","
            << r.n_failed << "," << num(m.mean) << "," << num(m.median) << "," << num(m.q1) << "," << num(m.q3)
            << "," << num(m.min) << "," << num(m.max) << "," << num(r.seconds) << "\n";
    labels.push_back(r.method_tag);
    series.push_back(r.nrmse_per_case);
  }
  const auto sp = dir / (id + "_summary.csv");
  write_text(sp, summary.str());
  files.push_back(sp);
  const auto svg = dir / (id + "_nrmse_box.svg");
  write_text(svg, svg_box_plot(labels, series, "NRMSE (%)"));
  files.push_back(svg);
  return files;
}

std::vector<std::filesystem::path> write_bland_altman(const std::filesystem::path &dir, const std::string &name,
                                                      const BlandAltman &ba)
{
  std::filesystem::create_directories(dir);
  const std::string tag = file_tag(name);
  std::ostringstream csv;
  csv << "# difference = " << (ba.difference == Difference::percent ? "200*(a-b)/(a+b)" : "a-b") << "; bias "
      << num(ba.bias) << "; limits " << num(ba.loa_low) << " " << num(ba.loa_high) << "; n " << ba.n << "\n";
  csv << "mean,difference\n";
  for (const auto &[m, d] : ba.pairs) {
    csv << num(m) << "," << num(d) << "\n";
  }
  const auto cp = dir / (tag + "_bland_altman.csv");
  write_text(cp, csv.str());
  const auto sp = dir / (tag + "_bland_altman.svg");
  write_text(sp, svg_bland_altman(ba, name));
  return {cp, sp};
}

}  // namespace wumrsi::eval
