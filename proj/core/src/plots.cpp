#include "rdlp/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rdlp/csv_io.hpp"
#include "rdlp/error.hpp"

namespace rdlp {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 48.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Distinct hues around the colour wheel.
std::string colour(std::size_t i, std::size_t n) {
  const double hue = 360.0 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 1));
  return "hsl(" + fixed(hue) + ",65%,45%)";
}

void svg_open(std::ostream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "  <title>" << xml_escape(title) << "</title>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "  <line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::vector<fs::path> emit_plots(const RunRecord& record, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::size_t> shown;
  for (std::size_t k = 0; k < record.rdlps.size(); ++k)
    if (record.rdlps[k] && record.cluster_sizes[k] > 0) shown.push_back(k);

  std::ostringstream curves_csv, sizes_csv;
  curves_csv << "cluster_id,t,amperes\n";
  sizes_csv << "cluster_id,size\n";
  double peak = 0.0;
  std::size_t biggest = 0;
  for (auto k : shown) {
    const auto& r = *record.rdlps[k];
    for (std::size_t t = 0; t < kHours; ++t) curves_csv << k << ',' << t << ',' << format_real(r[t]) << '\n';
    sizes_csv << k << ',' << record.cluster_sizes[k] << '\n';
    peak = std::max(peak, peak_demand(r));
    biggest = std::max(biggest, record.cluster_sizes[k]);
  }
  if (peak <= 0.0) peak = 1.0;
  if (biggest == 0) biggest = 1;

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;

  std::ostringstream curves_svg;
  svg_open(curves_svg, record.run_id + " RDLPs (A)");
  for (std::size_t i = 0; i < shown.size(); ++i) {
    const auto& r = *record.rdlps[shown[i]];
    curves_svg << "  <polyline fill=\"none\" stroke=\"" << colour(i, shown.size()) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t t = 0; t < kHours; ++t) {
      const double x = kMargin + plot_w * static_cast<double>(t) / (kHours - 1);
      const double y = kHeight - kMargin - plot_h * r[t] / peak;
      curves_svg << (t ? " " : "") << fixed(x) << ',' << fixed(y);
    }
    curves_svg << "\"><title>cluster " << shown[i] << "</title></polyline>\n";
  }
  curves_svg << "  <text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
             << "\" text-anchor=\"middle\" font-size=\"12\">hour of day</text>\n</svg>\n";

  std::ostringstream sizes_svg;
  svg_open(sizes_svg, record.run_id + " cluster sizes");
  const double bar_w = shown.empty() ? 0.0 : plot_w / static_cast<double>(shown.size());
  for (std::size_t i = 0; i < shown.size(); ++i) {
    const double h = plot_h * static_cast<double>(record.cluster_sizes[shown[i]]) / static_cast<double>(biggest);
    sizes_svg << "  <rect x=\"" << fixed(kMargin + bar_w * static_cast<double>(i)) << "\" y=\""
              << fixed(kHeight - kMargin - h) << "\" width=\"" << fixed(std::max(bar_w - 1.0, 0.5)) << "\" height=\""
              << fixed(h) << "\" fill=\"" << colour(i, shown.size()) << "\"><title>cluster " << shown[i] << ": "
              << record.cluster_sizes[shown[i]] << "</title></rect>\n";
  }
  sizes_svg << "</svg>\n";

  const std::vector<std::pair<fs::path, std::string>> files = {
      {dir / "rdlp_curves.csv", curves_csv.str()},
      {dir / "cluster_sizes.csv", sizes_csv.str()},
      {dir / "rdlp_curves.svg", curves_svg.str()},
      {dir / "cluster_sizes.svg", sizes_svg.str()},
  };
  std::vector<fs::path> written;
  for (const auto& [path, text] : files) {
    write_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace rdlp
