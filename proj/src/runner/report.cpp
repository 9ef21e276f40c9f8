#include "chac/runner/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

#include "chac/common.hpp"

namespace chac::runner {

namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct SeedSeries {
  std::vector<int> episodes;
  std::vector<double> rates;
};

SeedSeries ReadMetrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + ": empty file");
  const auto header = SplitCsv(line);
  const auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InvalidInput(path.string() + ": missing column " + name);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ep_col = find("episode");
  const std::size_t rate_col = find("success_rate");
  SeedSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() <= std::max(ep_col, rate_col)) {
      throw InvalidInput(path.string() + ": short row");
    }
    s.episodes.push_back(std::stoi(cells[ep_col]));
    s.rates.push_back(std::stod(cells[rate_col]));
  }
  return s;
}

std::string DefaultLabel(const std::filesystem::path& path) {
  static const std::regex eta_token("eta([0-9.eE+-]+?)(_|\\.csv$|$)");
  std::smatch m;
  const std::string name = path.filename().string();
  if (std::regex_search(name, m, eta_token)) return "eta=" + m[1].str();
  return "mean";
}

std::string Real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string Fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string Escape(const std::string& s) {
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

std::vector<double> Smooth(const std::vector<double>& xs, int window) {
  if (window <= 1) return xs;
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                               ? i + 1 - static_cast<std::size_t>(window)
                               : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += xs[j];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

}  // namespace

std::vector<Curve> Aggregate(const std::vector<std::filesystem::path>& files,
                             const std::optional<std::string>& label) {
  if (files.empty()) throw InvalidInput("aggregate: no input files");
  std::map<std::string, std::vector<std::filesystem::path>> groups;
  std::vector<std::string> order;
  for (const auto& f : files) {
    const std::string l = label ? *label : DefaultLabel(f);
    if (!groups.contains(l)) order.push_back(l);
    groups[l].push_back(f);
  }

  std::vector<Curve> curves;
  std::vector<std::string> misaligned;
  for (const auto& l : order) {
    const auto& paths = groups[l];
    std::vector<SeedSeries> series;
    for (const auto& p : paths) series.push_back(ReadMetrics(p));
    for (std::size_t j = 1; j < series.size(); ++j) {
      if (series[j].episodes != series[0].episodes) {
        misaligned.push_back(paths[j].string());
      }
    }
    if (!misaligned.empty()) continue;

    Curve c;
    c.label = l;
    const double n = static_cast<double>(series.size());
    for (std::size_t r = 0; r < series[0].episodes.size(); ++r) {
      CurvePoint pt;
      pt.episode = series[0].episodes[r];
      pt.seeds = static_cast<int>(series.size());
      double sum = 0.0;
      for (const auto& s : series) sum += s.rates[r];
      pt.mean = sum / n;
      double sq = 0.0;
      for (const auto& s : series) sq += (s.rates[r] - pt.mean) * (s.rates[r] - pt.mean);
      pt.stddev = std::sqrt(sq / n);
      c.points.push_back(pt);
    }
    curves.push_back(std::move(c));
  }
  if (!misaligned.empty()) {
    std::string msg = "aggregate: episode rows do not align in:";
    for (const auto& m : misaligned) msg += " " + m;
    throw InvalidInput(msg);
  }
  return curves;
}

void WriteCurves(std::ostream& out, const std::vector<Curve>& curves) {
  out << "label,episode,seeds,success_rate_mean,success_rate_std\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << c.label << ',' << p.episode << ',' << p.seeds << ','
          << Real(p.mean) << ',' << Real(p.stddev) << '\n';
    }
  }
}

std::vector<Curve> ReadCurves(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("curves: empty input");
  if (line.rfind("label,episode", 0) != 0) {
    throw InvalidInput("curves: unexpected header");
  }
  std::vector<Curve> curves;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() != 5) throw InvalidInput("curves: malformed row: " + line);
    if (curves.empty() || curves.back().label != cells[0]) {
      curves.push_back({cells[0], {}});
    }
    curves.back().points.push_back({std::stoi(cells[1]), std::stoi(cells[2]),
                                    std::stod(cells[3]), std::stod(cells[4])});
  }
  return curves;
}

void WriteSvg(std::ostream& out, const std::vector<Curve>& curves,
              const PlotOptions& options) {
  if (curves.empty()) throw InvalidInput("plot: no curves");
  static const std::array<const char*, 8> palette = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  const double w = options.width;
  const double h = options.height;
  const double left = 70.0, right = 160.0, top = 40.0, bottom = 60.0;
  const double pw = w - left - right;
  const double ph = h - top - bottom;

  int max_ep = 1;
  int min_ep = 0;
  bool first = true;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (first || p.episode < min_ep) min_ep = p.episode;
      max_ep = std::max(max_ep, p.episode);
      first = false;
    }
  }
  const double span = std::max(1, max_ep - min_ep);
  auto sx = [&](double ep) { return left + (ep - min_ep) / span * pw; };
  auto sy = [&](double rate) {
    return top + (1.0 - std::clamp(rate, 0.0, 1.0)) * ph;
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
      << options.width << ' ' << options.height << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\""
      << options.height << "\" fill=\"white\"/>\n"
      << "  <text x=\"" << Fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << Escape(options.title)
      << "</text>\n";

  // axes and ticks
  out << "  <g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "    <line x1=\"" << Fixed(left) << "\" y1=\"" << Fixed(top + ph)
      << "\" x2=\"" << Fixed(left + pw) << "\" y2=\"" << Fixed(top + ph) << "\"/>\n"
      << "    <line x1=\"" << Fixed(left) << "\" y1=\"" << Fixed(top)
      << "\" x2=\"" << Fixed(left) << "\" y2=\"" << Fixed(top + ph) << "\"/>\n"
      << "  </g>\n";
  out << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double rate = t / 5.0;
    out << "    <text x=\"" << Fixed(left - 8) << "\" y=\"" << Fixed(sy(rate) + 4)
        << "\" text-anchor=\"end\">" << Fixed(rate) << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double ep = min_ep + span * t / 5.0;
    out << "    <text x=\"" << Fixed(sx(ep)) << "\" y=\"" << Fixed(top + ph + 18)
        << "\" text-anchor=\"middle\">" << static_cast<long>(std::lround(ep))
        << "</text>\n";
  }
  out << "  </g>\n"
      << "  <text x=\"" << Fixed(left + pw / 2) << "\" y=\"" << Fixed(h - 15)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
         "episodes</text>\n"
      << "  <text x=\"18\" y=\"" << Fixed(top + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << Fixed(top + ph / 2) << ")\">success rate</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = palette[ci % palette.size()];
    std::vector<double> mean, sd;
    for (const auto& p : c.points) {
      mean.push_back(p.mean);
      sd.push_back(p.stddev);
    }
    mean = Smooth(mean, options.smoothing);
    sd = Smooth(sd, options.smoothing);

    std::string upper, lower, line;
    for (std::size_t j = 0; j < c.points.size(); ++j) {
      const double x = sx(c.points[j].episode);
      line += Fixed(x) + "," + Fixed(sy(mean[j])) + " ";
      upper += Fixed(x) + "," + Fixed(sy(mean[j] + sd[j])) + " ";
    }
    for (std::size_t j = c.points.size(); j-- > 0;) {
      lower += Fixed(sx(c.points[j].episode)) + "," +
               Fixed(sy(mean[j] - sd[j])) + " ";
    }
    out << "  <g class=\"curve\" data-label=\"" << Escape(c.label) << "\">\n"
        << "    <polygon class=\"band\" points=\"" << upper << lower
        << "\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n"
        << "    <polyline class=\"mean\" points=\"" << line << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n"
        << "  </g>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(ci);
    out << "  <g class=\"legend-entry\">\n"
        << "    <line x1=\"" << Fixed(left + pw + 15) << "\" y1=\"" << Fixed(ly)
        << "\" x2=\"" << Fixed(left + pw + 40) << "\" y2=\"" << Fixed(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "    <text x=\"" << Fixed(left + pw + 46) << "\" y=\"" << Fixed(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << Escape(c.label)
        << "</text>\n"
        << "  </g>\n";
  }
  out << "</svg>\n";
}

}  // namespace chac::runner
