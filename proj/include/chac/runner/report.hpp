#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chac::runner {

struct CurvePoint {
  int episode = 0;
  int seeds = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

struct Curve {
  std::string label;
  std::vector<CurvePoint> points;
};

// Success-rate mean and population standard deviation per episode across
// metrics files. Files are grouped into one curve per label; by default the
// label is taken from an `eta<value>` token in the file name ("eta=<value>"),
// else "mean". Throws InvalidInput listing every file whose episode column
// does not align with the first file of its group.
std::vector<Curve> Aggregate(const std::vector<std::filesystem::path>& files,
                             const std::optional<std::string>& label = {});

// label,episode,seeds,success_rate_mean,success_rate_std
void WriteCurves(std::ostream& out, const std::vector<Curve>& curves);
std::vector<Curve> ReadCurves(std::istream& in);

struct PlotOptions {
  int width = 800;
  int height = 500;
  int smoothing = 1;  // moving-average window over points; 1 = off
  std::string title = "success rate";
};

// One mean polyline and a translucent +-1 std band per curve, with a legend.
void WriteSvg(std::ostream& out, const std::vector<Curve>& curves,
              const PlotOptions& options = {});

}  // namespace chac::runner
