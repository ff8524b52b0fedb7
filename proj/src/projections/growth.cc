#include "snapsearch/projections/growth.h"

#include <algorithm>
#include <cmath>

#include "snapsearch/common/error.h"
#include "snapsearch/common/text_format.h"

namespace snapsearch {
namespace {

GrowthModel exponential(double factor, double period, double base_year,
                        double base_value, YearRange range) {
  if (!(period > 0)) throw ParameterError("growth period must be positive");
  if (!(base_value > 0)) throw ParameterError("exponential base value must be positive");
  auto f = [=](double y) { return base_value * std::pow(factor, (y - base_year) / period); };
  const std::string name = (factor == 2 ? "doubling every " : "tenfold every ") + format_number(period) + "y";
  return GrowthModel::custom(name, f, range);
}

}  // namespace

YearRange intersect(YearRange a, YearRange b) { return {std::max(a.first, b.first), std::min(a.last, b.last)}; }

GrowthModel GrowthModel::linear(double slope, double intercept, YearRange range) {
  GrowthModel m(Family::kLinear, "linear", range, [=](double y) { return slope * y + intercept; });
  m.params_[0] = slope;
  m.params_[1] = intercept;
  return m;
}

GrowthModel GrowthModel::fit_linear(const AnchorTable& anchors, YearRange range) {
  const auto& pts = anchors.points();
  if (pts.size() < 2) throw ParameterError("a linear fit needs two anchors");
  double mx = 0, my = 0;
  for (const Anchor& a : pts) {
    mx += a.year;
    my += a.value;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const Anchor& a : pts) {
    sxy += (a.year - mx) * (a.value - my);
    sxx += (a.year - mx) * (a.year - mx);
  }
  const double slope = sxy / sxx;
  return linear(slope, my - slope * mx, range);
}

GrowthModel GrowthModel::doubling_every(double period, double base_year, double base_value, YearRange range) {
  GrowthModel m = exponential(2, period, base_year, base_value, range);
  m.family_ = Family::kDoublingEvery;
  m.params_[0] = period;
  m.params_[1] = base_year;
  m.params_[2] = base_value;
  return m;
}

GrowthModel GrowthModel::tenfold_every(double period, double base_year, double base_value, YearRange range) {
  GrowthModel m = exponential(10, period, base_year, base_value, range);
  m.family_ = Family::kTenfoldEvery;
  m.params_[0] = period;
  m.params_[1] = base_year;
  m.params_[2] = base_value;
  return m;
}

GrowthModel GrowthModel::cubic_sigmoid(double start_year, double end_year, double end_value, double b, double c) {
  if (!(end_year > start_year)) throw ParameterError("cubic end year must follow its start year");
  const double X = end_year - start_year;
  auto f = [=](double y) {
    const double x = y - start_year;
    return end_value * x / X + b * (x * x - X * x) + c * (x * x * x - X * X * x);
  };
  GrowthModel m(Family::kCubicSigmoid, "cubic", {start_year, end_year}, f);
  m.params_[0] = b;
  m.params_[1] = c;
  return m;
}

GrowthModel GrowthModel::fit_cubic_sigmoid(double start_year, double end_year, double end_value,
                                           const AnchorTable& anchors) {
  const double X = end_year - start_year;
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (const Anchor& a : anchors.points()) {
    const double x = a.year - start_year;
    const double u = x * x - X * x;
    const double v = x * x * x - X * X * x;
    const double r = a.value - end_value * x / X;
    s11 += u * u;
    s12 += u * v;
    s22 += v * v;
    r1 += u * r;
    r2 += v * r;
  }
  const double det = s11 * s22 - s12 * s12;
  if (det == 0) throw ParameterError("cubic fit needs two anchors strictly inside the span");
  return cubic_sigmoid(start_year, end_year, end_value, (r1 * s22 - r2 * s12) / det, (s11 * r2 - s12 * r1) / det);
}

GrowthModel GrowthModel::interpolated(const AnchorTable& anchors) {
  return GrowthModel(Family::kAnchorInterpolated, "anchors", {anchors.first_year(), anchors.last_year()},
                     [anchors](double y) { return anchors.interpolate(y); });
}

GrowthModel GrowthModel::custom(std::string name, std::function<double(double)> f, YearRange range) {
  return GrowthModel(Family::kCustom, std::move(name), range, std::move(f));
}

double GrowthModel::operator()(double year) const {
  if (!range_.contains(year)) {
    throw RangeError(name_ + ": year " + format_number(year) + " outside " + format_number(range_.first) + ".." +
                     format_number(range_.last));
  }
  return f_(year);
}

GrowthModel GrowthModel::scaled(double factor) const {
  auto f = f_;
  return custom(format_number(factor) + "x " + name_, [f, factor](double y) { return factor * f(y); }, range_);
}

GrowthModel GrowthModel::renamed(std::string name) const {
  GrowthModel m = *this;
  m.name_ = std::move(name);
  return m;
}

}  // namespace snapsearch
