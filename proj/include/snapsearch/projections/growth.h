#pragma once

#include <functional>
#include <limits>
#include <string>

#include "snapsearch/projections/anchors.h"

namespace snapsearch {

struct YearRange {
  double first = -std::numeric_limits<double>::infinity();
  double last = std::numeric_limits<double>::infinity();

  bool contains(double year) const { return year >= first && year <= last; }
};

YearRange intersect(YearRange a, YearRange b);

// A quantity as a function of the (real) year. Evaluating outside the valid
// range throws RangeError.
class GrowthModel {
 public:
  enum class Family { kLinear, kDoublingEvery, kTenfoldEvery, kCubicSigmoid, kAnchorInterpolated, kCustom };

  static GrowthModel linear(double slope, double intercept, YearRange range = {});
  // Ordinary least squares over the table.
  static GrowthModel fit_linear(const AnchorTable& anchors, YearRange range = {});
  static GrowthModel doubling_every(double period, double base_year, double base_value, YearRange range = {});
  static GrowthModel tenfold_every(double period, double base_year, double base_value, YearRange range = {});
  // end_value * x / X + b (x^2 - X x) + c (x^3 - X^2 x) with x = year - start,
  // X = end - start: zero at start, end_value at end for any b and c.
  static GrowthModel cubic_sigmoid(double start_year, double end_year, double end_value, double b, double c);
  // Least-squares b and c through the anchors.
  static GrowthModel fit_cubic_sigmoid(double start_year, double end_year, double end_value,
                                       const AnchorTable& anchors);
  static GrowthModel interpolated(const AnchorTable& anchors);
  static GrowthModel custom(std::string name, std::function<double(double)> f, YearRange range);

  double operator()(double year) const;

  Family family() const { return family_; }
  const std::string& name() const { return name_; }
  YearRange range() const { return range_; }
  // Linear: slope and intercept. Exponential: period, base year, base value.
  // Cubic: b and c.
  double param(int i) const { return params_[i]; }

  // Same family tag dropped; values multiplied by `factor`.
  GrowthModel scaled(double factor) const;
  GrowthModel renamed(std::string name) const;

 private:
  GrowthModel(Family family, std::string name, YearRange range, std::function<double(double)> f)
      : family_(family), name_(std::move(name)), range_(range), f_(std::move(f)) {}

  Family family_;
  std::string name_;
  YearRange range_;
  std::function<double(double)> f_;
  double params_[3] = {0, 0, 0};
};

}  // namespace snapsearch
