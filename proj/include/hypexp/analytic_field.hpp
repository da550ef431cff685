#pragma once

#include <string>
#include <vector>

#include "hypexp/grid_field.hpp"
#include "hypexp/jet.hpp"

namespace hypexp {

/// Closed-form boundary data with exact derivatives through Jet arithmetic.
class AnalyticField {
 public:
  enum class Kind { Constant, SphereCap, Polynomial, Trig };

  struct Monomial {
    int a = 0;  // power of y1
    int b = 0;  // power of y2
    double c = 0;
  };

  static AnalyticField constant(double v);
  /// R - sqrt(R^2 - |y'|^2), defined for |y'| < R.
  static AnalyticField sphere_cap(double R);
  static AnalyticField polynomial(std::vector<Monomial> terms);
  /// amp * sin(freq * y1) * cos(freq2 * y2).
  static AnalyticField trig(double freq, double amp, double freq2 = 0.0);

  /// Parses "sphere_cap:R=1", "constant:v=0", "trig:freq=1,amp=0.1",
  /// "polynomial:a20=0.5,a02=-0.5" (aIJ multiplies y1^I y2^J).
  static AnalyticField parse(const std::string& spec);
  std::string spec() const;

  Kind kind() const { return kind_; }
  double param(int k) const { return params_.at(k); }

  /// Taylor jet of the field at (y1, y2) in `dims` variables.
  Jet jet(double y1, double y2, int dims, int order) const;
  double value(double y1, double y2 = 0.0) const;
  GridField sample(const Grid& grid) const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> params_;
  std::vector<Monomial> mono_;
};

}  // namespace hypexp
