// Copyright 2026 The dsfkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar nonlinearities for deep submodular (concave units) and deep
// supermodular (convex units) functions.
//
// Every unit is normalized, phi(0) = 0, and monotone non-decreasing on the
// non-negative reals. A unit carries an optional non-negative shift b and
// evaluates phi_b(x) = base(x + b) - base(b), which is how biases enter a
// model without breaking normalization.

#ifndef DSFKIT_CONCAVE_HPP_
#define DSFKIT_CONCAVE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsfkit/core.hpp"

namespace dsfkit {

enum class UnitKind {
  kIdentity,
  kSqrt,
  kPower,            // x^p; concave for p < 1, convex for p > 1
  kLogGamma,         // gamma * log(1 + x / gamma)
  kTruncate,         // min(x, gamma)
  kOneMinusExp,      // 1 - exp(-x)
  kShiftedSigmoid,   // 1 / (1 + exp(-s x)) - 1/2
  kSoftMin,          // ((x^-a + c^-a) / 2)^(-1/a), shifted to 0 at 0
  kLinThenSqrt,      // min(sqrt(x / gamma), x / gamma)
  kPiecewiseLinear,  // slopes s0, s1, ... between breakpoints b1 < b2 < ...
  kExpMinusOne,      // exp(x) - 1 (convex)
};

enum class Curvature { kLinear, kConcave, kConvex };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::string_view unit_kind_name(UnitKind k) {
  switch (k) {
    case UnitKind::kIdentity:
      return "identity";
    case UnitKind::kSqrt:
      return "sqrt";
    case UnitKind::kPower:
      return "power";
    case UnitKind::kLogGamma:
      return "log_gamma";
    case UnitKind::kTruncate:
      return "truncate";
    case UnitKind::kOneMinusExp:
      return "one_minus_exp";
    case UnitKind::kShiftedSigmoid:
      return "shifted_sigmoid";
    case UnitKind::kSoftMin:
      return "soft_min";
    case UnitKind::kLinThenSqrt:
      return "lin_then_sqrt";
    case UnitKind::kPiecewiseLinear:
      return "piecewise_linear";
    case UnitKind::kExpMinusOne:
      return "exp_minus_one";
  }
  return "?";
}

inline UnitKind unit_kind_from_name(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(UnitKind::kExpMinusOne); ++k) {
    auto kind = static_cast<UnitKind>(k);
    if (unit_kind_name(kind) == name) return kind;
  }
  throw Error("unknown unit kind '" + std::string(name) + "'");
}

struct SupergradientInterval {
  double d_min = 0.0;
  double d_max = 0.0;
  double midpoint() const {
    if (d_min == kInf || d_max == kInf) return kInf;
    return 0.5 * (d_min + d_max);
  }
};

class ConcaveUnit {
 public:
  ConcaveUnit() = default;
  ConcaveUnit(UnitKind kind, std::vector<double> params, double shift = 0.0)
      : kind_(kind), params_(std::move(params)), shift_(shift) {
    validate();
  }

  UnitKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double shift() const { return shift_; }

  ConcaveUnit with_params(std::vector<double> params) const {
    return ConcaveUnit(kind_, std::move(params), shift_);
  }
  ConcaveUnit with_shift(double shift) const {
    return ConcaveUnit(kind_, params_, shift);
  }

  Curvature curvature() const {
    switch (kind_) {
      case UnitKind::kIdentity:
        return Curvature::kLinear;
      case UnitKind::kPower:
        if (params_[0] == 1.0) return Curvature::kLinear;
        return params_[0] < 1.0 ? Curvature::kConcave : Curvature::kConvex;
      case UnitKind::kSoftMin:
        return params_[0] == -1.0 ? Curvature::kLinear : Curvature::kConcave;
      case UnitKind::kExpMinusOne:
        return Curvature::kConvex;
      case UnitKind::kPiecewiseLinear: {
        bool inc = false, dec = false;
        for (std::size_t i = 2; i < params_.size(); i += 2) {
          if (params_[i] > params_[i - 2]) inc = true;
          if (params_[i] < params_[i - 2]) dec = true;
        }
        if (!inc && !dec) return Curvature::kLinear;
        return dec ? Curvature::kConcave : Curvature::kConvex;
      }
      default:
        return Curvature::kConcave;
    }
  }

  double value(double x) const {
    require_nonneg(x);
    if (shift_ == 0.0) return base_value(x);
    return base_value(x + shift_) - base_value(shift_);
  }

  // Left and right derivatives at x (the left derivative at 0 is taken to
  // equal the right one). Either may be +inf.
  double right_derivative(double x) const {
    require_nonneg(x);
    return base_derivative(x + shift_, /*right=*/true);
  }
  double left_derivative(double x) const {
    require_nonneg(x);
    if (x == 0.0) return right_derivative(x);
    return base_derivative(x + shift_, /*right=*/false);
  }

  SupergradientInterval supergradient(double x) const {
    const double l = left_derivative(x);
    const double r = right_derivative(x);
    return {std::min(l, r), std::max(l, r)};
  }

  // Indices into params() that admit a derivative.
  std::vector<std::size_t> differentiable_params() const {
    switch (kind_) {
      case UnitKind::kPower:
      case UnitKind::kLogGamma:
      case UnitKind::kTruncate:
      case UnitKind::kShiftedSigmoid:
      case UnitKind::kLinThenSqrt:
        return {0};
      case UnitKind::kSoftMin:
        return {1};
      default:
        return {};
    }
  }

  // d phi_b(x) / d params[i]; midpoint of one-sided derivatives at kinks.
  double param_derivative(double x, std::size_t i) const {
    require_nonneg(x);
    const double d = base_param_derivative(x + shift_, i);
    if (shift_ == 0.0) return d;
    return d - base_param_derivative(shift_, i);
  }

  // d phi_b(x) / d b, with one-sided slopes averaged at kinks.
  double shift_derivative(double x) const {
    require_nonneg(x);
    const double at = 0.5 * (base_derivative(x + shift_, true) +
                             base_derivative(x + shift_, false));
    const double ref = base_derivative(shift_, true);
    if (at == kInf || ref == kInf) return ref == kInf ? -kInf : kInf;
    return at - ref;
  }

  // Input values (after shifting) where the unit has a kink.
  std::vector<double> kinks() const {
    std::vector<double> base;
    switch (kind_) {
      case UnitKind::kTruncate:
      case UnitKind::kLinThenSqrt:
        base.push_back(params_[0]);
        break;
      case UnitKind::kPiecewiseLinear:
        for (std::size_t i = 1; i < params_.size(); i += 2) {
          base.push_back(params_[i]);
        }
        break;
      default:
        break;
    }
    std::vector<double> out;
    for (double k : base) {
      if (k - shift_ >= 0.0) out.push_back(k - shift_);
    }
    return out;
  }

  // Number of kinks strictly below x, and whether x sits on one.
  std::pair<int, bool> segment(double x) const {
    int below = 0;
    bool on = false;
    for (double k : kinks()) {
      if (k < x) ++below;
      if (k == x) on = true;
    }
    return {below, on};
  }

  // Largest alpha with phi linear on [0, alpha]; +inf when never non-linear.
  double last_linear_point() const {
    const double b = shift_;
    switch (kind_) {
      case UnitKind::kIdentity:
        return kInf;
      case UnitKind::kPower:
        return params_[0] == 1.0 ? kInf : 0.0;
      case UnitKind::kSoftMin:
        return params_[0] == -1.0 ? kInf : 0.0;
      case UnitKind::kTruncate:
        return b < params_[0] ? params_[0] - b : kInf;
      case UnitKind::kLinThenSqrt:
        return b < params_[0] ? params_[0] - b : 0.0;
      case UnitKind::kPiecewiseLinear: {
        // Merge consecutive segments with equal slope.
        const std::size_t segs = (params_.size() + 1) / 2;
        std::size_t s = 0;
        while (s + 1 < segs && params_[2 * s + 1] <= b) ++s;
        std::size_t e = s;
        while (e + 1 < segs && params_[2 * (e + 1)] == params_[2 * s]) ++e;
        if (e + 1 == segs) return kInf;
        return params_[2 * e + 1] - b;
      }
      default:
        return 0.0;
    }
  }

  // Smallest x from which phi is constant; +inf if it never saturates.
  double saturation_point() const {
    switch (kind_) {
      case UnitKind::kTruncate:
        return std::max(0.0, params_[0] - shift_);
      case UnitKind::kPiecewiseLinear: {
        const std::size_t segs = (params_.size() + 1) / 2;
        if (params_[2 * (segs - 1)] != 0.0) return kInf;
        std::size_t s = segs - 1;
        while (s > 0 && params_[2 * (s - 1)] == 0.0) --s;
        if (s == 0) return 0.0;
        return std::max(0.0, params_[2 * s - 1] - shift_);
      }
      default:
        return kInf;
    }
  }

  friend bool operator==(const ConcaveUnit& a, const ConcaveUnit& b) {
    return a.kind_ == b.kind_ && a.params_ == b.params_ && a.shift_ == b.shift_;
  }

  std::string to_string() const {
    std::string s(unit_kind_name(kind_));
    s += "(";
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (i) s += ",";
      std::ostringstream os;
      os << params_[i];
      s += os.str();
    }
    s += ")";
    if (shift_ != 0.0) {
      std::ostringstream os;
      os << "+shift " << shift_;
      s += os.str();
    }
    return s;
  }

 private:
  static void require_nonneg(double x) {
    if (!(x >= 0.0)) {
      throw Error("concave unit: input must be non-negative, got " +
                  std::to_string(x));
    }
  }

  void expect_params(std::size_t n) const {
    if (params_.size() != n) {
      throw Error(std::string(unit_kind_name(kind_)) + ": expected " +
                  std::to_string(n) + " parameter(s), got " +
                  std::to_string(params_.size()));
    }
  }
  void require_positive(std::size_t i) const {
    if (!(params_[i] > 0.0) || !std::isfinite(params_[i])) {
      throw Error(std::string(unit_kind_name(kind_)) + ": parameter " +
                  std::to_string(i) + " must be positive and finite");
    }
  }

  void validate() {
    if (!(shift_ >= 0.0) || !std::isfinite(shift_)) {
      throw Error("concave unit: shift must be non-negative and finite");
    }
    switch (kind_) {
      case UnitKind::kIdentity:
      case UnitKind::kSqrt:
      case UnitKind::kOneMinusExp:
      case UnitKind::kExpMinusOne:
        expect_params(0);
        break;
      case UnitKind::kPower:
      case UnitKind::kLogGamma:
      case UnitKind::kTruncate:
      case UnitKind::kLinThenSqrt:
        expect_params(1);
        require_positive(0);
        break;
      case UnitKind::kShiftedSigmoid:
        if (params_.empty()) params_.push_back(1.0);
        expect_params(1);
        require_positive(0);
        break;
      case UnitKind::kSoftMin:
        expect_params(2);
        if (!(params_[0] >= -1.0) || !std::isfinite(params_[0])) {
          throw Error("soft_min: exponent a must satisfy a >= -1");
        }
        require_positive(1);
        break;
      case UnitKind::kPiecewiseLinear: {
        if (params_.size() % 2 != 1) {
          throw Error("piecewise_linear: expected slope, (breakpoint, slope)*");
        }
        double prev_break = 0.0;
        bool inc = false, dec = false;
        for (std::size_t i = 0; i < params_.size(); ++i) {
          const double v = params_[i];
          if (!std::isfinite(v)) throw Error("piecewise_linear: non-finite");
          if (i % 2 == 0) {
            if (v < 0.0) throw Error("piecewise_linear: negative slope");
            if (i >= 2 && v > params_[i - 2]) inc = true;
            if (i >= 2 && v < params_[i - 2]) dec = true;
          } else {
            if (!(v > prev_break)) {
              throw Error(
                  "piecewise_linear: breakpoints must be positive "
                  "and strictly increasing");
            }
            prev_break = v;
          }
        }
        if (inc && dec) {
          throw Error(
              "piecewise_linear: slopes must be monotone "
              "(non-increasing for concave, non-decreasing for "
              "convex)");
        }
        break;
      }
    }
  }

  // soft_min mean M(x) = ((x^-a + c^-a)/2)^(-1/a), with the a = 0 limit.
  double soft_min_mean(double x) const {
    const double a = params_[0], c = params_[1];
    if (a == 0.0) return std::sqrt(x * c);
    if (x == 0.0) {
      if (a > 0.0) return 0.0;
      return std::pow(0.5 * std::pow(c, -a), -1.0 / a);
    }
    // Work in logs: log M = -(1/a) * log((exp(-a log x) + exp(-a log c)) / 2).
    const double lx = -a * std::log(x), lc = -a * std::log(c);
    const double hi = std::max(lx, lc);
    const double lse = hi + std::log(std::exp(lx - hi) + std::exp(lc - hi));
    return std::exp(-(lse - std::log(2.0)) / a);
  }

  double base_value(double x) const {
    switch (kind_) {
      case UnitKind::kIdentity:
        return x;
      case UnitKind::kSqrt:
        return std::sqrt(x);
      case UnitKind::kPower:
        return std::pow(x, params_[0]);
      case UnitKind::kLogGamma:
        return params_[0] * std::log1p(x / params_[0]);
      case UnitKind::kTruncate:
        return std::min(x, params_[0]);
      case UnitKind::kOneMinusExp:
        return -std::expm1(-x);
      case UnitKind::kShiftedSigmoid:
        return 1.0 / (1.0 + std::exp(-params_[0] * x)) - 0.5;
      case UnitKind::kSoftMin:
        return soft_min_mean(x) - soft_min_mean(0.0);
      case UnitKind::kLinThenSqrt: {
        const double t = x / params_[0];
        return std::min(std::sqrt(t), t);
      }
      case UnitKind::kPiecewiseLinear: {
        double acc = 0.0, left = 0.0;
        std::size_t i = 0;
        for (; i + 1 < params_.size(); i += 2) {
          const double br = params_[i + 1];
          if (x <= br) return acc + params_[i] * (x - left);
          acc += params_[i] * (br - left);
          left = br;
        }
        return acc + params_[i] * (x - left);
      }
      case UnitKind::kExpMinusOne:
        return std::expm1(x);
    }
    return 0.0;
  }

  double base_derivative(double x, bool right) const {
    switch (kind_) {
      case UnitKind::kIdentity:
        return 1.0;
      case UnitKind::kSqrt:
        return x == 0.0 ? kInf : 0.5 / std::sqrt(x);
      case UnitKind::kPower: {
        const double p = params_[0];
        if (x == 0.0) return p < 1.0 ? kInf : (p == 1.0 ? 1.0 : 0.0);
        return p * std::pow(x, p - 1.0);
      }
      case UnitKind::kLogGamma:
        return 1.0 / (1.0 + x / params_[0]);
      case UnitKind::kTruncate:
        if (x < params_[0]) return 1.0;
        if (x > params_[0]) return 0.0;
        return right ? 0.0 : 1.0;
      case UnitKind::kOneMinusExp:
        return std::exp(-x);
      case UnitKind::kShiftedSigmoid: {
        const double s = 1.0 / (1.0 + std::exp(-params_[0] * x));
        return params_[0] * s * (1.0 - s);
      }
      case UnitKind::kSoftMin: {
        const double a = params_[0];
        if (a == -1.0) return 0.5;
        if (x == 0.0) {
          if (a > 0.0) return std::pow(2.0, 1.0 / a);
          return kInf;
        }
        return 0.5 * std::pow(soft_min_mean(x) / x, a + 1.0);
      }
      case UnitKind::kLinThenSqrt: {
        const double g = params_[0];
        if (x < g || (x == g && !right)) return 1.0 / g;
        return 0.5 / std::sqrt(x * g);
      }
      case UnitKind::kPiecewiseLinear: {
        std::size_t i = 0;
        for (; i + 1 < params_.size(); i += 2) {
          const double br = params_[i + 1];
          if (x < br || (x == br && !right)) return params_[i];
        }
        return params_[i];
      }
      case UnitKind::kExpMinusOne:
        return std::exp(x);
    }
    return 0.0;
  }

  double base_param_derivative(double x, std::size_t i) const {
    switch (kind_) {
      case UnitKind::kPower:
        if (i == 0)
          return x == 0.0 ? 0.0 : std::pow(x, params_[0]) * std::log(x);
        break;
      case UnitKind::kLogGamma:
        if (i == 0) {
          const double g = params_[0];
          return std::log1p(x / g) - x / (g + x);
        }
        break;
      case UnitKind::kTruncate:
        if (i == 0) {
          if (x > params_[0]) return 1.0;
          if (x < params_[0]) return 0.0;
          return 0.5;
        }
        break;
      case UnitKind::kShiftedSigmoid:
        if (i == 0) {
          const double s = 1.0 / (1.0 + std::exp(-params_[0] * x));
          return x * s * (1.0 - s);
        }
        break;
      case UnitKind::kSoftMin:
        if (i == 1) {
          const double a = params_[0], c = params_[1];
          const double at_x = 0.5 * std::pow(soft_min_mean(x) / c, a + 1.0);
          const double at_0 = 0.5 * std::pow(soft_min_mean(0.0) / c, a + 1.0);
          return at_x - at_0;
        }
        break;
      case UnitKind::kLinThenSqrt:
        if (i == 0) {
          const double g = params_[0];
          const double lin = -x / (g * g);
          const double sq = -0.5 * std::sqrt(x) * std::pow(g, -1.5);
          if (x < g) return lin;
          if (x > g) return sq;
          return 0.5 * (lin + sq);
        }
        break;
      default:
        break;
    }
    throw Error(std::string(unit_kind_name(kind_)) + ": parameter " +
                std::to_string(i) + " is not differentiable");
  }

  UnitKind kind_ = UnitKind::kIdentity;
  std::vector<double> params_;
  double shift_ = 0.0;
};

// Named constructors.
namespace units {
inline ConcaveUnit identity() { return {UnitKind::kIdentity, {}}; }
inline ConcaveUnit sqrt() { return {UnitKind::kSqrt, {}}; }
inline ConcaveUnit power(double p) { return {UnitKind::kPower, {p}}; }
inline ConcaveUnit log_gamma(double gamma) {
  return {UnitKind::kLogGamma, {gamma}};
}
inline ConcaveUnit truncate(double gamma) {
  return {UnitKind::kTruncate, {gamma}};
}
inline ConcaveUnit one_minus_exp() { return {UnitKind::kOneMinusExp, {}}; }
inline ConcaveUnit shifted_sigmoid(double scale = 1.0) {
  return {UnitKind::kShiftedSigmoid, {scale}};
}
inline ConcaveUnit soft_min(double a, double c) {
  return {UnitKind::kSoftMin, {a, c}};
}
inline ConcaveUnit lin_then_sqrt(double gamma) {
  return {UnitKind::kLinThenSqrt, {gamma}};
}
// slopes[0] on [0, breaks[0]], slopes[i] on [breaks[i-1], breaks[i]], ...
inline ConcaveUnit piecewise_linear(const std::vector<double>& slopes,
                                    const std::vector<double>& breaks) {
  if (slopes.size() != breaks.size() + 1) {
    throw Error("piecewise_linear: need one more slope than breakpoints");
  }
  std::vector<double> p;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    p.push_back(slopes[i]);
    p.push_back(breaks[i]);
  }
  p.push_back(slopes.back());
  return {UnitKind::kPiecewiseLinear, std::move(p)};
}
inline ConcaveUnit exp_minus_one() { return {UnitKind::kExpMinusOne, {}}; }
}  // namespace units

inline double concave_value(const ConcaveUnit& u, double x) {
  return u.value(x);
}
inline SupergradientInterval concave_supergradient(const ConcaveUnit& u,
                                                   double x) {
  return u.supergradient(x);
}
inline double last_linear_point(const ConcaveUnit& u) {
  return u.last_linear_point();
}

struct UnitCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

// Sampled sanity check: normalization, monotonicity, slope ordering
// consistent with the curvature, and linearity up to last_linear_point.
// 1000 points on [0, 10 * max(1, saturation point)].
inline UnitCheck check_unit(const ConcaveUnit& u, int points = 1000) {
  UnitCheck out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.problems.push_back(std::move(msg));
  };
  if (u.value(0.0) != 0.0) fail("value at 0 is not 0");
  const double sat = u.saturation_point();
  const double hi = 10.0 * std::max(1.0, std::isfinite(sat) ? sat : 1.0);
  const double h = hi / points;
  const Curvature curv = u.curvature();
  double prev_v = 0.0, prev_slope = kInf;
  if (curv == Curvature::kConvex) prev_slope = -kInf;
  const double llp = u.last_linear_point();
  const double slope0 = u.right_derivative(0.0);
  for (int i = 1; i <= points; ++i) {
    const double x = h * i;
    const double v = u.value(x);
    const double slope = (v - prev_v) / h;
    const double tol = 1e-9 * std::max(1.0, std::fabs(v));
    if (v < prev_v - tol) fail("decreasing at x=" + std::to_string(x));
    if (curv == Curvature::kConcave && slope > prev_slope + 1e-7) {
      fail("slope increases at x=" + std::to_string(x));
    }
    if (curv == Curvature::kConvex && slope < prev_slope - 1e-7) {
      fail("slope decreases at x=" + std::to_string(x));
    }
    if (x <= llp && std::isfinite(slope0) &&
        std::fabs(v - slope0 * x) > 1e-9 * std::max(1.0, std::fabs(v))) {
      fail("not linear below last_linear_point at x=" + std::to_string(x));
    }
    prev_v = v;
    prev_slope = slope;
    if (out.problems.size() > 4) break;
  }
  return out;
}

}  // namespace dsfkit

#endif  // DSFKIT_CONCAVE_HPP_
