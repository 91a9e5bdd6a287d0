#pragma once

// Closed-form tail bounds used to put empirical exceedance fractions next to
// their theoretical ceilings. Every value is clamped to [0, 1].
//
//   chernoff_upper  Pr[X >= (1 + d) mu] <= exp(-d^2 mu / (2 + d)),  d >= 0
//   chernoff_lower  Pr[X <= (1 - d) mu] <= exp(-d^2 mu / 2),        0 <= d <= 1
//   geom_sum        sum of r geometrics >= lambda * mean:
//                   exp(-(lambda - 1)^2 r / (2 lambda)),            lambda >= 1
//   weighted_geom   weighted geometric sum >= 2 W1 + t:
//                   exp(-min(t^2 / (16 W2), t / (8 Wmax))),         W2 = sum w^2
//   mcdiarmid       Pr[|f - E f| >= t] <= 2 exp(-2 t^2 / sum c^2)

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hpwe {

class HypothesisViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BoundKind { kChernoffUpper, kChernoffLower, kGeomSum, kWeightedGeom, kMcDiarmid };

BoundKind parse_bound_kind(std::string_view name);
std::string_view bound_kind_name(BoundKind kind);

struct BoundParams {
  double delta = 0.0;   // chernoff
  double mu = 0.0;      // chernoff
  double lambda = 1.0;  // geom_sum
  double r = 0.0;       // geom_sum
  double t = 0.0;       // weighted_geom, mcdiarmid
  std::vector<double> weights;    // weighted_geom
  std::vector<double> lipschitz;  // mcdiarmid
};

// Throws HypothesisViolated when params fall outside the bound's hypotheses.
double bound_eval(BoundKind kind, const BoundParams& params);

}  // namespace hpwe
