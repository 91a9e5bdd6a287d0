#include "hpwe/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace hpwe {
namespace {

void need(bool ok, const char* what) {
  if (!ok) throw HypothesisViolated(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

BoundKind parse_bound_kind(std::string_view name) {
  if (name == "chernoff_upper") return BoundKind::kChernoffUpper;
  if (name == "chernoff_lower") return BoundKind::kChernoffLower;
  if (name == "geom_sum") return BoundKind::kGeomSum;
  if (name == "weighted_geom") return BoundKind::kWeightedGeom;
  if (name == "mcdiarmid") return BoundKind::kMcDiarmid;
  throw std::invalid_argument("unknown bound: " + std::string(name));
}

std::string_view bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::kChernoffUpper: return "chernoff_upper";
    case BoundKind::kChernoffLower: return "chernoff_lower";
    case BoundKind::kGeomSum: return "geom_sum";
    case BoundKind::kWeightedGeom: return "weighted_geom";
    case BoundKind::kMcDiarmid: return "mcdiarmid";
  }
  return "?";
}

double bound_eval(BoundKind kind, const BoundParams& p) {
  switch (kind) {
    case BoundKind::kChernoffUpper:
      need(finite_nonneg(p.delta), "chernoff_upper needs delta >= 0");
      need(finite_nonneg(p.mu), "chernoff_upper needs mu >= 0");
      return clamp01(std::exp(-p.delta * p.delta * p.mu / (2.0 + p.delta)));
    case BoundKind::kChernoffLower:
      need(finite_nonneg(p.delta) && p.delta <= 1.0, "chernoff_lower needs 0 <= delta <= 1");
      need(finite_nonneg(p.mu), "chernoff_lower needs mu >= 0");
      return clamp01(std::exp(-p.delta * p.delta * p.mu / 2.0));
    case BoundKind::kGeomSum: {
      need(std::isfinite(p.lambda) && p.lambda >= 1.0, "geom_sum needs lambda >= 1");
      need(finite_nonneg(p.r), "geom_sum needs r >= 0");
      const double gap = p.lambda - 1.0;
      return clamp01(std::exp(-gap * gap * p.r / (2.0 * p.lambda)));
    }
    case BoundKind::kWeightedGeom: {
      need(!p.weights.empty(), "weighted_geom needs at least one weight");
      need(finite_nonneg(p.t), "weighted_geom needs t >= 0");
      double w2 = 0.0, wmax = 0.0;
      for (double w : p.weights) {
        need(std::isfinite(w) && w > 0.0, "weighted_geom needs positive weights");
        w2 += w * w;
        wmax = std::max(wmax, w);
      }
      return clamp01(std::exp(-std::min(p.t * p.t / (16.0 * w2), p.t / (8.0 * wmax))));
    }
    case BoundKind::kMcDiarmid: {
      need(!p.lipschitz.empty(), "mcdiarmid needs at least one Lipschitz constant");
      need(finite_nonneg(p.t), "mcdiarmid needs t >= 0");
      double c2 = 0.0;
      for (double c : p.lipschitz) {
        need(std::isfinite(c) && c >= 0.0, "mcdiarmid needs non-negative Lipschitz constants");
        c2 += c * c;
      }
      need(c2 > 0.0, "mcdiarmid needs a positive Lipschitz constant");
      return clamp01(2.0 * std::exp(-2.0 * p.t * p.t / c2));
    }
  }
  throw std::invalid_argument("unknown bound");
}

}  // namespace hpwe
