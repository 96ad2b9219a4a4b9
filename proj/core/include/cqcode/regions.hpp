#pragma once

#include <array>
#include <vector>

#include "cqcode/channels.hpp"
#include "cqcode/infomeasure.hpp"

namespace cqcode {

// Convex, downward-closed rate region in the first quadrant.
struct Region2D {
  struct HalfPlane {
    double nx = 0.0, ny = 0.0, c = 0.0;  // nx*x + ny*y <= c
  };

  std::vector<std::array<double, 2>> vertices;  // CCW
  std::vector<HalfPlane> halfplanes;
  Unit unit = Unit::bits;

  bool contains(double x, double y, double slack) const;
  bool contains(const Region2D& other, double slack) const;  // all of other's vertices
  double max_sum() const;                                    // max R_A + R_B
  double support(double dx, double dy) const;
  double area() const;
};

// Downward-closed convex hull of a point cloud.
Region2D region_from_points(const std::vector<std::array<double, 2>>& points, Unit unit);

// Hausdorff distance between two convex regions.
double hausdorff(const Region2D& a, const Region2D& b);

// Optimization controls for the distribution search. Grid-point evaluations
// are independent; the hull reduction is order-insensitive.
struct OptGrid {
  int t_card = 4;              // |T| (or |U|) cap
  double simplex_step = 1.0 / 16;
  int refine_rounds = 200;     // Nelder-Mead iterations per refinement start
  int threads = 1;
};

Region2D region_bcd(const BCDPair& pair, const OptGrid& grid);
Region2D region_compound_bcd(const CompoundFamily& fam, const OptGrid& grid);
Region2D region_mac(const MACChannel& mac, const OptGrid& grid);
Region2D region_compound_mac(const CompoundFamily& fam, const OptGrid& grid);

// Closed convex hull of the two corner-point families (successive decoding in
// either order), the weak inner bound that time sharing alone gives.
Region2D region_corner_union(const CompoundFamily& fam, const OptGrid& grid);

struct RQuantities {
  Measure r1, r2, r3;
};
// Best sum rates: over the corner union (r1), over the full compound region
// (r2), and the unconstrained max of min_theta I(AB;Y|T) (r3).
RQuantities r_quantities(const CompoundFamily& fam, const OptGrid& grid);

// First worked family: constrained common-rate curves with product inputs
// (hi1) against Markov time-sharing inputs (hi2), in bits.
struct Example1CurvePoint {
  double rate = 0.0;
  double hi1 = 0.0;
  double hi2 = 0.0;
};
std::vector<Example1CurvePoint> example1_curves(int resolution);

// Second worked family: the flat product-input value, the time-sharing lower
// bound, and the scan certifying where the product-input value peaks.
struct Example2Curves {
  struct Point {
    double rate = 0.0;
    double lgh = 0.0;
    double ll2p = 0.0;
  };
  struct ScanPoint {
    double p = 0.0;
    double value = 0.0;
    double argmax_q = 0.0;
  };
  std::vector<Point> curve;
  std::vector<ScanPoint> lm3_scan;
  double lm3_peak_p = 0.0;
  double lm3_peak_q = 0.0;
  double lm3_peak_value = 0.0;
};
Example2Curves example2_curves(int resolution);

}  // namespace cqcode
