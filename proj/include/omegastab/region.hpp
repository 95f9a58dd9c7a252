#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omegastab/errors.hpp"

namespace omegastab {

// Wedge opening leftward from apex (a, 0):
//   sin(theta)(x - a) < cos(theta) y < -sin(theta)(x - a).
// theta in (0, pi/2]; theta = pi/2 is the half-plane Re z < a.
struct ConicSector {
  double apex = 0.0;
  double theta = M_PI / 2;

  double alpha() const { return std::sin(theta); }
  double beta() const { return std::cos(theta); }
};

// Band -k < Re z < -h. Either endpoint (but not both) may be infinite:
// h = -inf or k = +inf gives a half-plane.
struct VerticalStrip {
  double h = 0.0;
  double k = std::numeric_limits<double>::infinity();

  bool h_finite() const { return std::isfinite(h); }
  bool k_finite() const { return std::isfinite(k); }
};

// Open disk centred at (center, 0) on the real axis. The usual signed
// parameter q equals -center.
struct Disk {
  double center = 0.0;
  double radius = 1.0;

  double q() const { return -center; }
};

// Intersection of primitives. At most one strip: intersecting strips is
// just another strip.
struct RegionSpec {
  std::vector<ConicSector> sectors;
  std::optional<VerticalStrip> strip;
  std::vector<Disk> disks;

  static RegionSpec left_half_plane() {
    RegionSpec r;
    r.strip = VerticalStrip{0.0, std::numeric_limits<double>::infinity()};
    return r;
  }

  static RegionSpec unit_disk() {
    RegionSpec r;
    r.disks.push_back(Disk{0.0, 1.0});
    return r;
  }

  // Sector(0, theta) + strip(h, +inf) + disk(center 0, r): the classic
  // bounded intersection used for plots.
  static RegionSpec wedge_strip_disk(double theta, double h, double r);

  // The synthetic-study region: sector(0, 3pi/8), strip(0.5, 1.75),
  // disk(center 1, r 3).
  static RegionSpec example_intersection();
};

// Throws InvalidParameter / EmptySpec when a type invariant fails.
void validate(const RegionSpec& region);

// Strict membership (closed=false) or closed membership with `tol` of
// absolute slack on every scalar inequality (closed=true).
bool contains(const RegionSpec& region, std::complex<double> z, bool closed = false,
              double tol = 1e-8);

bool contains(const ConicSector& s, std::complex<double> z, bool closed, double tol);
bool contains(const VerticalStrip& s, std::complex<double> z, bool closed, double tol);
bool contains(const Disk& d, std::complex<double> z, bool closed, double tol);

struct MembershipResult {
  bool inside = false;
  Eigen::VectorXcd eigenvalues;
};

// True iff every eigenvalue of A passes `contains`.
MembershipResult matrix_in_region(const RegionSpec& region, const Eigen::MatrixXd& a,
                                  bool closed = false, double tol = 1e-8);

// Points on the boundary of the intersection: each lies on one primitive's
// equality curve and passes closed membership in all primitives.
// Throws EmptyRegion if sampling yields nothing.
std::vector<std::complex<double>> boundary_samples(const RegionSpec& region, int n_points);

// --- JSON config ------------------------------------------------------------
// {"sectors":[{"a":0.0,"theta":1.1781}], "strip":{"h":0.5,"k":1.75},
//  "disks":[{"center":1.0,"r":3.0}]}
// Infinite strip endpoints are encoded as the strings "inf"/"-inf".

RegionSpec region_from_json_text(const std::string& text);
std::string region_to_json_text(const RegionSpec& region);
RegionSpec read_region(const std::string& path);
void write_region(const RegionSpec& region, const std::string& path);

}  // namespace omegastab
