#include "omegastab/region.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "omegastab/numkernel.hpp"

namespace omegastab {

RegionSpec RegionSpec::wedge_strip_disk(double theta, double h, double r) {
  RegionSpec spec;
  spec.sectors.push_back(ConicSector{0.0, theta});
  spec.strip = VerticalStrip{h, std::numeric_limits<double>::infinity()};
  spec.disks.push_back(Disk{0.0, r});
  return spec;
}

RegionSpec RegionSpec::example_intersection() {
  RegionSpec r;
  r.sectors.push_back(ConicSector{0.0, 3.0 * M_PI / 8.0});
  r.strip = VerticalStrip{0.5, 1.75};
  r.disks.push_back(Disk{1.0, 3.0});
  return r;
}

void validate(const RegionSpec& region) {
  if (region.sectors.empty() && !region.strip && region.disks.empty()) throw EmptySpec();
  for (const auto& s : region.sectors) {
    if (!(s.theta > 0.0) || !(s.theta <= M_PI / 2) || !std::isfinite(s.apex))
      throw InvalidParameter("sector: need finite apex and theta in (0, pi/2]");
  }
  if (region.strip) {
    const auto& s = *region.strip;
    if (std::isnan(s.h) || std::isnan(s.k) || !(s.h < s.k))
      throw InvalidParameter("strip: need h < k");
    if (!s.h_finite() && !s.k_finite())
      throw InvalidParameter("strip: at least one endpoint must be finite");
  }
  for (const auto& d : region.disks) {
    if (!(d.radius > 0.0) || !std::isfinite(d.radius) || !std::isfinite(d.center))
      throw InvalidParameter("disk: need finite center and radius > 0");
  }
}

namespace {

// Each primitive reduces to scalar constraints g_i(z) < 0; closed form
// relaxes to g_i(z) <= tol.
inline bool admit(double g, bool closed, double tol) { return closed ? g <= tol : g < 0.0; }

}  // namespace

bool contains(const ConicSector& s, std::complex<double> z, bool closed, double tol) {
  const double x = z.real() - s.apex, y = z.imag();
  const double a = s.alpha(), b = s.beta();
  return admit(a * x - b * y, closed, tol) && admit(a * x + b * y, closed, tol);
}

bool contains(const VerticalStrip& s, std::complex<double> z, bool closed, double tol) {
  const double x = z.real();
  if (s.h_finite() && !admit(x + s.h, closed, tol)) return false;
  if (s.k_finite() && !admit(-s.k - x, closed, tol)) return false;
  return true;
}

bool contains(const Disk& d, std::complex<double> z, bool closed, double tol) {
  return admit(std::abs(z - std::complex<double>(d.center, 0.0)) - d.radius, closed, tol);
}

bool contains(const RegionSpec& region, std::complex<double> z, bool closed, double tol) {
  for (const auto& s : region.sectors)
    if (!contains(s, z, closed, tol)) return false;
  if (region.strip && !contains(*region.strip, z, closed, tol)) return false;
  for (const auto& d : region.disks)
    if (!contains(d, z, closed, tol)) return false;
  return true;
}

MembershipResult matrix_in_region(const RegionSpec& region, const Eigen::MatrixXd& a,
                                  bool closed, double tol) {
  validate(region);
  MembershipResult res;
  res.eigenvalues = eigenvalues(a);
  res.inside = true;
  for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i)
    if (!contains(region, res.eigenvalues(i), closed, tol)) res.inside = false;
  return res;
}

namespace {

// Extent for unbounded boundary curves: prefer bounds implied by disks and
// a two-sided strip, otherwise fall back to a plotting window.
double sampling_extent(const RegionSpec& region) {
  double ext = 0.0;
  bool bounded = false;
  for (const auto& d : region.disks) {
    ext = std::max(ext, std::abs(d.center) + d.radius);
    bounded = true;
  }
  if (region.strip && region.strip->h_finite() && region.strip->k_finite()) {
    const double span = std::max(std::abs(region.strip->h), std::abs(region.strip->k));
    if (!bounded) ext = std::max(ext, 4.0 * std::max(1.0, span));
    bounded = true;
  }
  for (const auto& s : region.sectors) ext = std::max(ext, std::abs(s.apex));
  if (!bounded) ext = std::max(ext, 10.0);
  return 1.25 * std::max(ext, 1.0);
}

}  // namespace

std::vector<std::complex<double>> boundary_samples(const RegionSpec& region, int n_points) {
  validate(region);
  if (n_points < 8) throw InvalidParameter("boundary_samples: need n_points >= 8");
  const double ext = sampling_extent(region);
  const double tol = 1e-8;
  std::vector<std::complex<double>> out;

  auto keep = [&](std::complex<double> z) {
    if (contains(region, z, /*closed=*/true, tol)) out.push_back(z);
  };

  for (const auto& s : region.sectors) {
    if (s.theta >= M_PI / 2 - 1e-14) {
      // Half-plane boundary: the vertical line x = apex.
      for (int i = 0; i < n_points; ++i) {
        const double y = -ext + 2.0 * ext * i / (n_points - 1);
        keep({s.apex, y});
      }
      continue;
    }
    // Two rays from the apex at angles pi -+ theta.
    const double reach = 2.0 * ext;
    for (int i = 0; i < n_points; ++i) {
      const double t = reach * i / (n_points - 1);
      keep({s.apex - t * s.beta(), t * s.alpha()});
      keep({s.apex - t * s.beta(), -t * s.alpha()});
    }
  }
  if (region.strip) {
    for (double edge : {region.strip->h, region.strip->k}) {
      if (!std::isfinite(edge)) continue;
      for (int i = 0; i < n_points; ++i) {
        const double y = -ext + 2.0 * ext * i / (n_points - 1);
        keep({-edge, y});
      }
    }
  }
  for (const auto& d : region.disks) {
    for (int i = 0; i < n_points; ++i) {
      const double phi = 2.0 * M_PI * i / n_points;
      keep(std::complex<double>(d.center, 0.0) +
           d.radius * std::complex<double>(std::cos(phi), std::sin(phi)));
    }
  }

  if (out.empty())
    throw EmptyRegion("boundary sampling produced no admissible points");
  return out;
}

// --- JSON --------------------------------------------------------------------

namespace {

double endpoint_from_json(const nlohmann::json& v, const char* who) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InvalidParameter(std::string("strip endpoint ") + who +
                         " must be a number or \"inf\"/\"-inf\"");
}

nlohmann::json endpoint_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

RegionSpec region_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("region JSON parse error: ") + e.what());
  }
  RegionSpec r;
  if (j.contains("sectors"))
    for (const auto& s : j["sectors"])
      r.sectors.push_back({s.at("a").get<double>(), s.at("theta").get<double>()});
  if (j.contains("strip") && !j["strip"].is_null()) {
    const auto& s = j["strip"];
    r.strip = VerticalStrip{endpoint_from_json(s.at("h"), "h"),
                            endpoint_from_json(s.at("k"), "k")};
  }
  if (j.contains("disks"))
    for (const auto& d : j["disks"])
      r.disks.push_back({d.at("center").get<double>(), d.at("r").get<double>()});
  validate(r);
  return r;
}

std::string region_to_json_text(const RegionSpec& region) {
  nlohmann::json j;
  j["sectors"] = nlohmann::json::array();
  for (const auto& s : region.sectors) j["sectors"].push_back({{"a", s.apex}, {"theta", s.theta}});
  if (region.strip)
    j["strip"] = {{"h", endpoint_to_json(region.strip->h)},
                  {"k", endpoint_to_json(region.strip->k)}};
  j["disks"] = nlohmann::json::array();
  for (const auto& d : region.disks) j["disks"].push_back({{"center", d.center}, {"r", d.radius}});
  return j.dump(2);
}

RegionSpec read_region(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return region_from_json_text(text);
}

void write_region(const RegionSpec& region, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << region_to_json_text(region) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace omegastab
