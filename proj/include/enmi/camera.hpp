// Pinhole geometry for a road-facing camera: perspective projection of
// points and rectangular regions on a planar road onto the focal plane.
//
// Coordinates follow the camera frame: x lateral, z depth along the
// optical axis (inclined pitch radians below the horizon). The road-plane
// constraint eliminates the vertical coordinate, y = z*tan(pitch) -
// h*sec(pitch), so road points are (x, z) with z > 0. Focal-plane
// coordinates are (x_tilde, y_tilde); all lengths are centimeters.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace enmi {

constexpr double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

/// Intrinsics/extrinsics of the road-facing pinhole camera. Immutable
/// after construction; angles in radians, lengths in cm.
struct CameraConfig {
  double focal_length = 0.0;   // f
  double height = 0.0;         // h, pinhole above the road plane
  double pitch = 0.0;          // theta, downward inclination from horizon
  double vertical_fov = 0.0;
  double horizontal_fov = 0.0;

  CameraConfig(double f, double h, double theta, double vfov, double hfov)
      : focal_length(f), height(h), pitch(theta), vertical_fov(vfov), horizontal_fov(hfov) {
    constexpr double half_pi = 1.57079632679489661923;
    if (!(f > 0.0)) throw std::invalid_argument("camera: focal_length must be > 0");
    if (!(h > 0.0)) throw std::invalid_argument("camera: height must be > 0");
    if (!(theta > 0.0 && theta < half_pi)) throw std::invalid_argument("camera: pitch must be in (0, pi/2)");
    if (!(vfov > 0.0 && vfov < 2.0 * half_pi)) throw std::invalid_argument("camera: vertical_fov must be in (0, pi)");
    if (!(hfov > 0.0 && hfov < 2.0 * half_pi)) throw std::invalid_argument("camera: horizontal_fov must be in (0, pi)");
    // entire view must strike the road: no horizon in frame
    if (!(theta - vfov / 2.0 > 0.0))
      throw std::invalid_argument("camera: pitch - vertical_fov/2 must be > 0 (horizon would enter the frame)");
  }

  static CameraConfig from_degrees(double f, double h, double pitch_deg, double vfov_deg, double hfov_deg) {
    return CameraConfig(f, h, deg_to_rad(pitch_deg), deg_to_rad(vfov_deg), deg_to_rad(hfov_deg));
  }

  double sin_pitch() const { return std::sin(pitch); }
  double cos_pitch() const { return std::cos(pitch); }
  double tan_pitch() const { return std::tan(pitch); }
  double sec_pitch() const { return 1.0 / std::cos(pitch); }
};

/// A point on the road plane: lateral offset x, optical-axis depth z (> 0).
struct RoadPoint {
  double x = 0.0;
  double z = 0.0;
};

/// Image of a road point on the focal plane; y_tilde < f*tan(pitch) for
/// every finite-depth road point (the horizon maps to the limit).
struct FocalPoint {
  double x_tilde = 0.0;
  double y_tilde = 0.0;
};

/// Axis-aligned rectangle [x_lower, x_upper] x [z_lower, z_upper] on the
/// road plane, z bounds in optical-axis depth.
struct RoadRegion {
  double x_lower = 0.0;
  double x_upper = 0.0;
  double z_lower = 0.0;
  double z_upper = 0.0;

  RoadRegion(double xl, double xu, double zl, double zu)
      : x_lower(xl), x_upper(xu), z_lower(zl), z_upper(zu) {
    if (!(xl < xu)) throw std::invalid_argument("road region: x_lower must be < x_upper");
    if (!(0.0 < zl && zl < zu)) throw std::invalid_argument("road region: need 0 < z_lower < z_upper");
  }
};

/// Perspective projection of a road point: x~ = f*x/z,
/// y~ = f*tan(theta) - (f*h/z)*sec(theta).
inline FocalPoint project_point(const CameraConfig& cfg, const RoadPoint& p) {
  if (!(p.z > 0.0)) throw std::domain_error("project_point: depth z must be > 0");
  const double f = cfg.focal_length;
  return FocalPoint{f * p.x / p.z, f * cfg.tan_pitch() - (f * cfg.height / p.z) * cfg.sec_pitch()};
}

/// Inverse of the vertical projection: z = f*h / (f*sin(theta) - y~*cos(theta)).
inline double depth_from_ytilde(const CameraConfig& cfg, double y_tilde) {
  const double f = cfg.focal_length;
  const double denom = f * cfg.sin_pitch() - y_tilde * cfg.cos_pitch();
  if (!(denom > 0.0))
    throw std::domain_error("depth_from_ytilde: y_tilde at or above the horizon, depth undefined");
  return f * cfg.height / denom;
}

/// Jacobian of the projection, rows [d/dx, d/dz] of (x~, y~):
/// [[f/z, 0], [-f*x/z^2, -(f*h/z^2)*sec(theta)]].
inline std::array<std::array<double, 2>, 2> jacobian(const CameraConfig& cfg, const RoadPoint& p) {
  if (!(p.z > 0.0)) throw std::domain_error("jacobian: depth z must be > 0");
  const double f = cfg.focal_length;
  const double z2 = p.z * p.z;
  return {{{f / p.z, 0.0}, {-f * p.x / z2, -(f * cfg.height / z2) * cfg.sec_pitch()}}};
}

inline double jacobian_det(const CameraConfig& cfg, const RoadPoint& p) {
  if (!(p.z > 0.0)) throw std::domain_error("jacobian_det: depth z must be > 0");
  const double f = cfg.focal_length;
  return -f * f * cfg.height * cfg.sec_pitch() / (p.z * p.z * p.z);
}

/// Focal-plane area of the image of a road region:
/// A~ = f^2*h*sec(theta) * (x_u - x_l)/2 * (1/z_l^2 - 1/z_u^2).
inline double projected_area(const CameraConfig& cfg, const RoadRegion& r) {
  const double f = cfg.focal_length;
  const double scale = f * f * cfg.height * cfg.sec_pitch();
  return scale * (r.x_upper - r.x_lower) / 2.0 *
         (1.0 / (r.z_lower * r.z_lower) - 1.0 / (r.z_upper * r.z_upper));
}

}  // namespace enmi
