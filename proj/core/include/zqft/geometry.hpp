#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace zqft {

enum class Kind { Interval, Circle, Torus, Cylinder, Disk, Sphere, Hemisphere, SphericalSector };

// Chart conventions
//   Interval(l)          x in (0, l)
//   Circle(L)            x in [0, L)
//   Torus(L1, L2)        (x, y) in [0, L1) x [0, L2)
//   Cylinder(L, H)       (x, y), x periodic in [0, L), y in (0, H); boundary circles y = 0, y = H
//   Disk(R)              (theta, r), r in [0, R)
//   Sphere(R)            (colatitude, longitude)
//   Hemisphere(R)        colatitude in [0, pi/2); equator is the boundary
//   SphericalSector(R, phi)  colatitude in [0, phi)
struct Geometry {
  Kind kind = Kind::Interval;
  double a = 1.0;  // l, L, L1, R
  double b = 0.0;  // L2, H, phi

  static Geometry interval(double l);
  static Geometry circle(double L);
  static Geometry torus(double L1, double L2);
  static Geometry cylinder(double L, double H);
  static Geometry disk(double R);
  static Geometry sphere(double R);
  static Geometry hemisphere(double R);
  static Geometry spherical_sector(double R, double phi);

  // "interval:l=1", "cylinder:L=6.283,H=2", "sector:R=1,phi=1.2", ...
  static Geometry parse(std::string_view spec);
  std::string to_string() const;

  int dimension() const;
  bool has_boundary() const;
  double volume() const;
  bool operator==(const Geometry&) const = default;
};

using Point = std::array<double, 2>;

enum class BoundaryId { Left, Right, Bottom, Top, Rim };

struct BoundaryComponent {
  BoundaryId id = BoundaryId::Left;
  double length = 0.0;  // circumference for circles, 0 for points
  int point_count = 0;  // 1 for a point boundary, 0 for circles
};

std::vector<BoundaryComponent> boundary_components(const Geometry& g);
std::string to_string(BoundaryId id);

bool is_interior(const Geometry& g, Point p);
double distance(const Geometry& g, Point p, Point q);

enum class ThetaForm { Auto, Images, Modes };
enum class BoundaryCondition { Dirichlet, Neumann };

// Diagonal of the heat kernel of the (nonnegative) Laplacian, Dirichlet on
// any boundary. Mass factors are applied by callers.
double heat_trace_diag(const Geometry& g, Point p, double t, ThetaForm form = ThetaForm::Auto);
// theta(p, t) minus its leading Euclidean term 1/(4 pi t) (2D) or
// 1/sqrt(4 pi t) (1D), evaluated without cancellation.
double heat_trace_diag_remainder(const Geometry& g, Point p, double t);

// Full trace Tr exp(-t Delta) and its small-t structure
//   Tr ~ c_m1 / t + c_mhalf / sqrt(t) + c_0 + remainder(t).
struct TraceCoefficients {
  double c_m1 = 0.0;
  double c_mhalf = 0.0;
  double c_0 = 0.0;
};
TraceCoefficients trace_coefficients(const Geometry& g, BoundaryCondition bc = BoundaryCondition::Dirichlet);
double heat_trace_total(const Geometry& g, double t, BoundaryCondition bc = BoundaryCondition::Dirichlet);
double heat_trace_total_remainder(const Geometry& g, double t,
                                  BoundaryCondition bc = BoundaryCondition::Dirichlet);

// Green's function of Delta + m^2 with Dirichlet conditions.
double greens(const Geometry& g, double m, Point p, Point q);
// Outward normal derivative of G(p, .) at the boundary point b.
double greens_normal_derivative(const Geometry& g, double m, Point p, Point b);

// Ricci scalar: 2/R^2 on a sphere of radius R, zero on flat pieces.
double scalar_curvature(const Geometry& g, Point p);

}  // namespace zqft
