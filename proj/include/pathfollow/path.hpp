#pragma once

// Planar paths parametrized by arc length (curvilinear abscissa theta).

#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace pathfollow {

struct PathSample {
  double x{}, y{};
  double gamma{};   // tangent angle, continuous along theta
  double kappa{};   // signed curvature, d(gamma)/d(theta)
  double dkappa{};  // d(kappa)/d(theta)
  double theta{};
};

struct Point2 {
  double x{}, y{};
};

/// y = amplitude * sin(omega * x) for x in [x_start, x_end].
struct SineGraph {
  double amplitude{};
  double omega{};
  double x_start{0.0};
  double x_end{10000.0};
};

/// Straight segments between waypoints, optionally with circular fillets.
struct Polyline {
  std::vector<Point2> waypoints;
  double fillet_radius{0.0};
};

struct Line {
  Point2 origin;
  double angle{};
};

/// Counter-clockwise circle starting at center + (radius, 0).
struct Circle {
  double radius{};
  Point2 center;
};

using PathDefinition = std::variant<SineGraph, Polyline, Line, Circle>;

/// Immutable, thread-safe path with arc-length parametrization. Beyond the
/// ends of sine and polyline paths the end tangent line is extended.
class Path {
 public:
  /// Throws InvalidParameter for degenerate definitions.
  explicit Path(PathDefinition def);

  PathSample sample(double theta) const;

  /// Arc-length domain [begin, end]. Infinite for lines and circles.
  std::pair<double, double> domain() const;

  /// Total length of one traversal; 2*pi*R for circles.
  double length() const;

  /// Maximum |kappa| over the path.
  double curvature_max() const;

  /// Abscissa of the closest path point, by a coarse scan plus refinement.
  double nearest_abscissa(double x, double y) const;

  /// Start abscissa of each straight segment (polylines only).
  std::vector<std::pair<double, double>> straight_segments() const;

  const PathDefinition& definition() const { return def_; }

 private:
  struct Piece {
    double theta0{};
    double length{};
    Point2 start;
    double gamma0{};
    double kappa{};
  };

  PathSample sample_pieces(double theta) const;
  PathSample sample_sine(double theta) const;
  double sine_arc_length(double x) const;
  PathSample sine_at_x(double x, double theta) const;

  PathDefinition def_;
  std::vector<Piece> pieces_;
  // Sine arc-length table: nodes in x and cumulative arc length.
  std::vector<double> table_x_;
  std::vector<double> table_s_;
};

/// Offset of (x, y) from the sample point, rotated into the path frame.
std::pair<double, double> frame_errors(double x, double y, const PathSample& s);

/// Current components along the path tangent and normal.
std::pair<double, double> current_in_path_frame(double vx, double vy, double gamma);

}  // namespace pathfollow
