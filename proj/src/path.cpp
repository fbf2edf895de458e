#include "pathfollow/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pathfollow/error.hpp"

namespace pathfollow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTableSpacing = 0.5;

double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

// 5-point Gauss-Legendre on [a, b].
template <class F>
double gauss5(F&& f, double a, double b) {
  static constexpr double xs[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                   -0.9061798459386640, 0.9061798459386640};
  static constexpr double ws[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                   0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += ws[i] * f(mid + half * xs[i]);
  return sum * half;
}

}  // namespace

Path::Path(PathDefinition def) : def_(std::move(def)) {
  if (const auto* sine = std::get_if<SineGraph>(&def_)) {
    if (!(sine->omega > 0.0) || !std::isfinite(sine->amplitude) ||
        !(sine->x_end > sine->x_start)) {
      throw Error(ErrorCode::InvalidParameter, "sine path needs omega > 0 and x_end > x_start");
    }
    const double span = sine->x_end - sine->x_start;
    const auto n = static_cast<std::size_t>(std::ceil(span / kTableSpacing));
    const double h = span / static_cast<double>(n);
    const double a = sine->amplitude;
    const double w = sine->omega;
    auto speed = [a, w](double x) {
      const double dy = a * w * std::cos(w * x);
      return std::sqrt(1.0 + dy * dy);
    };
    table_x_.resize(n + 1);
    table_s_.resize(n + 1);
    table_x_[0] = sine->x_start;
    table_s_[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      table_x_[i] = sine->x_start + h * static_cast<double>(i);
      table_s_[i] = table_s_[i - 1] + gauss5(speed, table_x_[i - 1], table_x_[i]);
    }
    return;
  }

  if (const auto* line = std::get_if<Line>(&def_)) {
    pieces_.push_back({0.0, std::numeric_limits<double>::infinity(), line->origin, line->angle,
                       0.0});
    return;
  }

  if (const auto* circle = std::get_if<Circle>(&def_)) {
    if (!(circle->radius > 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "circle radius must be positive");
    }
    pieces_.push_back({0.0, std::numeric_limits<double>::infinity(),
                       {circle->center.x + circle->radius, circle->center.y}, kPi / 2.0,
                       1.0 / circle->radius});
    return;
  }

  const auto& poly = std::get<Polyline>(def_);
  const auto& wp = poly.waypoints;
  if (wp.size() < 2) throw Error(ErrorCode::InvalidParameter, "polyline needs two waypoints");
  if (poly.fillet_radius < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "fillet radius must be non-negative");
  }

  std::vector<double> headings;
  std::vector<double> lengths;
  for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
    const double dx = wp[i + 1].x - wp[i].x;
    const double dy = wp[i + 1].y - wp[i].y;
    const double len = std::hypot(dx, dy);
    if (!(len > 0.0)) throw Error(ErrorCode::InvalidParameter, "zero-length polyline segment");
    const double raw = std::atan2(dy, dx);
    headings.push_back(headings.empty() ? raw : headings.back() + wrap_pi(raw - headings.back()));
    lengths.push_back(len);
  }

  // Tangent-length trimmed off each side of every interior corner.
  std::vector<double> trim(wp.size(), 0.0);
  for (std::size_t i = 1; i + 1 < wp.size(); ++i) {
    const double turn = headings[i] - headings[i - 1];
    trim[i] = poly.fillet_radius * std::tan(std::abs(turn) / 2.0);
  }

  double theta = 0.0;
  for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
    const double c = std::cos(headings[i]);
    const double s = std::sin(headings[i]);
    const double len = lengths[i] - trim[i] - trim[i + 1];
    if (len < 0.0) {
      throw Error(ErrorCode::InvalidParameter, "fillet radius too large for segment lengths");
    }
    const Point2 start{wp[i].x + trim[i] * c, wp[i].y + trim[i] * s};
    if (len > 0.0 || trim[i + 1] == 0.0) {
      pieces_.push_back({theta, len, start, headings[i], 0.0});
      theta += len;
    }
    if (i + 2 < wp.size() && trim[i + 1] > 0.0) {
      const double turn = headings[i + 1] - headings[i];
      const double arc_len = poly.fillet_radius * std::abs(turn);
      const Point2 arc_start{wp[i + 1].x - trim[i + 1] * c, wp[i + 1].y - trim[i + 1] * s};
      pieces_.push_back({theta, arc_len, arc_start, headings[i],
                         std::copysign(1.0 / poly.fillet_radius, turn)});
      theta += arc_len;
    }
  }
}

std::pair<double, double> Path::domain() const {
  if (std::holds_alternative<SineGraph>(def_)) return {0.0, table_s_.back()};
  if (std::holds_alternative<Polyline>(def_)) {
    return {0.0, pieces_.back().theta0 + pieces_.back().length};
  }
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

double Path::length() const {
  if (const auto* circle = std::get_if<Circle>(&def_)) return 2.0 * kPi * circle->radius;
  const auto [lo, hi] = domain();
  return hi - lo;
}

PathSample Path::sample(double theta) const {
  if (std::holds_alternative<SineGraph>(def_)) return sample_sine(theta);
  return sample_pieces(theta);
}

PathSample Path::sample_pieces(double theta) const {
  // Last piece whose start is <= theta; before the first piece extrapolate it.
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), theta,
                             [](double t, const Piece& p) { return t < p.theta0; });
  const Piece& pc = (it == pieces_.begin()) ? pieces_.front() : *std::prev(it);
  const double s = theta - pc.theta0;

  // Polylines start and end on straight pieces, so the line formula below
  // also covers tangent extrapolation beyond either end.
  PathSample out;
  out.theta = theta;
  if (pc.kappa == 0.0) {
    out.x = pc.start.x + s * std::cos(pc.gamma0);
    out.y = pc.start.y + s * std::sin(pc.gamma0);
    out.gamma = pc.gamma0;
    return out;
  }
  const double gamma = pc.gamma0 + pc.kappa * s;
  out.x = pc.start.x + (std::sin(gamma) - std::sin(pc.gamma0)) / pc.kappa;
  out.y = pc.start.y - (std::cos(gamma) - std::cos(pc.gamma0)) / pc.kappa;
  out.gamma = gamma;
  out.kappa = pc.kappa;
  return out;
}

double Path::sine_arc_length(double x) const {
  const auto& sine = std::get<SineGraph>(def_);
  const double a = sine.amplitude;
  const double w = sine.omega;
  auto speed = [a, w](double xx) {
    const double dy = a * w * std::cos(w * xx);
    return std::sqrt(1.0 + dy * dy);
  };
  auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
  const std::size_t i = (it == table_x_.begin()) ? 0 : static_cast<std::size_t>(it - table_x_.begin()) - 1;
  const std::size_t k = std::min(i, table_x_.size() - 2);
  return table_s_[k] + gauss5(speed, table_x_[k], x);
}

PathSample Path::sine_at_x(double x, double theta) const {
  const auto& sine = std::get<SineGraph>(def_);
  const double a = sine.amplitude;
  const double w = sine.omega;
  const double d1 = a * w * std::cos(w * x);
  const double d2 = -a * w * w * std::sin(w * x);
  const double d3 = -a * w * w * w * std::cos(w * x);
  const double q = 1.0 + d1 * d1;
  const double sq = std::sqrt(q);

  PathSample out;
  out.x = x;
  out.y = a * std::sin(w * x);
  out.gamma = std::atan(d1);
  out.kappa = d2 / (q * sq);
  const double dkappa_dx = d3 / (q * sq) - 3.0 * d1 * d2 * d2 / (q * q * sq);
  out.dkappa = dkappa_dx / sq;
  out.theta = theta;
  return out;
}

PathSample Path::sample_sine(double theta) const {
  const double s_end = table_s_.back();
  if (theta < 0.0 || theta > s_end) {
    const bool before = theta < 0.0;
    PathSample end = sine_at_x(before ? table_x_.front() : table_x_.back(), before ? 0.0 : s_end);
    const double ds = theta - end.theta;
    end.x += ds * std::cos(end.gamma);
    end.y += ds * std::sin(end.gamma);
    end.kappa = 0.0;
    end.dkappa = 0.0;
    end.theta = theta;
    return end;
  }

  auto it = std::upper_bound(table_s_.begin(), table_s_.end(), theta);
  std::size_t i = (it == table_s_.begin()) ? 0 : static_cast<std::size_t>(it - table_s_.begin()) - 1;
  i = std::min(i, table_s_.size() - 2);
  const double frac = (theta - table_s_[i]) / (table_s_[i + 1] - table_s_[i]);
  double x = table_x_[i] + frac * (table_x_[i + 1] - table_x_[i]);

  // One Newton step on s(x) = theta; ds/dx = sqrt(1 + y'^2).
  const auto& sine = std::get<SineGraph>(def_);
  const double dy = sine.amplitude * sine.omega * std::cos(sine.omega * x);
  x -= (sine_arc_length(x) - theta) / std::sqrt(1.0 + dy * dy);
  return sine_at_x(x, theta);
}

double Path::curvature_max() const {
  if (std::holds_alternative<SineGraph>(def_)) {
    // Node scan followed by golden-section refinement around the best node.
    std::size_t best = 0;
    double best_val = 0.0;
    for (std::size_t i = 0; i < table_x_.size(); ++i) {
      const double k = std::abs(sine_at_x(table_x_[i], 0.0).kappa);
      if (k > best_val) {
        best_val = k;
        best = i;
      }
    }
    double lo = table_x_[best == 0 ? 0 : best - 1];
    double hi = table_x_[std::min(best + 1, table_x_.size() - 1)];
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double x) { return std::abs(sine_at_x(x, 0.0).kappa); };
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = f(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + phi * (hi - lo);
        fd = f(d);
      }
    }
    return std::max({best_val, fc, fd});
  }
  double k = 0.0;
  for (const auto& p : pieces_) k = std::max(k, std::abs(p.kappa));
  return k;
}

double Path::nearest_abscissa(double x, double y) const {
  if (const auto* line = std::get_if<Line>(&def_)) {
    return (x - line->origin.x) * std::cos(line->angle) +
           (y - line->origin.y) * std::sin(line->angle);
  }
  auto dist2 = [&](double th) {
    const auto s = sample(th);
    return (s.x - x) * (s.x - x) + (s.y - y) * (s.y - y);
  };
  double lo = 0.0;
  double hi = std::holds_alternative<Circle>(def_) ? length() : domain().second;
  constexpr int kGrid = 4000;
  const double step = (hi - lo) / kGrid;
  int best = 0;
  double best_d = dist2(lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double d = dist2(lo + step * i);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double a = lo + step * std::max(best - 1, 0);
  double b = lo + step * std::min(best + 1, kGrid);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100 && b - a > 1e-10; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (dist2(c) < dist2(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

std::vector<std::pair<double, double>> Path::straight_segments() const {
  std::vector<std::pair<double, double>> out;
  if (!std::holds_alternative<Polyline>(def_)) return out;
  for (const auto& p : pieces_) {
    if (p.kappa == 0.0 && p.length > 0.0) out.emplace_back(p.theta0, p.theta0 + p.length);
  }
  return out;
}

std::pair<double, double> frame_errors(double x, double y, const PathSample& s) {
  const double c = std::cos(s.gamma);
  const double sn = std::sin(s.gamma);
  const double dx = x - s.x;
  const double dy = y - s.y;
  return {c * dx + sn * dy, -sn * dx + c * dy};
}

std::pair<double, double> current_in_path_frame(double vx, double vy, double gamma) {
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  return {vx * c + vy * s, -vx * s + vy * c};
}

}  // namespace pathfollow
