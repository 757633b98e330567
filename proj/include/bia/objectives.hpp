#pragma once

#include "bia/bregman.hpp"

#include <memory>
#include <optional>

namespace bia {

/// Update sizes at or below this (relative to max(1, |old|)) are treated as 0/0.
inline constexpr double kStationaryStep = 1e-14;

inline bool is_zero_step(double old_xi, double new_xi) {
  return std::abs(new_xi - old_xi) <= kStationaryStep * std::max(1.0, std::abs(old_xi));
}

class CoordinateObjective;

/// Mutable view of a point being updated one coordinate at a time during a sweep.
///
/// Objectives with expensive coordinate queries override this to keep incremental caches
/// (the quadratic keeps Ay - b). A cursor belongs to a single solver run.
class SweepCursor {
 public:
  SweepCursor(const CoordinateObjective& objective, Vector y);
  virtual ~SweepCursor() = default;

  SweepCursor(const SweepCursor&) = delete;
  SweepCursor& operator=(const SweepCursor&) = delete;

  const Vector& point() const { return y_; }
  const CoordinateObjective& objective() const { return objective_; }

  /// (V(y + (t - y_i) e_i) - V(y)) / (t - y_i); falls back to the Clarke midpoint when t == y_i.
  virtual double diff_quotient(std::size_t i, double t) const;
  virtual Interval clarke(std::size_t i) const;
  virtual void set(std::size_t i, double t);

 protected:
  const CoordinateObjective& objective_;
  Vector y_;
};

/// Objective V seen through the coordinate-wise queries an Itoh-Abe sweep needs.
class CoordinateObjective {
 public:
  virtual ~CoordinateObjective() = default;

  virtual std::size_t size() const = 0;
  virtual double value(const Vector& x) const = 0;

  /// Difference quotient for moving coordinate i of y from old_xi (== y_i) to new_xi.
  /// new_xi == old_xi returns an element of the coordinate Clarke interval (the midpoint).
  virtual double coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                                     double new_xi) const = 0;

  /// Projection of the Clarke subdifferential onto coordinate i.
  virtual Interval coord_clarke_interval(const Vector& y, std::size_t i) const = 0;

  virtual std::optional<double> lipschitz_hint(std::size_t /*i*/) const { return std::nullopt; }

  virtual std::unique_ptr<SweepCursor> cursor(const Vector& x) const;

 protected:
  void check_size(const Vector& x, const char* where) const;
};

/// V(x) = <x, Ax>/2 - <b, x> with A symmetric positive semi-definite and a_ii > 0.
class QuadraticObjective : public CoordinateObjective {
 public:
  QuadraticObjective(Matrix A, Vector b);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  double diag(std::size_t i) const { return A_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)); }

  std::size_t size() const override { return static_cast<std::size_t>(b_.size()); }
  double value(const Vector& x) const override;
  double coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                             double new_xi) const override;
  Interval coord_clarke_interval(const Vector& y, std::size_t i) const override;
  std::unique_ptr<SweepCursor> cursor(const Vector& x) const override;

  /// <a^i, y> - b_i.
  double partial(const Vector& y, std::size_t i) const;
  Vector gradient(const Vector& x) const { return A_ * x - b_; }

 private:
  Matrix A_;
  Vector b_;
};

/// Cursor for quadratics; keeps r = Ay - b up to date with O(n) work per coordinate change.
class QuadraticCursor : public SweepCursor {
 public:
  QuadraticCursor(const QuadraticObjective& q, Vector y, double l1_weight = 0.0);

  double diff_quotient(std::size_t i, double t) const override;
  Interval clarke(std::size_t i) const override;
  void set(std::size_t i, double t) override;

  const Vector& residual() const { return r_; }

 private:
  const QuadraticObjective& q_;
  double lambda_;
  Vector r_;
};

/// Quadratic plus lambda ||x||_1.
class L1QuadraticObjective : public CoordinateObjective {
 public:
  L1QuadraticObjective(QuadraticObjective quadratic, double lambda);

  const QuadraticObjective& quadratic() const { return q_; }
  double lambda() const { return lambda_; }

  std::size_t size() const override { return q_.size(); }
  double value(const Vector& x) const override;
  double coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                             double new_xi) const override;
  Interval coord_clarke_interval(const Vector& y, std::size_t i) const override;
  std::unique_ptr<SweepCursor> cursor(const Vector& x) const override;

 private:
  QuadraticObjective q_;
  double lambda_;
};

/// Student-t regulariser on forward differences plus an l1 data term:
///   V(x) = sum_f phi_f sum_j log(1 + (K_f x)_j^2) + ||x - x_delta||_1.
///
/// K_0 is the horizontal and K_1 the vertical forward difference; both vanish on the trailing
/// edge. Images are row-major, pixel (r, c) at index r * width + c.
class StudentTObjective : public CoordinateObjective {
 public:
  StudentTObjective(std::size_t height, std::size_t width, Vector x_delta, double phi_h = 2.0,
                    double phi_v = 2.0);

  std::size_t height() const { return h_; }
  std::size_t width() const { return w_; }
  const Vector& x_delta() const { return x_delta_; }

  std::size_t size() const override { return h_ * w_; }
  double value(const Vector& x) const override;
  /// Regulariser only (the sum of phi-weighted log terms).
  double regularizer(const Vector& x) const;
  double coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                             double new_xi) const override;
  Interval coord_clarke_interval(const Vector& y, std::size_t i) const override;
  std::optional<double> lipschitz_hint(std::size_t i) const override;

  /// Partial derivative of the regulariser at pixel i.
  double smooth_partial(const Vector& y, std::size_t i) const;

 private:
  std::size_t h_;
  std::size_t w_;
  Vector x_delta_;
  double phi_h_;
  double phi_v_;
};

double quadratic_value(const QuadraticObjective& q, const Vector& x);
double quadratic_coord_dq(const QuadraticObjective& q, const Vector& y, std::size_t i,
                          double old_xi, double new_xi);
double student_t_value(const StudentTObjective& s, const Vector& x);
double student_t_coord_dq(const StudentTObjective& s, const Vector& y, std::size_t i,
                          double old_xi, double new_xi);

}  // namespace bia
