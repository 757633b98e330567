#include "bia/objectives.hpp"

#include <sstream>

namespace bia {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// (|t - s| - |u - s|) / (t - u), with the midpoint of d|.| when t == u.
double abs_quotient(double u, double t, double s) {
  if (is_zero_step(u, t)) return sign(u - s);
  return (std::abs(t - s) - std::abs(u - s)) / (t - u);
}

Interval abs_subdiff(double u, double s) {
  return u == s ? Interval{-1.0, 1.0} : Interval::point(sign(u - s));
}

}  // namespace

SweepCursor::SweepCursor(const CoordinateObjective& objective, Vector y)
    : objective_(objective), y_(std::move(y)) {}

double SweepCursor::diff_quotient(std::size_t i, double t) const {
  return objective_.coord_diff_quotient(y_, i, y_[idx(i)], t);
}

Interval SweepCursor::clarke(std::size_t i) const { return objective_.coord_clarke_interval(y_, i); }

void SweepCursor::set(std::size_t i, double t) { y_[idx(i)] = t; }

std::unique_ptr<SweepCursor> CoordinateObjective::cursor(const Vector& x) const {
  check_size(x, "cursor");
  return std::make_unique<SweepCursor>(*this, x);
}

void CoordinateObjective::check_size(const Vector& x, const char* where) const {
  if (x.size() != idx(size())) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (got " << x.size() << ", expected " << size() << ")";
    throw PreconditionError(msg.str());
  }
}

// ---------------------------------------------------------------------------------------------

QuadraticObjective::QuadraticObjective(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != A_.cols() || A_.rows() != b_.size())
    throw PreconditionError("QuadraticObjective: A must be square and match b");
  for (Eigen::Index i = 0; i < A_.rows(); ++i)
    if (!(A_(i, i) > 0.0)) {
      std::ostringstream msg;
      msg << "QuadraticObjective: diagonal entry a_" << i << i << " = " << A_(i, i)
          << " is not positive";
      throw PreconditionError(msg.str());
    }
}

double QuadraticObjective::value(const Vector& x) const {
  check_size(x, "quadratic value");
  return 0.5 * x.dot(A_ * x) - b_.dot(x);
}

double QuadraticObjective::partial(const Vector& y, std::size_t i) const {
  return A_.col(idx(i)).dot(y) - b_[idx(i)];
}

double QuadraticObjective::coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                                               double new_xi) const {
  return partial(y, i) + 0.5 * diag(i) * (new_xi - old_xi);
}

Interval QuadraticObjective::coord_clarke_interval(const Vector& y, std::size_t i) const {
  return Interval::point(partial(y, i));
}

std::unique_ptr<SweepCursor> QuadraticObjective::cursor(const Vector& x) const {
  check_size(x, "cursor");
  return std::make_unique<QuadraticCursor>(*this, x);
}

QuadraticCursor::QuadraticCursor(const QuadraticObjective& q, Vector y, double l1_weight)
    : SweepCursor(q, std::move(y)), q_(q), lambda_(l1_weight), r_(q.gradient(y_)) {}

double QuadraticCursor::diff_quotient(std::size_t i, double t) const {
  const double old = y_[idx(i)];
  double dq = r_[idx(i)] + 0.5 * q_.diag(i) * (t - old);
  if (lambda_ != 0.0) dq += lambda_ * abs_quotient(old, t, 0.0);
  return dq;
}

Interval QuadraticCursor::clarke(std::size_t i) const {
  const double g = r_[idx(i)];
  if (lambda_ == 0.0) return Interval::point(g);
  return lambda_ * abs_subdiff(y_[idx(i)], 0.0) + g;
}

void QuadraticCursor::set(std::size_t i, double t) {
  const double delta = t - y_[idx(i)];
  if (delta != 0.0) r_ += delta * q_.A().col(idx(i));
  y_[idx(i)] = t;
}

// ---------------------------------------------------------------------------------------------

L1QuadraticObjective::L1QuadraticObjective(QuadraticObjective quadratic, double lambda)
    : q_(std::move(quadratic)), lambda_(lambda) {
  if (lambda_ < 0.0) throw PreconditionError("L1QuadraticObjective: lambda must be nonnegative");
}

double L1QuadraticObjective::value(const Vector& x) const {
  return q_.value(x) + lambda_ * x.lpNorm<1>();
}

double L1QuadraticObjective::coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                                                 double new_xi) const {
  return q_.coord_diff_quotient(y, i, old_xi, new_xi) + lambda_ * abs_quotient(old_xi, new_xi, 0.0);
}

Interval L1QuadraticObjective::coord_clarke_interval(const Vector& y, std::size_t i) const {
  return lambda_ * abs_subdiff(y[idx(i)], 0.0) + q_.partial(y, i);
}

std::unique_ptr<SweepCursor> L1QuadraticObjective::cursor(const Vector& x) const {
  check_size(x, "cursor");
  return std::make_unique<QuadraticCursor>(q_, x, lambda_);
}

// ---------------------------------------------------------------------------------------------

StudentTObjective::StudentTObjective(std::size_t height, std::size_t width, Vector x_delta,
                                     double phi_h, double phi_v)
    : h_(height), w_(width), x_delta_(std::move(x_delta)), phi_h_(phi_h), phi_v_(phi_v) {
  if (h_ == 0 || w_ == 0) throw PreconditionError("StudentTObjective: empty image");
  if (x_delta_.size() != idx(h_ * w_))
    throw PreconditionError("StudentTObjective: x_delta size does not match height * width");
  if (phi_h_ < 0.0 || phi_v_ < 0.0)
    throw PreconditionError("StudentTObjective: filter weights must be nonnegative");
}

double StudentTObjective::regularizer(const Vector& x) const {
  check_size(x, "student-t value");
  double total = 0.0;
  for (std::size_t r = 0; r < h_; ++r)
    for (std::size_t c = 0; c < w_; ++c) {
      const double v = x[idx(r * w_ + c)];
      if (c + 1 < w_) {
        const double d = x[idx(r * w_ + c + 1)] - v;
        total += phi_h_ * std::log1p(d * d);
      }
      if (r + 1 < h_) {
        const double d = x[idx((r + 1) * w_ + c)] - v;
        total += phi_v_ * std::log1p(d * d);
      }
    }
  return total;
}

double StudentTObjective::value(const Vector& x) const {
  return regularizer(x) + (x - x_delta_).lpNorm<1>();
}

double StudentTObjective::smooth_partial(const Vector& y, std::size_t i) const {
  const std::size_t r = i / w_;
  const std::size_t c = i % w_;
  const double v = y[idx(i)];
  // psi'(d) = 2d / (1 + d^2); d depends on v with slope -1 (forward) or +1 (backward).
  auto dpsi = [](double d) { return 2.0 * d / (1.0 + d * d); };
  double g = 0.0;
  if (c + 1 < w_) g -= phi_h_ * dpsi(y[idx(i + 1)] - v);
  if (c > 0) g += phi_h_ * dpsi(v - y[idx(i - 1)]);
  if (r + 1 < h_) g -= phi_v_ * dpsi(y[idx(i + w_)] - v);
  if (r > 0) g += phi_v_ * dpsi(v - y[idx(i - w_)]);
  return g;
}

double StudentTObjective::coord_diff_quotient(const Vector& y, std::size_t i, double old_xi,
                                              double new_xi) const {
  if (is_zero_step(old_xi, new_xi))
    return smooth_partial(y, i) + sign(old_xi - x_delta_[idx(i)]);

  const std::size_t r = i / w_;
  const std::size_t c = i % w_;
  const double delta = new_xi - old_xi;
  // log(1 + a^2) - log(1 + b^2) = log1p((a - b)(a + b) / (1 + b^2)) avoids cancellation.
  auto term = [delta](double d_old, double d_new) {
    return std::log1p((d_new - d_old) * (d_new + d_old) / (1.0 + d_old * d_old)) / delta;
  };
  double dq = 0.0;
  if (c + 1 < w_) {
    const double d = y[idx(i + 1)] - old_xi;
    dq += phi_h_ * term(d, d - delta);
  }
  if (c > 0) {
    const double d = old_xi - y[idx(i - 1)];
    dq += phi_h_ * term(d, d + delta);
  }
  if (r + 1 < h_) {
    const double d = y[idx(i + w_)] - old_xi;
    dq += phi_v_ * term(d, d - delta);
  }
  if (r > 0) {
    const double d = old_xi - y[idx(i - w_)];
    dq += phi_v_ * term(d, d + delta);
  }
  return dq + abs_quotient(old_xi, new_xi, x_delta_[idx(i)]);
}

Interval StudentTObjective::coord_clarke_interval(const Vector& y, std::size_t i) const {
  return abs_subdiff(y[idx(i)], x_delta_[idx(i)]) + smooth_partial(y, i);
}

std::optional<double> StudentTObjective::lipschitz_hint(std::size_t /*i*/) const {
  // |psi'| <= 1 and each pixel enters at most two differences per direction.
  return 2.0 * (phi_h_ + phi_v_) + 1.0;
}

double quadratic_value(const QuadraticObjective& q, const Vector& x) { return q.value(x); }

double quadratic_coord_dq(const QuadraticObjective& q, const Vector& y, std::size_t i,
                          double old_xi, double new_xi) {
  return q.coord_diff_quotient(y, i, old_xi, new_xi);
}

double student_t_value(const StudentTObjective& s, const Vector& x) { return s.value(x); }

double student_t_coord_dq(const StudentTObjective& s, const Vector& y, std::size_t i,
                          double old_xi, double new_xi) {
  return s.coord_diff_quotient(y, i, old_xi, new_xi);
}

}  // namespace bia
