#pragma once

// Fourth-order linearly implicit Rosenbrock stepper (Kaps-Rentrop form with
// Shampine's coefficients) with an embedded third-order error estimate.
//
// The system type supplies the structure-aware pieces:
//
//   std::size_t size() const;
//   void rhs(std::span<const double> u, std::span<double> du);
//   void linearize(std::span<const double> u);      // Jacobian at u
//   void solve(double shift, std::span<double> r);  // (shift I - J) z = r, in place
//   bool admissible(std::span<const double> u);     // false -> reject the step
//   void accept(std::span<double> u);               // post-step hook
//
// Only autonomous systems are handled (no df/dt term).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "subdep/errors.hpp"

namespace subdep::numerics {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// A step shorter than this fraction of max(|t|, 1) is an underflow.
  double min_step_fraction = 1e-15;
  std::size_t max_steps = 100'000'000;
};

template <class System>
class Rosenbrock4 {
 public:
  explicit Rosenbrock4(std::size_t dim)
      : f_(dim), g1_(dim), g2_(dim), g3_(dim), g4_(dim), work_(dim), trial_(dim) {}

  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }

  /// Advances u from t to exactly t_target. `h` is the proposed step on entry
  /// and the proposal for the next call on exit.
  void advance(System& sys, std::vector<double>& u, double& t, double t_target,
               double& h, const StepControl& ctl) {
    while (t < t_target) {
      if (accepted_ + rejected_ >= ctl.max_steps) {
        fail(ErrorCode::StepSizeUnderflow,
             "integrator exceeded the maximum number of steps");
      }
      const bool clipped = t + h >= t_target;
      const double step = clipped ? t_target - t : h;
      const double h_min = ctl.min_step_fraction * std::max(std::abs(t), 1.0);
      if (step < h_min && !clipped) {
        fail(nonpositive_ ? ErrorCode::NonPositiveState : ErrorCode::StepSizeUnderflow,
             std::string(nonpositive_
                             ? "negative concentrations persisted down to the minimum step"
                             : "step size underflow") +
                 " at t = " + std::to_string(t));
      }

      const double err = attempt(sys, u, step, ctl);
      if (err <= 1.0 && sys.admissible(trial_)) {
        ++accepted_;
        nonpositive_ = false;
        u.swap(trial_);
        sys.accept(u);
        t = clipped ? t_target : t + step;
        double next = err > kErrCon ? kSafety * step * std::pow(err, kPGrow)
                                    : kGrow * step;
        h = clipped ? std::max(next, h) : next;
      } else {
        ++rejected_;
        if (err <= 1.0) {
          nonpositive_ = true;
          h = kShrink * step;
        } else {
          h = std::max(kSafety * step * std::pow(err, kPShrink), kShrink * step);
        }
      }
    }
  }

 private:
  // Shampine's parameter set
  static constexpr double kGam = 0.5;
  static constexpr double kA21 = 2.0;
  static constexpr double kA31 = 48.0 / 25.0;
  static constexpr double kA32 = 6.0 / 25.0;
  static constexpr double kC21 = -8.0;
  static constexpr double kC31 = 372.0 / 25.0;
  static constexpr double kC32 = 12.0 / 5.0;
  static constexpr double kC41 = -112.0 / 125.0;
  static constexpr double kC42 = -54.0 / 125.0;
  static constexpr double kC43 = -2.0 / 5.0;
  static constexpr double kB1 = 19.0 / 9.0;
  static constexpr double kB2 = 1.0 / 2.0;
  static constexpr double kB3 = 25.0 / 108.0;
  static constexpr double kB4 = 125.0 / 108.0;
  static constexpr double kE1 = 17.0 / 54.0;
  static constexpr double kE2 = 7.0 / 36.0;
  static constexpr double kE3 = 0.0;
  static constexpr double kE4 = 125.0 / 108.0;

  static constexpr double kSafety = 0.9;
  static constexpr double kGrow = 1.5;
  static constexpr double kPGrow = -0.25;
  static constexpr double kShrink = 0.5;
  static constexpr double kPShrink = -1.0 / 3.0;
  static constexpr double kErrCon = 0.1296;  // (kGrow / kSafety)^(1 / kPGrow)

  // Computes the trial state into trial_ and returns the scaled error norm.
  double attempt(System& sys, const std::vector<double>& u, double h,
                 const StepControl& ctl) {
    const std::size_t dim = u.size();
    const double shift = 1.0 / (kGam * h);
    const double inv_h = 1.0 / h;

    sys.linearize(u);
    sys.rhs(u, f_);
    std::copy(f_.begin(), f_.end(), g1_.begin());
    sys.solve(shift, g1_);

    for (std::size_t i = 0; i < dim; ++i) work_[i] = u[i] + kA21 * g1_[i];
    sys.rhs(work_, f_);
    for (std::size_t i = 0; i < dim; ++i) g2_[i] = f_[i] + kC21 * g1_[i] * inv_h;
    sys.solve(shift, g2_);

    for (std::size_t i = 0; i < dim; ++i) {
      work_[i] = u[i] + kA31 * g1_[i] + kA32 * g2_[i];
    }
    sys.rhs(work_, f_);
    for (std::size_t i = 0; i < dim; ++i) {
      g3_[i] = f_[i] + (kC31 * g1_[i] + kC32 * g2_[i]) * inv_h;
    }
    sys.solve(shift, g3_);

    for (std::size_t i = 0; i < dim; ++i) {
      g4_[i] = f_[i] + (kC41 * g1_[i] + kC42 * g2_[i] + kC43 * g3_[i]) * inv_h;
    }
    sys.solve(shift, g4_);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      trial_[i] = u[i] + kB1 * g1_[i] + kB2 * g2_[i] + kB3 * g3_[i] + kB4 * g4_[i];
      const double e = kE1 * g1_[i] + kE2 * g2_[i] + kE3 * g3_[i] + kE4 * g4_[i];
      const double scale =
          ctl.abs_tol + ctl.rel_tol * std::max(std::abs(u[i]), std::abs(trial_[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    return std::isfinite(err) ? err : 1e300;
  }

  std::vector<double> f_, g1_, g2_, g3_, g4_, work_, trial_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  bool nonpositive_ = false;
};

}  // namespace subdep::numerics
