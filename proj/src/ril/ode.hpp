/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <boost/numeric/odeint.hpp>
#include <functional>
#include <vector>

namespace ril {

using OdeState = std::vector<double>;
using OdeSystem = std::function<void(const OdeState&, OdeState&, double)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.01;
  double initial_step = 1e-4;
};

// Adaptive Dormand-Prince 5(4) with dense output, advanced one accepted step at a time.
class DenseMarcher {
 public:
  DenseMarcher(OdeSystem system, const OdeState& x0, double t0, const OdeOptions& opt)
      : system_(std::move(system)),
        stepper_(boost::numeric::odeint::make_dense_output(
            opt.atol, opt.rtol, opt.max_step,
            boost::numeric::odeint::runge_kutta_dopri5<OdeState>())) {
    stepper_.initialize(x0, t0, opt.initial_step);
  }

  void step() { stepper_.do_step(std::ref(system_)); }
  double t() const { return stepper_.current_time(); }
  double t_prev() const { return stepper_.previous_time(); }
  const OdeState& x() const { return stepper_.current_state(); }
  const OdeState& x_prev() const { return stepper_.previous_state(); }

  OdeState at(double t) const {
    OdeState out(x().size());
    stepper_.calc_state(t, out);
    return out;
  }

  // Root of f on the last step, assuming f changes sign across it.
  template <class Fn>
  double locate(Fn f) const {
    double a = t_prev(), b = t();
    double fa = f(x_prev());
    for (int i = 0; i < 100 && b - a > 1e-15 * (1.0 + std::abs(b)); ++i) {
      const double c = 0.5 * (a + b);
      const double fc = f(at(c));
      if ((fc > 0) == (fa > 0)) {
        a = c;
        fa = fc;
      } else {
        b = c;
      }
    }
    return 0.5 * (a + b);
  }

 private:
  using Stepper = boost::numeric::odeint::result_of::make_dense_output<
      boost::numeric::odeint::runge_kutta_dopri5<OdeState>>::type;
  OdeSystem system_;
  Stepper stepper_;
};

}  // namespace ril
