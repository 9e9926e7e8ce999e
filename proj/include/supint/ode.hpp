// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) with
// dense output, generic over the state dimension.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace supint {

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <std::size_t N>
using State = std::array<double, N>;

// Dormand-Prince 5(4) tableau with the 4th-order dense-output polynomial.
template <std::size_t N>
class Dopri5 {
public:
  using Rhs = std::function<State<N>(double, const State<N>&)>;

  struct Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_init = 1e-3;
    double h_min = 1e-14;
    double h_max = 1.0;
    std::size_t max_steps = 20'000'000;
  };

  // One accepted step: solution segment [t0, t1] with dense-output data.
  struct Segment {
    double t0 = 0, t1 = 0;
    State<N> y0{}, y1{};
    std::array<State<N>, 5> dense{};  // interpolation coefficients

    State<N> eval(double t) const {
      const double h = t1 - t0;
      const double th = (t - t0) / h;
      const double th1 = 1.0 - th;
      State<N> y;
      for (std::size_t i = 0; i < N; ++i) {
        // Hairer's contd5 nested form.
        y[i] = dense[0][i] +
               th * (dense[1][i] +
                     th1 * (dense[2][i] +
                            th * (dense[3][i] + th1 * dense[4][i])));
      }
      return y;
    }
  };

  Dopri5(Rhs rhs, Options opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

  // Integrate from (t, y) to t_end, invoking on_step after every accepted
  // step. on_step may return false to stop early.
  template <typename OnStep>
  void integrate(double t, State<N> y, double t_end, OnStep&& on_step) {
    const double dir = (t_end >= t) ? 1.0 : -1.0;
    double h = dir * std::min(std::abs(opt_.h_init), std::abs(t_end - t));
    State<N> k1 = rhs_(t, y);
    std::size_t nsteps = 0;
    while (dir * (t_end - t) > 0) {
      if (++nsteps > opt_.max_steps)
        throw StepFailure("dopri5: step budget exhausted");
      if (std::abs(h) > opt_.h_max) h = dir * opt_.h_max;
      if (dir * (t + h - t_end) > 0) h = t_end - t;

      Segment seg;
      double err;
      State<N> y1, k_last;
      if (!attempt(t, y, k1, h, y1, k_last, err, seg)) {
        // RHS threw or produced non-finite values: shrink and retry.
        h *= 0.25;
        if (std::abs(h) < opt_.h_min)
          throw StepFailure("dopri5: repeated step rejection at t=" +
                            std::to_string(t));
        continue;
      }
      if (err <= 1.0) {
        t += h;
        y = y1;
        k1 = k_last;  // FSAL
        if (!on_step(seg)) return;
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
      } else {
        h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
        if (std::abs(h) < opt_.h_min)
          throw StepFailure("dopri5: step size underflow at t=" +
                            std::to_string(t));
      }
    }
  }

private:
  bool attempt(double t, const State<N>& y, const State<N>& k1, double h,
               State<N>& y1, State<N>& k_last, double& err, Segment& seg) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;
    try {
      State<N> k2, k3, k4, k5, k6, k7, yt;
      auto lin = [&](auto&&... terms) {
        State<N> r;
        for (std::size_t i = 0; i < N; ++i)
          r[i] = y[i] + h * (... + terms(i));
        return r;
      };
      yt = lin([&](auto i) { return a21 * k1[i]; });
      k2 = rhs_(t + c2 * h, yt);
      yt = lin([&](auto i) { return a31 * k1[i]; },
               [&](auto i) { return a32 * k2[i]; });
      k3 = rhs_(t + c3 * h, yt);
      yt = lin([&](auto i) { return a41 * k1[i]; },
               [&](auto i) { return a42 * k2[i]; },
               [&](auto i) { return a43 * k3[i]; });
      k4 = rhs_(t + c4 * h, yt);
      yt = lin([&](auto i) { return a51 * k1[i]; },
               [&](auto i) { return a52 * k2[i]; },
               [&](auto i) { return a53 * k3[i]; },
               [&](auto i) { return a54 * k4[i]; });
      k5 = rhs_(t + c5 * h, yt);
      yt = lin([&](auto i) { return a61 * k1[i]; },
               [&](auto i) { return a62 * k2[i]; },
               [&](auto i) { return a63 * k3[i]; },
               [&](auto i) { return a64 * k4[i]; },
               [&](auto i) { return a65 * k5[i]; });
      k6 = rhs_(t + h, yt);
      for (std::size_t i = 0; i < N; ++i)
        y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                            b5 * k5[i] + b6 * k6[i]);
      k7 = rhs_(t + h, y1);

      err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc =
            opt_.atol +
            opt_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
        err += (e / sc) * (e / sc);
        if (!std::isfinite(y1[i])) return false;
      }
      err = std::sqrt(err / N);

      seg.t0 = t;
      seg.t1 = t + h;
      seg.y0 = y;
      seg.y1 = y1;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = y1[i] - y[i];
        const double bspl = h * k1[i] - dy;
        seg.dense[0][i] = y[i];
        seg.dense[1][i] = dy;
        seg.dense[2][i] = bspl;
        seg.dense[3][i] = dy - h * k7[i] - bspl;
        seg.dense[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                               d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      k_last = k7;
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  Rhs rhs_;
  Options opt_;
};

}  // namespace supint
