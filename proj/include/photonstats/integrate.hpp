// integrate.hpp: Adaptive Dormand–Prince 5(4) integrator for complex linear ODEs

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "photonstats/hilbert.hpp"

namespace photonstats {

struct StepperOptions {
    double rtol{1e-10};
    double atol{1e-12};
    double initial_step{0.0}; // 0: pick from the derivative scale
    long max_steps{20'000'000};
};

struct IntegrationStats {
    long accepted{0};
    long rejected{0};
    long rhs_evaluations{0};
};

namespace detail {

inline void check_time_grid(std::span<const double> times) {
    double prev = 0.0;
    for (double t : times) {
        if (!std::isfinite(t) || t < 0.0) throw ValidationError("time grid must be finite and non-negative");
        if (t < prev) throw ValidationError("time grid must be non-decreasing");
        prev = t;
    }
}

inline double scaled_rms(const ComplexVector& err, const ComplexVector& y0, const ComplexVector& y1,
                         const StepperOptions& opt) {
    const auto scale = opt.atol + opt.rtol * y0.array().abs().max(y1.array().abs());
    return std::sqrt((err.array().abs() / scale).square().mean());
}

} // namespace detail

// Integrates dy/dt = rhs(y) from t = 0 and returns y at every entry of `times`.
// `rhs(y, dydt)` must write the derivative into a preallocated vector.
template <class Rhs>
std::vector<ComplexVector> integrate_adaptive(Rhs&& rhs, const ComplexVector& y0, std::span<const double> times,
                                              const StepperOptions& opt = {}, IntegrationStats* stats = nullptr) {
    detail::check_time_grid(times);
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5; // autonomous system: stage times unused

    IntegrationStats local;
    IntegrationStats& st = stats ? *stats : local;

    const Eigen::Index n = y0.size();
    ComplexVector y = y0, y_new(n), tmp(n), err(n);
    ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

    std::vector<ComplexVector> out;
    out.reserve(times.size());

    rhs(y, k1);
    ++st.rhs_evaluations;

    double h = opt.initial_step;
    if (h <= 0.0) {
        const ComplexVector zero = ComplexVector::Zero(n);
        const double d0 = detail::scaled_rms(y, zero, y, opt);
        const double d1 = detail::scaled_rms(k1, zero, y, opt);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    }

    double t = 0.0;
    for (double target : times) {
        while (t < target) {
            if (st.accepted + st.rejected >= opt.max_steps)
                throw ConvergenceError("integrator exceeded " + std::to_string(opt.max_steps) + " steps");
            bool last = false;
            double step = h;
            if (t + step >= target) {
                step = target - t;
                last = true;
            }
            tmp = y + step * a21 * k1;
            rhs(tmp, k2);
            tmp = y + step * (a31 * k1 + a32 * k2);
            rhs(tmp, k3);
            tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(tmp, k4);
            tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(tmp, k5);
            tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(tmp, k6);
            y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(y_new, k7);
            st.rhs_evaluations += 6;
            err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const double norm = detail::scaled_rms(err, y, y_new, opt);
            if (!std::isfinite(norm)) throw ConvergenceError("integrator produced non-finite values");
            if (norm <= 1.0) {
                ++st.accepted;
                t = last ? target : t + step;
                y.swap(y_new);
                k1.swap(k7);
                const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
                // A step shortened to land on an output time says nothing about the
                // natural step size, so keep the previous h in that case.
                h = last ? std::max(h, step * grow) : step * grow;
            } else {
                ++st.rejected;
                h = step * std::max(0.2, 0.9 * std::pow(norm, -0.2));
                if (h < 1e-14 * std::max(1.0, t))
                    throw ConvergenceError("integrator step size underflow at t = " + std::to_string(t));
            }
        }
        out.push_back(y);
    }
    return out;
}

} // namespace photonstats
