#include "spinrs/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spinrs {

std::string to_string(StateLayout l) {
    switch (l) {
        case StateLayout::rs: return "rs";
        case StateLayout::spin: return "spin";
        default: return "n2";
    }
}

std::vector<double> linspace(double t0, double t1, int m) {
    std::vector<double> ts(m + 1);
    for (int i = 0; i <= m; ++i) ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / m;
    ts.back() = t1;
    return ts;
}

namespace {

// Dormand–Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b_i - bhat_i, error coefficients of the embedded 4th-order solution
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// continuous-extension coefficients
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseBlock {
    double t_left = 0.0, h = 0.0;
    std::vector<cplx> r1, r2, r3, r4, r5;

    std::vector<cplx> eval(double t) const {
        const double th = (t - t_left) / h, th1 = 1.0 - th;
        std::vector<cplx> y(r1.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

}  // namespace

Trajectory integrate(const FlatRhs& rhs, const std::vector<cplx>& y0, double t0, double t1, double rel_tol,
                     double abs_tol, const std::vector<double>& sample_times, StateLayout layout, int n) {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2))
        throw std::invalid_argument("integrate: tolerances must lie in (0, 1e-2]");
    if (t1 == t0) throw std::invalid_argument("integrate: empty integration span");
    const double dir = t1 > t0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        const double s = sample_times[i];
        if ((s - t0) * dir < -1e-14 || (s - t1) * dir > 1e-14)
            throw std::invalid_argument("integrate: sample time outside the integration span");
        if (i > 0 && (s - sample_times[i - 1]) * dir < 0.0)
            throw std::invalid_argument("integrate: sample times must be monotone");
    }

    Trajectory traj;
    traj.layout = layout;
    traj.n = n;
    traj.stats.rel_tol = rel_tol;
    traj.stats.abs_tol = abs_tol;

    const std::size_t dim = y0.size();
    std::size_t next_sample = 0;
    auto emit_initial = [&] {
        while (next_sample < sample_times.size() && std::abs(sample_times[next_sample] - t0) <= 1e-14) {
            traj.times.push_back(sample_times[next_sample]);
            traj.states.push_back(y0);
            ++next_sample;
        }
    };

    auto scaled_err = [&](const std::vector<cplx>& ya, const std::vector<cplx>& yb, const std::vector<cplx>& err) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sc = abs_tol + rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double r = std::abs(err[i]) / sc;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(dim));
    };

    double t = t0;
    std::vector<cplx> y = y0;
    std::vector<cplx> k1, k2, k3, k4, k5, k6, k7, ytmp(dim), y5(dim), errv(dim);

    auto terminate = [&](const std::string& reason) {
        traj.stats.terminated_early = true;
        traj.stats.termination_time = t;
        traj.stats.termination_reason = reason;
    };

    try {
        k1 = rhs(t, y);
    } catch (const pole_proximity_error& e) {
        emit_initial();
        terminate(e.what());
        return traj;
    }
    emit_initial();

    // initial step size: compare the explicit Euler scale against a second
    // derivative estimate (Hairer–Nørsett–Wanner, II.4)
    double h;
    {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sc = abs_tol + rel_tol * std::abs(y[i]);
            d0 += std::pow(std::abs(y[i]) / sc, 2);
            d1n += std::pow(std::abs(k1[i]) / sc, 2);
        }
        d0 = std::sqrt(d0 / dim);
        d1n = std::sqrt(d1n / dim);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, std::abs(t1 - t0));
        double d2 = 0.0;
        try {
            for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
            std::vector<cplx> f1 = rhs(t + dir * h0, ytmp);
            for (std::size_t i = 0; i < dim; ++i) {
                const double sc = abs_tol + rel_tol * std::abs(y[i]);
                d2 += std::pow(std::abs(f1[i] - k1[i]) / sc, 2);
            }
            d2 = std::sqrt(d2 / dim) / h0;
        } catch (const pole_proximity_error&) {
            d2 = 0.0;  // probe stepped into the guard zone; fall back to the Euler scale
        }
        const double dm = std::max(d1n, d2);
        const double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h0 * 1e-3);
        h = dir * std::min({100.0 * h0, h1, std::abs(t1 - t0)});
    }

    constexpr long kMaxSteps = 10'000'000;
    const double uround = std::numeric_limits<double>::epsilon();

    while (next_sample < sample_times.size() || (t - t1) * dir < 0.0) {
        if (traj.stats.accepted_steps + traj.stats.rejected_steps >= kMaxSteps) {
            terminate("step budget exhausted");
            return traj;
        }
        if (std::abs(h) < 4.0 * uround * std::max(std::abs(t), 1.0)) {
            terminate("step size underflow");
            return traj;
        }
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        bool hit_pole = false;
        std::string pole_reason;
        double err = 0.0;
        try {
            for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
            k2 = rhs(t + c2 * h, ytmp);
            for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            k3 = rhs(t + c3 * h, ytmp);
            for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs(t + c4 * h, ytmp);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs(t + c5 * h, ytmp);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = rhs(t + h, ytmp);
            for (std::size_t i = 0; i < dim; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            k7 = rhs(t + h, y5);
            for (std::size_t i = 0; i < dim; ++i)
                errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            err = scaled_err(y, y5, errv);
        } catch (const pole_proximity_error& e) {
            hit_pole = true;
            pole_reason = e.what();
        }

        if (hit_pole) {
            // try to sneak closer with smaller steps before giving up
            if (std::abs(h) > 16.0 * uround * std::max(std::abs(t), 1.0)) {
                h *= 0.25;
                ++traj.stats.rejected_steps;
                continue;
            }
            terminate(pole_reason);
            return traj;
        }

        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            ++traj.stats.rejected_steps;
            continue;
        }

        // accepted: build the continuous extension, emit samples in (t, t+h]
        DenseBlock db;
        db.t_left = t;
        db.h = h;
        db.r1 = y;
        db.r2.resize(dim);
        db.r3.resize(dim);
        db.r4.resize(dim);
        db.r5.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const cplx ydiff = y5[i] - y[i];
            const cplx bspl = h * k1[i] - ydiff;
            db.r2[i] = ydiff;
            db.r3[i] = bspl;
            db.r4[i] = ydiff - h * k7[i] - bspl;
            db.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        const double t_new = t + h;
        while (next_sample < sample_times.size() && (sample_times[next_sample] - t_new) * dir <= 1e-14) {
            traj.times.push_back(sample_times[next_sample]);
            traj.states.push_back(db.eval(sample_times[next_sample]));
            ++next_sample;
        }

        t = t_new;
        y = y5;
        k1 = k7;  // first-same-as-last
        ++traj.stats.accepted_steps;
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }

    return traj;
}

}  // namespace spinrs
