#include "gpustress/thermal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpustress {

namespace {

struct Series {
    Eigen::VectorXd t;  // shifted so t[0] == 0
    Eigen::VectorXd y;
    double t_first = 0.0;
};

Series extract(std::span<const TelemetrySample> telemetry) {
    Series s;
    const auto n = static_cast<Eigen::Index>(telemetry.size());
    s.t.resize(n);
    s.y.resize(n);
    s.t_first = telemetry.front().t_s;
    for (Eigen::Index i = 0; i < n; ++i) {
        s.t[i] = telemetry[static_cast<std::size_t>(i)].t_s - s.t_first;
        s.y[i] = telemetry[static_cast<std::size_t>(i)].temp_c;
    }
    return s;
}

Eigen::VectorXd model(const Eigen::VectorXd& t, double t_inf, double t0, double tau) {
    return t_inf + ((t0 - t_inf) * (-t / tau).array().exp()).matrix().array();
}

double cost(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
            double t_inf, double t0, double tau) {
    return (y - model(t, t_inf, t0, tau)).squaredNorm();
}

// Log-linear initial estimate: pick an asymptote guess one degree beyond the
// extremum the series approaches, regress ln|A - y| on t for the slope.
void initial_estimate(const Series& s, double& t_inf, double& t0, double& tau) {
    const bool heating = s.y[s.y.size() - 1] >= s.y[0];
    const double asymptote = heating ? s.y.maxCoeff() + 1.0 : s.y.minCoeff() - 1.0;

    const Eigen::Index n = s.t.size();
    Eigen::VectorXd logs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        logs[i] = std::log(std::abs(asymptote - s.y[i]));
    }
    const double t_mean = s.t.mean();
    const double l_mean = logs.mean();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        num += (s.t[i] - t_mean) * (logs[i] - l_mean);
        den += (s.t[i] - t_mean) * (s.t[i] - t_mean);
    }
    const double slope = den > 0.0 ? num / den : 0.0;

    t_inf = asymptote;
    t0 = s.y[0];
    tau = slope < 0.0 ? -1.0 / slope : s.t[n - 1] / 3.0;
    tau = std::clamp(tau, kTauMin, kTauMax);
}

void project_bounds(double& t_inf, double& tau, std::vector<std::string>& flags) {
    // tau is clamped inside the refinement loop, so it can only end up *on*
    // a bound, never beyond one; a pinned tau still means the constraint bit.
    if (tau <= kTauMin || tau >= kTauMax) {
        tau = std::clamp(tau, kTauMin, kTauMax);
        if (std::find(flags.begin(), flags.end(), "tau at bound") == flags.end()) {
            flags.push_back("tau at bound");
        }
    }
    if (t_inf < kTInfMin || t_inf > kTInfMax) {
        t_inf = std::clamp(t_inf, kTInfMin, kTInfMax);
        if (std::find(flags.begin(), flags.end(), "t_inf at bound") == flags.end()) {
            flags.push_back("t_inf at bound");
        }
    }
}

}  // namespace

ThermalFit fit_exponential(std::span<const TelemetrySample> telemetry) {
    if (telemetry.size() < 10) {
        throw std::invalid_argument("fit_exponential: need at least 10 samples");
    }
    const double span = telemetry.back().t_s - telemetry.front().t_s;
    if (!(span > 0.0)) {
        throw std::invalid_argument("fit_exponential: zero time span");
    }

    const Series s = extract(telemetry);
    const Eigen::Index n = s.t.size();

    ThermalFit fit;

    // Flat series: no transient to fit.
    if (s.y.maxCoeff() - s.y.minCoeff() < 1e-9) {
        fit.t_inf_c = s.y.mean();
        fit.t0_c = fit.t_inf_c;
        fit.tau_s = kTauMin;
        fit.t_r_s = 0.0;
        fit.rmse_c = 0.0;
        fit.steady_start_s = s.t_first;
        fit.steady_end_s = telemetry.back().t_s;
        fit.converged = true;
        fit.flags.push_back("no transient");
        return fit;
    }

    double t_inf, t0, tau;
    initial_estimate(s, t_inf, t0, tau);

    constexpr int kMaxIterations = 200;
    constexpr double kStepTolerance = 1e-9;
    bool converged = false;

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Eigen::ArrayXd decay = (-s.t.array() / tau).exp();
        const Eigen::VectorXd residual =
            s.y - (t_inf + (t0 - t_inf) * decay).matrix();

        Eigen::MatrixXd jacobian(n, 3);  // d(model)/d(t_inf, t0, tau)
        jacobian.col(0) = (1.0 - decay).matrix();
        jacobian.col(1) = decay.matrix();
        jacobian.col(2) = ((t0 - t_inf) * decay * s.t.array() / (tau * tau)).matrix();

        const Eigen::Matrix3d normal = jacobian.transpose() * jacobian;
        const Eigen::Vector3d rhs = jacobian.transpose() * residual;
        Eigen::Vector3d step = normal.ldlt().solve(rhs);
        if (!step.allFinite()) break;

        // Damping: halve the step until the cost does not increase.
        const double current_cost = residual.squaredNorm();
        double scale = 1.0;
        double nt_inf = t_inf, nt0 = t0, ntau = tau;
        bool accepted = false;
        for (int halving = 0; halving < 25; ++halving) {
            nt_inf = t_inf + scale * step[0];
            nt0 = t0 + scale * step[1];
            ntau = std::clamp(tau + scale * step[2], kTauMin, kTauMax);
            if (cost(s.t, s.y, nt_inf, nt0, ntau) <= current_cost) {
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break;  // no descent direction left; treat as stalled

        const double param_norm =
            std::sqrt(t_inf * t_inf + t0 * t0 + tau * tau) + 1e-30;
        const double step_norm = std::sqrt((nt_inf - t_inf) * (nt_inf - t_inf) +
                                           (nt0 - t0) * (nt0 - t0) +
                                           (ntau - tau) * (ntau - tau));
        t_inf = nt_inf;
        t0 = nt0;
        tau = ntau;
        if (step_norm / param_norm < kStepTolerance) {
            converged = true;
            break;
        }
    }

    project_bounds(t_inf, tau, fit.flags);

    fit.t_inf_c = t_inf;
    fit.t0_c = t0;
    fit.tau_s = tau;
    fit.t_r_s = tau * kRiseTimeFactor;
    fit.rmse_c = std::sqrt(cost(s.t, s.y, t_inf, t0, tau) / static_cast<double>(n));
    fit.converged = converged;
    if (!converged) fit.flags.push_back("unconverged");

    const double t_last = telemetry.back().t_s;
    fit.steady_start_s = std::min(s.t_first + fit.t_r_s, t_last);
    fit.steady_end_s = t_last;
    return fit;
}

double steady_state_temp(std::span<const TelemetrySample> telemetry,
                         const ThermalFit& fit, Warnings* warnings) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const TelemetrySample& s : telemetry) {
        if (s.t_s >= fit.steady_start_s && s.t_s <= fit.steady_end_s) {
            sum += s.temp_c;
            ++count;
        }
    }
    if (count == 0) {
        if (warnings) {
            warnings->add("steady_state_temp: empty steady window; using fitted asymptote");
        }
        return fit.t_inf_c;
    }
    return sum / static_cast<double>(count);
}

}  // namespace gpustress
