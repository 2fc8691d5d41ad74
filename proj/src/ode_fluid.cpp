#include "confdfs/ode_fluid.hpp"

#include <algorithm>
#include <cmath>

#include "confdfs/errors.hpp"

namespace confdfs {

namespace {

constexpr double kStageSlack = 1e-6;   // allowed stage-state negativity
constexpr double kAcceptSlack = 1e-9;  // allowed accepted-state negativity
constexpr double kRhoFloor = 1e-6;
constexpr double kCriticalGap = 1e-6;

double weighted_sum(const Eigen::ArrayXd& z, int power) {
    double s = 0.0;
    for (long i = 1; i < z.size(); ++i) {
        double w = power == 1 ? double(i) : double(i) * double(i - 1);
        s += w * z[i];
    }
    return s;
}

}  // namespace

TruncationSpec TruncationSpec::from_epsilon(const DegreeDistribution& dist,
                                            double eps) {
    if (eps <= 0.0) throw DomainError("epsilon must be positive");
    TruncationSpec spec;
    spec.epsilon = eps;
    spec.delta_cap = int(std::floor(std::sqrt(dist.second_moment() / eps)));
    return spec;
}

double state_ghat(const Eigen::ArrayXd& z, double s) {
    double num = 0.0;
    for (long i = z.size() - 1; i >= 1; --i) num = num * s + double(i) * z[i];
    return num / weighted_sum(z, 1);
}

double state_ghat_deriv(const Eigen::ArrayXd& z, double s) {
    double num = 0.0;
    for (long i = z.size() - 1; i >= 2; --i)
        num = num * s + double(i) * double(i - 1) * z[i];
    return num / weighted_sum(z, 1);
}

double rho_of_state(const Eigen::ArrayXd& z, double hint) {
    double s1 = weighted_sum(z, 1);
    if (!(s1 > 0.0)) throw SubcriticalStateError("edge density exhausted");
    double mean = weighted_sum(z, 2) / s1;  // ghat'(1)
    if (mean <= 1.0 + 1e-12)
        throw SubcriticalStateError("state size-biased mean <= 1");

    auto phi = [&](double r) { return state_ghat(z, 1.0 - r) - (1.0 - r); };
    double lo = 1e-12, hi = 1.0;
    if (hint > 0.0 && hint < 1.0) {
        double a = std::max(1e-12, hint - 0.05);
        double b = std::min(1.0, hint + 0.05);
        if (phi(a) < 0.0 && phi(b) >= 0.0) {
            lo = a;
            hi = b;
        }
    }
    if (phi(lo) >= 0.0) throw SubcriticalStateError("no positive survival root");
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (phi(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double time_drift(double rho) {
    if (rho < kRhoFloor)
        throw SubcriticalStateError("survival probability below floor");
    return (2.0 - rho) / rho;
}

Eigen::ArrayXd density_drift_prime(const Eigen::ArrayXd& z) {
    const long n = z.size();
    double s1 = weighted_sum(z, 1);
    double s2 = weighted_sum(z, 2);
    double factor = (1.0 - s2 / s1) / s1;
    Eigen::ArrayXd out(n);
    for (long i = 0; i < n; ++i) {
        double iz = double(i) * z[i];
        double next = (i + 1 < n) ? double(i + 1) * z[i + 1] : 0.0;
        out[i] = -iz / s1 + factor * (iz - next);
    }
    return out;
}

Eigen::ArrayXd density_drift(const Eigen::ArrayXd& z, double rho) {
    return density_drift_prime(z) / rho;
}

double density_drift_i(const Eigen::ArrayXd& z, double rho, int i) {
    if (i < 0 || i >= z.size()) throw DomainError("degree index out of range");
    double s1 = weighted_sum(z, 1);
    double s2 = weighted_sum(z, 2);
    double iz = double(i) * z[i];
    double next = (i + 1 < z.size()) ? double(i + 1) * z[i + 1] : 0.0;
    return (-iz / s1 + (1.0 - s2 / s1) * (iz - next) / s1) / rho;
}

namespace {

Eigen::ArrayXd initial_state(const DegreeDistribution& dist, int cap) {
    Eigen::ArrayXd z = Eigen::ArrayXd::Zero(cap + 1);
    const Eigen::ArrayXd& m = dist.masses();
    for (long i = 0; i <= cap && i < m.size(); ++i) z[i] = m[i];
    return z;
}

bool state_ok(const Eigen::ArrayXd& z, double slack) {
    return (z >= -slack).all() && weighted_sum(z, 1) > 0.0;
}

/// Shared RK4 driver; `ladder_time` selects the (S) drifts and companion
/// clock, otherwise the (S') drifts.
FluidTrajectory integrate(const DegreeDistribution& initial,
                          const TruncationSpec& trunc, double t_end, double dt,
                          bool ladder_time) {
    if (dt <= 0.0 || dt > 1e-3 + 1e-15)
        throw DomainError("dt must be in (0, 1e-3]");
    FluidTrajectory traj;
    Eigen::ArrayXd z = initial_state(initial, trunc.delta_cap);
    double rho = rho_of_state(z);
    double t = 0.0, clock = 0.0;

    traj.t.push_back(t);
    traj.z.push_back(z);
    traj.rho.push_back(rho);
    if (ladder_time) traj.clock.push_back(clock);

    double step = dt;
    while (t < t_end - 1e-12) {
        double h = std::min(step, t_end - t);
        int halvings = 0;
        for (;;) {
            Eigen::ArrayXd znew;
            double clocknew = clock;
            bool invariant_failed = false;
            try {
                double r1 = rho_of_state(z, rho);
                Eigen::ArrayXd k1 = density_drift_prime(z);
                if (ladder_time) k1 /= r1;

                Eigen::ArrayXd s2 = z + 0.5 * h * k1;
                if (!state_ok(s2, kStageSlack)) { invariant_failed = true; throw StepSizeError("stage"); }
                double r2 = rho_of_state(s2, r1);
                Eigen::ArrayXd k2 = density_drift_prime(s2);
                if (ladder_time) k2 /= r2;

                Eigen::ArrayXd s3 = z + 0.5 * h * k2;
                if (!state_ok(s3, kStageSlack)) { invariant_failed = true; throw StepSizeError("stage"); }
                double r3 = rho_of_state(s3, r2);
                Eigen::ArrayXd k3 = density_drift_prime(s3);
                if (ladder_time) k3 /= r3;

                Eigen::ArrayXd s4 = z + h * k3;
                if (!state_ok(s4, kStageSlack)) { invariant_failed = true; throw StepSizeError("stage"); }
                double r4 = rho_of_state(s4, r3);
                Eigen::ArrayXd k4 = density_drift_prime(s4);
                if (ladder_time) k4 /= r4;

                znew = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if (ladder_time)
                    clocknew = clock + (h / 6.0) * (time_drift(r1) + 2.0 * time_drift(r2) +
                                                    2.0 * time_drift(r3) + time_drift(r4));
                if (!state_ok(znew, kAcceptSlack) || znew.sum() > 1.0 + 1e-9) {
                    invariant_failed = true;
                    throw StepSizeError("accepted state");
                }
            } catch (const SubcriticalStateError&) {
                traj.stop = FluidTrajectory::Stop::Subcritical;
                return traj;
            } catch (const StepSizeError&) {
                if (!invariant_failed) throw;
                if (++halvings > 10)
                    throw StepSizeError("invariant region left even after 10 halvings");
                h /= 2.0;
                step = h;
                continue;
            }

            znew = znew.max(0.0);  // clip float-noise negativity in [-1e-9, 0)
            t += h;
            z = std::move(znew);
            clock = clocknew;
            break;
        }

        try {
            rho = rho_of_state(z, rho);
            if (rho < kRhoFloor || state_ghat_deriv(z, 1.0 - rho) > 1.0 - kCriticalGap) {
                traj.stop = FluidTrajectory::Stop::Subcritical;
                return traj;
            }
        } catch (const SubcriticalStateError&) {
            traj.stop = FluidTrajectory::Stop::Subcritical;
            return traj;
        }
        traj.t.push_back(t);
        traj.z.push_back(z);
        traj.rho.push_back(rho);
        if (ladder_time) traj.clock.push_back(clock);
    }
    return traj;
}

long locate(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    long j = it - xs.begin();
    return std::clamp(j, long(1), long(xs.size()) - 1);
}

}  // namespace

Eigen::ArrayXd FluidTrajectory::state_at(double when) const {
    long j = locate(t, when);
    double w = (t[j] > t[j - 1]) ? (when - t[j - 1]) / (t[j] - t[j - 1]) : 0.0;
    w = std::clamp(w, 0.0, 1.0);
    return z[j - 1] + w * (z[j] - z[j - 1]);
}

double FluidTrajectory::clock_at(double when) const {
    long j = locate(t, when);
    double w = (t[j] > t[j - 1]) ? (when - t[j - 1]) / (t[j] - t[j - 1]) : 0.0;
    w = std::clamp(w, 0.0, 1.0);
    return clock[j - 1] + w * (clock[j] - clock[j - 1]);
}

double FluidTrajectory::density_at(double when, int i) const {
    long j = locate(t, when);
    double w = (t[j] > t[j - 1]) ? (when - t[j - 1]) / (t[j] - t[j - 1]) : 0.0;
    w = std::clamp(w, 0.0, 1.0);
    return z[j - 1][i] + w * (z[j][i] - z[j - 1][i]);
}

FluidTrajectory solve_system(const DegreeDistribution& initial,
                             const TruncationSpec& trunc, double t_end, double dt) {
    return integrate(initial, trunc, t_end, dt, true);
}

FluidTrajectory solve_system_prime(const DegreeDistribution& initial,
                                   const TruncationSpec& trunc, double t_end,
                                   double dt) {
    return integrate(initial, trunc, t_end, dt, false);
}

double t_prime_max(const GenFun& gf) { return alpha_critical(gf); }

Eigen::ArrayXd closed_form_coeffs(const DegreeDistribution& initial, double t,
                                  int max_degree) {
    GenFun gf = GenFun::series(initial);
    if (t < 0.0 || t > t_prime_max(gf) + 1e-12)
        throw DomainError("t outside [0, t'_max]");
    double sigma = gf.inverse(1.0 - t);
    double b = gf.deriv(sigma) / gf.mean();
    return affine_pgf_coefficients(gf.dist().masses(), sigma - b, b, max_degree);
}

Eigen::ArrayXd solve_truncated_linear(const DegreeDistribution& initial,
                                      const TruncationSpec& trunc, double t,
                                      double dt) {
    GenFun gf = GenFun::series(initial);
    if (t < 0.0 || t > t_prime_max(gf) + 1e-12)
        throw DomainError("t outside [0, t'_max]");
    const double mean = gf.mean();
    auto E = [&](double u) {
        double d = gf.deriv(gf.inverse(1.0 - u));
        return d * d / mean;
    };
    auto Eprime = [&](double u) { return -2.0 * gf.deriv2(gf.inverse(1.0 - u)) / mean; };

    Eigen::ArrayXd zc = initial_state(initial, trunc.delta_cap);
    auto rhs = [&](const Eigen::ArrayXd& y, double u) {
        double e = E(u), ep = Eprime(u);
        double decay = ep / (2.0 * e), shift = ep / (2.0 * e) + 1.0 / e;
        Eigen::ArrayXd out(y.size());
        for (long i = 0; i < y.size(); ++i) {
            double next = (i + 1 < y.size()) ? double(i + 1) * y[i + 1] : 0.0;
            out[i] = double(i) * decay * y[i] - next * shift;
        }
        return out;
    };
    double u = 0.0;
    while (u < t - 1e-12) {
        double h = std::min(dt, t - u);
        Eigen::ArrayXd k1 = rhs(zc, u);
        Eigen::ArrayXd k2 = rhs(zc + 0.5 * h * k1, u + 0.5 * h);
        Eigen::ArrayXd k3 = rhs(zc + 0.5 * h * k2, u + 0.5 * h);
        Eigen::ArrayXd k4 = rhs(zc + h * k3, u + h);
        zc += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        u += h;
    }
    return zc;
}

TruncatedIdentityReport verify_truncated_identity(const DegreeDistribution& initial,
                                                  const TruncationSpec& trunc,
                                                  double t, double dt,
                                                  bool analytic_z) {
    GenFun gf = GenFun::series(initial);
    if (t < 0.0 || t > t_prime_max(gf) + 1e-12)
        throw DomainError("t outside [0, t'_max]");

    const int cap = trunc.delta_cap;
    const double mean = gf.mean();
    auto E = [&](double u) {
        double d = gf.deriv(gf.inverse(1.0 - u));
        return d * d / mean;
    };
    auto Eprime = [&](double u) { return -2.0 * gf.deriv2(gf.inverse(1.0 - u)) / mean; };

    Eigen::ArrayXd zc = solve_truncated_linear(initial, trunc, t, dt);

    double zt;
    if (analytic_z) {
        double sigma = gf.inverse(1.0 - t);
        zt = std::sqrt(E(0.0)) * (gf.deriv(sigma) / mean - sigma);
    } else {
        // Z(t) = int_0^t (E'/(2 sqrt E) + 1/sqrt E), composite Simpson
        const int n = 4096;
        const double h = t / n;
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
            double uu = h * j;
            double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            double e = E(uu);
            acc += w * (Eprime(uu) / (2.0 * std::sqrt(e)) + 1.0 / std::sqrt(e));
        }
        zt = acc * h / 3.0;
    }

    const Eigen::ArrayXd& masses = gf.dist().masses();
    auto f_cap = [&](double x) {
        double acc = 0.0;
        for (long k = std::min(long(cap), masses.size() - 1); k >= 0; --k)
            acc = acc * x + masses[k];
        return acc;
    };

    TruncatedIdentityReport rep;
    rep.t = t;
    rep.dt = dt;
    rep.epsilon = trunc.epsilon;
    rep.delta_cap = cap;
    double e0 = std::sqrt(E(0.0)), et = std::sqrt(E(t));
    for (int j = 0; j <= 32; ++j) {
        double s = double(j) / 32.0;
        double lhs = 0.0;
        for (long i = zc.size() - 1; i >= 0; --i) lhs = lhs * s + zc[i];
        double res = std::abs(lhs - f_cap((s * et - zt) / e0));
        rep.sup_residual = std::max(rep.sup_residual, res);
    }
    return rep;
}

TimeChange::TimeChange(FluidTrajectory traj) : traj_(std::move(traj)) {
    if (traj_.clock.size() != traj_.t.size())
        throw DomainError("time change needs a ladder-time trajectory with its clock");
    alpha_.resize(traj_.t.size());
    for (std::size_t j = 0; j < traj_.t.size(); ++j) {
        alpha_[j] = 0.5 * (traj_.t[j] + traj_.clock[j]);
        if (j > 0 && alpha_[j] <= alpha_[j - 1])
            throw DomainError("explored fraction is not strictly increasing");
    }
}

double TimeChange::t_of_alpha(double alpha) const {
    long j = locate(alpha_, alpha);
    double w = (alpha - alpha_[j - 1]) / (alpha_[j] - alpha_[j - 1]);
    w = std::clamp(w, 0.0, 1.0);
    return traj_.t[j - 1] + w * (traj_.t[j] - traj_.t[j - 1]);
}

Eigen::ArrayXd TimeChange::density_at_alpha(double alpha) const {
    long j = locate(alpha_, alpha);
    double w = (alpha - alpha_[j - 1]) / (alpha_[j] - alpha_[j - 1]);
    w = std::clamp(w, 0.0, 1.0);
    return traj_.z[j - 1] + w * (traj_.z[j] - traj_.z[j - 1]);
}

double TimeChange::pgf_at_alpha(double alpha, double s) const {
    Eigen::ArrayXd z = density_at_alpha(alpha);
    double acc = 0.0;
    for (long i = z.size() - 1; i >= 0; --i) acc = acc * s + z[i];
    return acc / (1.0 - alpha);
}

TimeChange time_change(FluidTrajectory trajectory) {
    return TimeChange(std::move(trajectory));
}

}  // namespace confdfs
