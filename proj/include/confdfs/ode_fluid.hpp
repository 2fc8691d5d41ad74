#pragma once

#include <Eigen/Core>
#include <vector>

#include "confdfs/degree_model.hpp"
#include "confdfs/genfun.hpp"

namespace confdfs {

/// Truncation horizon for the per-degree density system: the cap is chosen
/// from the initial second moment so the dropped tail mass is at most eps.
struct TruncationSpec {
    double epsilon = 1e-4;
    int delta_cap = 0;  // densities are tracked for degrees 0..delta_cap

    static TruncationSpec from_epsilon(const DegreeDistribution& dist, double eps);
};

/// Survival probability of the size-biased law attached to a raw density
/// vector z (need not sum to 1): largest root in [0,1] of 1-s = ghat(1-s).
/// Throws SubcriticalStateError once the state has lost supercriticality.
double rho_of_state(const Eigen::ArrayXd& z, double hint = -1.0);

/// Size-biased PGF ghat_{(z)}(s) and its derivative at s.
double state_ghat(const Eigen::ArrayXd& z, double s);
double state_ghat_deriv(const Eigen::ArrayXd& z, double s);

/// Expected ladder-time increment (2 - rho)/rho.
double time_drift(double rho);

/// Per-degree density drifts f_i in ladder-index time.
Eigen::ArrayXd density_drift(const Eigen::ArrayXd& z, double rho);
double density_drift_i(const Eigen::ArrayXd& z, double rho, int i);

/// Density drifts of the explored-fraction system (S'): rho * f_i.
Eigen::ArrayXd density_drift_prime(const Eigen::ArrayXd& z);

struct FluidState {
    double t = 0.0;
    Eigen::ArrayXd z;
    double rho = 0.0;
};

struct FluidTrajectory {
    enum class Stop { ReachedEnd, Subcritical };

    std::vector<double> t;
    std::vector<Eigen::ArrayXd> z;
    std::vector<double> rho;
    std::vector<double> clock;  ///< companion z(t) (ladder-time system only)
    Stop stop = Stop::ReachedEnd;

    double t_end() const { return t.empty() ? 0.0 : t.back(); }
    Eigen::ArrayXd state_at(double when) const;
    double clock_at(double when) const;
    double density_at(double when, int i) const;
};

/// RK4 on the ladder-time system dz_i/dt = f_i with companion
/// dz/dt = (2-rho)/rho, from z_i(0) = pi_i, z(0) = 0, until t_end or until
/// the state loses supercriticality (the empirical t_max). A stage leaving
/// the invariant region triggers step halving (at most 10 times).
FluidTrajectory solve_system(const DegreeDistribution& initial,
                             const TruncationSpec& trunc, double t_end, double dt);

/// RK4 on the explored-fraction system (S'); valid up to t'_max.
FluidTrajectory solve_system_prime(const DegreeDistribution& initial,
                                   const TruncationSpec& trunc, double t_end,
                                   double dt);

/// Largest time where the remaining law stays supercritical: the root of
/// f''(f^{-1}(1-t)) / f'(1) = 1.
double t_prime_max(const GenFun& gf);

/// Exact solution of (S'): coefficients of
/// f(f^{-1}(1-t) - (1-s) f'(f^{-1}(1-t))/f'(1)) in s, for degrees
/// 0..max_degree. Throws DomainError past t'_max.
Eigen::ArrayXd closed_form_coeffs(const DegreeDistribution& initial, double t,
                                  int max_degree);

/// Degree-capped linear companion system driven by the exact edge density
/// E(t): zeta_i' = (i/2)(E'/E) zeta_i - (i+1) zeta_{i+1} (E'/2E + 1/E),
/// integrated by RK4 with step dt. Lower-bounds the full solution
/// coordinate-wise and stays within 2*epsilon of it.
Eigen::ArrayXd solve_truncated_linear(const DegreeDistribution& initial,
                                      const TruncationSpec& trunc, double t,
                                      double dt);

struct TruncatedIdentityReport {
    double t = 0.0;
    double dt = 0.0;
    double epsilon = 0.0;
    int delta_cap = 0;
    double sup_residual = 0.0;
};

/// Integrates the degree-capped linear system driven by E(t) and checks its
/// generating function against f_cap((s sqrt(E(t)) - Z(t))/sqrt(E(0))) on a
/// 33-point s-grid; Z comes from quadrature (or its closed form when
/// analytic_z is set, isolating the integrator error).
TruncatedIdentityReport verify_truncated_identity(const DegreeDistribution& initial,
                                                  const TruncationSpec& trunc,
                                                  double t, double dt = 1e-3,
                                                  bool analytic_z = false);

/// Reparametrisation of a ladder-time trajectory by the explored fraction
/// alpha = (t + z(t))/2.
class TimeChange {
public:
    explicit TimeChange(FluidTrajectory traj);

    double alpha_max() const { return alpha_.back(); }
    double t_of_alpha(double alpha) const;
    Eigen::ArrayXd density_at_alpha(double alpha) const;
    /// (1/(1-alpha)) sum_i z_i(ztilde^{-1}(alpha)) s^i
    double pgf_at_alpha(double alpha, double s) const;

private:
    FluidTrajectory traj_;
    std::vector<double> alpha_;
};

TimeChange time_change(FluidTrajectory trajectory);

}  // namespace confdfs
