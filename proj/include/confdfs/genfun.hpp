#pragma once

#include <Eigen/Core>

#include "confdfs/degree_model.hpp"

namespace confdfs {

/// Probability generating function of a degree law, with exact closed-form
/// evaluation for the tagged families and truncated power-series evaluation
/// otherwise. The series mode can be forced to cross-check the two paths.
class GenFun {
public:
    enum class Mode { ClosedForm, Series };

    /// Closed-form evaluation when the family has one, series otherwise.
    static GenFun of(const DegreeDistribution& dist);
    /// Force truncated-series evaluation regardless of the family tag.
    static GenFun series(const DegreeDistribution& dist);

    Mode mode() const { return mode_; }
    const DegreeDistribution& dist() const { return dist_; }

    double eval(double s) const;                ///< f(s)
    double deriv(double s) const;               ///< f'(s)
    double deriv2(double s) const;              ///< f''(s)
    double deriv_n(double s, int n) const;      ///< f^{(n)}(s)
    /// f^{-1}(y) on [0,1]; bisection for series mode. y must be >= f(0).
    double inverse(double y) const;

    double mean() const { return mean_; }                      ///< f'(1)
    double size_biased_mean() const { return sb_mean_; }       ///< f''(1)/f'(1)
    bool supercritical() const { return sb_mean_ > 1.0; }

private:
    GenFun(const DegreeDistribution& dist, Mode mode);

    DegreeDistribution dist_;
    Mode mode_;
    double mean_ = 0.0;
    double sb_mean_ = 0.0;
};

/// Survival probability of the size-biased branching law: the smallest
/// positive root of 1 - rho = f'(1-rho)/f'(1). Throws SubcriticalError.
double solve_rho(const GenFun& gf);

/// Giant-component vertex fraction xi = 1 - f(1 - rho).
double survival_fraction(const GenFun& gf);

/// Smallest positive root of f''(f^{-1}(1-alpha)) / f'(1) = 1: the explored
/// fraction at which the remaining graph turns critical.
double alpha_critical(const GenFun& gf);

/// PGF of the degree law of the graph left after exploring fraction alpha.
double g_alpha(const GenFun& gf, double alpha, double s);

/// Size-biased version of g_alpha (d/ds g(alpha,s) normalised at s=1).
double g_hat_alpha(const GenFun& gf, double alpha, double s);

/// Inverts rho -> alpha via 1-rho = g_hat(alpha, 1-rho) on [0, alpha_c].
/// alpha_c / rho_pi may be passed when already computed.
double alpha_of_rho(const GenFun& gf, double rho, double alpha_c_hint = -1.0,
                    double rho_pi_hint = -1.0);

/// n-th factorial moment of the remaining degree law at fraction alpha.
double factorial_moment(const GenFun& gf, double alpha, int n);

/// Coefficients of sum_k c_k (a + b s)^k up to degree max_degree.
Eigen::ArrayXd affine_pgf_coefficients(const Eigen::ArrayXd& coeffs, double a,
                                       double b, int max_degree);

/// Probability masses of the remaining degree law pi_alpha (series extraction
/// of g(alpha, .)).
Eigen::ArrayXd pi_alpha_coefficients(const GenFun& gf, double alpha,
                                     int max_degree);

/// Deterministic limit of the rescaled DFS contour. The increasing and
/// decreasing branches are parametrised by the remaining survival
/// probability rho in [0, rho_pi]; heights and times are fractions of N.
struct ProfileCurve {
    Eigen::ArrayXd rho;     ///< grid, ascending from 0 to rho_pi
    Eigen::ArrayXd x_up, y_up, x_down, y_down;
    double rho_pi = 0.0, xi_pi = 0.0, alpha_c = 0.0, h_max = 0.0;

    /// Piecewise-linear profile h on [0,2], assembled from the two branches.
    Eigen::ArrayXd h_x, h_y;
    double height(double t) const;
};

/// Samples the contour profile on a cosine-spaced rho grid (grid_size even,
/// >= 64). The tail integral of alpha uses per-interval Simpson rules in the
/// cosine variable; h_max carries a grid-halving consistency check.
ProfileCurve limit_profile(const GenFun& gf, int grid_size);

/// Closed-form specialisations used as oracles for the generic pipeline.
namespace closedform {

double poisson_g(double c, double alpha, double s);
double poisson_alpha_of_rho(double c, double rho);
double regular_g(int d, double alpha, double s);
double regular_g_hat(int d, double alpha, double s);
double regular_alpha_of_rho(int d, double rho);
double regular_hmax_integrand(int d, double x);
double regular_hmax(int d);
double binomial_pi_alpha_param(int d, double p, double alpha);
double binomial_g(int d, double p, double alpha, double s);
double binomial_g_hat(int d, double p, double alpha, double s);
double binomial_alpha_of_rho(int d, double p, double rho);
double geometric_p_alpha(double p, double alpha);
double geometric_g(double p, double alpha, double s);
double geometric_g_hat(double p, double alpha, double s);
double geometric_rho(double p);
double geometric_alpha_of_rho(double p, double rho);
double geometric_hmax(double p);

}  // namespace closedform

}  // namespace confdfs
