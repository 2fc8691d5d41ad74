#include "confdfs/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "confdfs/errors.hpp"

namespace confdfs {

namespace {

constexpr double kInverseTol = 1e-13;
constexpr double kRhoTol = 1e-12;
constexpr double kAlphaTol = 1e-10;

/// Bisection for a function with fn(lo) and fn(hi) of opposite (weak) sign.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol, const char* what) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NoRootError(std::string("bisection bracket failed: ") + what);
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double falling(double x, int n) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= x - double(j);
    return v;
}

/// sum_k c_k * falling(k, n) * s^{k-n}, Horner from the top coefficient.
double series_deriv_n(const Eigen::ArrayXd& c, double s, int n) {
    double acc = 0.0;
    for (long k = c.size() - 1; k >= n; --k)
        acc = acc * s + c[k] * falling(double(k), n);
    return acc;
}

}  // namespace

GenFun::GenFun(const DegreeDistribution& dist, Mode mode)
    : dist_(dist), mode_(mode) {
    mean_ = deriv(1.0);
    if (mean_ <= 0.0) throw DomainError("degenerate law: f'(1) = 0");
    sb_mean_ = deriv2(1.0) / mean_;
}

GenFun GenFun::of(const DegreeDistribution& dist) {
    Mode m = (dist.family() == Family::Explicit || dist.family() == Family::PowerLaw)
                 ? Mode::Series
                 : Mode::ClosedForm;
    return GenFun(dist, m);
}

GenFun GenFun::series(const DegreeDistribution& dist) {
    return GenFun(dist, Mode::Series);
}

double GenFun::eval(double s) const { return deriv_n(s, 0); }
double GenFun::deriv(double s) const { return deriv_n(s, 1); }
double GenFun::deriv2(double s) const { return deriv_n(s, 2); }

double GenFun::deriv_n(double s, int n) const {
    if (n < 0) throw DomainError("negative derivative order");
    if (mode_ == Mode::Series) return series_deriv_n(dist_.masses(), s, n);
    const double a = dist_.param_a();
    const double b = dist_.param_b();
    switch (dist_.family()) {
        case Family::Poisson:
            return std::pow(a, n) * std::exp(a * (s - 1.0));
        case Family::Dirac: {
            int d = int(a);
            if (n > d) return 0.0;
            return falling(a, n) * std::pow(s, d - n);
        }
        case Family::Binomial: {
            int d = int(a);
            if (n > d) return 0.0;
            return falling(a, n) * std::pow(b, n) * std::pow(1.0 - b + b * s, d - n);
        }
        case Family::Geometric: {
            double u = 1.0 - (1.0 - a) * s;
            double nf = 1.0;
            for (int j = 2; j <= n; ++j) nf *= double(j);
            return a * nf * std::pow(1.0 - a, n) / std::pow(u, n + 1);
        }
        default:
            return series_deriv_n(dist_.masses(), s, n);
    }
}

double GenFun::inverse(double y) const {
    double f0 = eval(0.0);
    if (y > 1.0 + 1e-12 || y < f0 - 1e-12)
        throw DomainError("inverse argument outside [f(0), 1]");
    y = std::clamp(y, f0, 1.0);
    if (mode_ == Mode::ClosedForm) {
        const double a = dist_.param_a();
        const double b = dist_.param_b();
        switch (dist_.family()) {
            case Family::Poisson: return 1.0 + std::log(y) / a;
            case Family::Dirac: return std::pow(y, 1.0 / a);
            case Family::Binomial: return (std::pow(y, 1.0 / a) - (1.0 - b)) / b;
            case Family::Geometric: return (1.0 - a / y) / (1.0 - a);
            default: break;
        }
    }
    if (y >= 1.0) return 1.0;
    if (y <= f0) return 0.0;
    return bisect([&](double s) { return eval(s) - y; }, 0.0, 1.0, kInverseTol,
                  "f inverse");
}

double solve_rho(const GenFun& gf) {
    if (!gf.supercritical())
        throw SubcriticalError("size-biased mean <= 1: no positive survival root");
    auto phi = [&](double r) {
        return (1.0 - r) - gf.deriv(1.0 - r) / gf.mean();
    };
    return bisect(phi, 1e-12, 1.0, kRhoTol, "survival fixed point");
}

double survival_fraction(const GenFun& gf) {
    return 1.0 - gf.eval(1.0 - solve_rho(gf));
}

double alpha_critical(const GenFun& gf) {
    if (!gf.supercritical())
        throw SubcriticalError("size-biased mean <= 1: remaining graph already critical");
    double hi = 1.0 - gf.eval(0.0);
    auto crit = [&](double a) {
        return gf.deriv2(gf.inverse(1.0 - a)) / gf.mean() - 1.0;
    };
    return bisect(crit, 0.0, hi, kAlphaTol, "alpha_c");
}

namespace {

struct AlphaFrame {
    double sigma;  // f^{-1}(1-alpha)
    double scale;  // f'(sigma)/f'(1)
};

AlphaFrame alpha_frame(const GenFun& gf, double alpha) {
    if (alpha < 0.0 || alpha >= 1.0) throw DomainError("alpha outside [0,1)");
    AlphaFrame fr;
    fr.sigma = gf.inverse(1.0 - alpha);
    fr.scale = gf.deriv(fr.sigma) / gf.mean();
    return fr;
}

double inner_argument(const AlphaFrame& fr, double s) {
    double u = fr.sigma - (1.0 - s) * fr.scale;
    if (u < -1e-12 || u > 1.0 + 1e-12)
        throw DomainError("remaining-law PGF argument left [0,1]");
    return std::clamp(u, 0.0, 1.0);
}

}  // namespace

double g_alpha(const GenFun& gf, double alpha, double s) {
    AlphaFrame fr = alpha_frame(gf, alpha);
    return gf.eval(inner_argument(fr, s)) / (1.0 - alpha);
}

double g_hat_alpha(const GenFun& gf, double alpha, double s) {
    AlphaFrame fr = alpha_frame(gf, alpha);
    return gf.deriv(inner_argument(fr, s)) / gf.deriv(fr.sigma);
}

double alpha_of_rho(const GenFun& gf, double rho, double alpha_c_hint,
                    double rho_pi_hint) {
    double ac = alpha_c_hint >= 0.0 ? alpha_c_hint : alpha_critical(gf);
    double rp = rho_pi_hint >= 0.0 ? rho_pi_hint : solve_rho(gf);
    if (rho < -1e-12 || rho > rp + 1e-9)
        throw DomainError("rho outside [0, rho_pi]");
    // The defining equation is vacuous at rho = 0; the boundary value is
    // alpha_c by continuity.
    if (rho <= 1e-14) return ac;
    if (rho >= rp - 1e-14) return 0.0;
    auto eq = [&](double a) { return g_hat_alpha(gf, a, 1.0 - rho) - (1.0 - rho); };
    return bisect(eq, 0.0, ac, kAlphaTol, "alpha(rho)");
}

double factorial_moment(const GenFun& gf, double alpha, int n) {
    if (n < 0) throw DomainError("negative moment order");
    AlphaFrame fr = alpha_frame(gf, alpha);
    return std::pow(fr.scale, n) * gf.deriv_n(fr.sigma, n) / (1.0 - alpha);
}

Eigen::ArrayXd affine_pgf_coefficients(const Eigen::ArrayXd& coeffs, double a,
                                       double b, int max_degree) {
    const long kmax = coeffs.size() - 1;
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(max_degree + 1);
    for (int i = 0; i <= max_degree && i <= kmax; ++i) {
        // w_k = C(k,i) a^{k-i} b^i, accumulated iteratively; every w_k is
        // bounded by (a+b)^k <= 1 so the recursion cannot overflow.
        double w = std::pow(b, i);
        double acc = coeffs[i] * w;
        for (long k = i + 1; k <= kmax; ++k) {
            w *= a * double(k) / double(k - i);
            acc += coeffs[k] * w;
        }
        out[i] = acc;
    }
    return out;
}

Eigen::ArrayXd pi_alpha_coefficients(const GenFun& gf, double alpha,
                                     int max_degree) {
    AlphaFrame fr = alpha_frame(gf, alpha);
    Eigen::ArrayXd c = affine_pgf_coefficients(
        gf.dist().masses(), fr.sigma - fr.scale, fr.scale, max_degree);
    return c / (1.0 - alpha);
}

double ProfileCurve::height(double t) const {
    if (t <= h_x[0] || t >= 2.0 * xi_pi) return 0.0;
    const double* begin = h_x.data();
    const double* end = begin + h_x.size();
    const double* it = std::upper_bound(begin, end, t);
    if (it == end) return 0.0;
    long j = it - begin;
    double x0 = h_x[j - 1], x1 = h_x[j];
    double w = (x1 > x0) ? (t - x0) / (x1 - x0) : 0.0;
    return h_y[j - 1] + w * (h_y[j] - h_y[j - 1]);
}

ProfileCurve limit_profile(const GenFun& gf, int grid_size) {
    if (grid_size < 64) throw DomainError("grid_size must be >= 64");
    if (grid_size % 2 != 0) ++grid_size;
    const int g = grid_size;

    ProfileCurve pc;
    pc.rho_pi = solve_rho(gf);
    pc.xi_pi = 1.0 - gf.eval(1.0 - pc.rho_pi);
    pc.alpha_c = alpha_critical(gf);

    // Nodes rho(theta) = rho_pi (1 - cos theta)/2 concentrate at both
    // endpoints, where the implicit solve for alpha degrades.
    const int np = 2 * g + 1;
    const double dtheta = M_PI / double(2 * g);
    Eigen::ArrayXd theta(np), rho(np), alph(np), integ(np);
    for (int j = 0; j < np; ++j) {
        theta[j] = dtheta * j;
        rho[j] = pc.rho_pi * (1.0 - std::cos(theta[j])) / 2.0;
        alph[j] = alpha_of_rho(gf, rho[j], pc.alpha_c, pc.rho_pi);
        integ[j] = alph[j] * pc.rho_pi * std::sin(theta[j]) / 2.0;
    }

    // Tail integral I_m = int_{rho_m}^{rho_pi} alpha, per-pair Simpson in theta.
    Eigen::ArrayXd tail = Eigen::ArrayXd::Zero(g + 1);
    for (int m = g - 1; m >= 0; --m) {
        tail[m] = tail[m + 1] + (dtheta / 3.0) * (integ[2 * m] + 4.0 * integ[2 * m + 1] +
                                                  integ[2 * m + 2]);
    }
    pc.h_max = tail[0];

    // Grid-halving consistency check on h_max (every second node).
    double coarse = 0.0;
    for (int m = g - 2; m >= 0; m -= 2)
        coarse += (2.0 * dtheta / 3.0) *
                  (integ[2 * m] + 4.0 * integ[2 * m + 2] + integ[2 * m + 4]);
    if (std::abs(coarse - pc.h_max) > 1e-5)
        throw DomainError("profile quadrature failed its grid-halving check");

    pc.rho.resize(g + 1);
    pc.x_up.resize(g + 1);
    pc.y_up.resize(g + 1);
    pc.x_down.resize(g + 1);
    pc.y_down.resize(g + 1);
    for (int m = 0; m <= g; ++m) {
        double r = rho[2 * m], a = alph[2 * m];
        pc.rho[m] = r;
        pc.x_up[m] = (2.0 - r) * a - tail[m];
        pc.y_up[m] = r * a + tail[m];
        pc.x_down[m] = pc.x_up[m] + 2.0 * (1.0 - a) * (1.0 - g_alpha(gf, a, 1.0 - r));
        pc.y_down[m] = pc.y_up[m];
    }

    // Assemble h: up branch traversed from rho = rho_pi back to 0, then the
    // down branch out to 2 xi. Equal-x ties keep the larger height.
    std::vector<double> xs, ys;
    xs.reserve(std::size_t(2 * g + 2));
    ys.reserve(std::size_t(2 * g + 2));
    for (int m = g; m >= 0; --m) {
        xs.push_back(pc.x_up[m]);
        ys.push_back(pc.y_up[m]);
    }
    for (int m = 1; m <= g; ++m) {
        xs.push_back(pc.x_down[m]);
        ys.push_back(pc.y_down[m]);
    }
    for (std::size_t j = 1; j < xs.size(); ++j) {
        if (xs[j] < xs[j - 1] - 1e-9)
            throw NoRootError("profile branches are not monotone in x");
        if (xs[j] <= xs[j - 1]) {
            xs[j] = xs[j - 1];
            ys[j - 1] = ys[j] = std::max(ys[j], ys[j - 1]);
        }
    }
    pc.h_x = Eigen::Map<Eigen::ArrayXd>(xs.data(), long(xs.size()));
    pc.h_y = Eigen::Map<Eigen::ArrayXd>(ys.data(), long(ys.size()));
    return pc;
}

namespace closedform {

double poisson_g(double c, double alpha, double s) {
    return std::exp(c * (1.0 - alpha) * (s - 1.0));
}

double poisson_alpha_of_rho(double c, double rho) {
    if (rho <= 0.0) return 1.0 - 1.0 / c;
    return 1.0 + std::log(1.0 - rho) / (c * rho);
}

double regular_g(int d, double alpha, double s) {
    double q = std::pow(1.0 - alpha, double(d - 2) / double(d));
    return std::pow(1.0 + (s - 1.0) * q, d);
}

double regular_g_hat(int d, double alpha, double s) {
    double q = std::pow(1.0 - alpha, double(d - 2) / double(d));
    return std::pow(1.0 + (s - 1.0) * q, d - 1);
}

double regular_alpha_of_rho(int d, double rho) {
    if (rho <= 0.0) return 1.0 - std::pow(double(d - 1), -double(d) / double(d - 2));
    double base = (1.0 - std::pow(1.0 - rho, 1.0 / double(d - 1))) / rho;
    return 1.0 - std::pow(base, double(d) / double(d - 2));
}

double regular_hmax_integrand(int d, double x) {
    double e = double(d) / double(d - 2);
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return std::pow(1.0 / double(d - 1), e);
    return std::pow((1.0 - std::pow(x, 1.0 / double(d - 1))) / (1.0 - x), e);
}

double regular_hmax(int d) {
    // 1 - int_0^1 integrand, under x = (1 - cos theta)/2 to tame the
    // x^{1/(d-1)} endpoint behaviour; composite Simpson in theta.
    const int n = 4096;
    const double h = M_PI / n;
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        double th = h * j;
        double x = (1.0 - std::cos(th)) / 2.0;
        double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        acc += w * regular_hmax_integrand(d, x) * std::sin(th) / 2.0;
    }
    return 1.0 - acc * h / 3.0;
}

double binomial_pi_alpha_param(int d, double p, double alpha) {
    return p * std::pow(1.0 - alpha, double(d - 2) / double(d));
}

double binomial_g(int d, double p, double alpha, double s) {
    double q = binomial_pi_alpha_param(d, p, alpha);
    return std::pow(1.0 - q + q * s, d);
}

double binomial_g_hat(int d, double p, double alpha, double s) {
    double q = binomial_pi_alpha_param(d, p, alpha);
    return std::pow(1.0 - q + q * s, d - 1);
}

double binomial_alpha_of_rho(int d, double p, double rho) {
    // rho -> 0 degenerates to the criticality equation
    // (d-1) p (1-alpha)^{(d-2)/d} = 1.
    double base = rho <= 0.0
                      ? 1.0 / (double(d - 1) * p)
                      : (1.0 - std::pow(1.0 - rho, 1.0 / double(d - 1))) / (p * rho);
    return 1.0 - std::pow(base, double(d) / double(d - 2));
}

double geometric_p_alpha(double p, double alpha) {
    double t = 1.0 - alpha;
    return p / (p + (1.0 - p) * t * t * t);
}

double geometric_g(double p, double alpha, double s) {
    double pa = geometric_p_alpha(p, alpha);
    return pa / (1.0 - (1.0 - pa) * s);
}

double geometric_g_hat(double p, double alpha, double s) {
    double v = geometric_g(p, alpha, s);
    return v * v;
}

double geometric_rho(double p) {
    return 0.5 * ((1.0 - 3.0 * p) / (1.0 - p) + std::sqrt((1.0 + 3.0 * p) / (1.0 - p)));
}

double geometric_alpha_of_rho(double p, double rho) {
    double q = 1.0 - rho;
    return 1.0 - std::cbrt(p / (1.0 - p)) * std::cbrt(1.0 / (q + std::sqrt(q)));
}

double geometric_hmax(double p) {
    // H = int_0^{rho_pi} alpha(u) du; substituting x = 1 - u turns the
    // integral of the alpha(rho) closed form into
    //   rho_pi - (p/(1-p))^{1/3} int_{1-rho_pi}^{1} (x + sqrt x)^{-1/3} dx.
    double rp = geometric_rho(p);
    double lo = 1.0 - rp;
    const int n = 4096;
    const double h = (1.0 - lo) / n;
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        double x = lo + h * j;
        double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        acc += w * std::pow(x + std::sqrt(x), -1.0 / 3.0);
    }
    return rp - std::cbrt(p / (1.0 - p)) * acc * h / 3.0;
}

}  // namespace closedform

}  // namespace confdfs
