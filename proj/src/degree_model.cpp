#include "confdfs/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confdfs/errors.hpp"
#include "confdfs/rng.hpp"

namespace confdfs {

std::string family_name(Family f) {
    switch (f) {
        case Family::Explicit: return "explicit";
        case Family::Poisson: return "poisson";
        case Family::Dirac: return "dirac";
        case Family::Binomial: return "binomial";
        case Family::Geometric: return "geometric";
        case Family::PowerLaw: return "power_law";
    }
    return "?";
}

DegreeDistribution::DegreeDistribution(Family f, Eigen::ArrayXd masses, double a,
                                       double b)
    : family_(f), masses_(std::move(masses)), param_a_(a), param_b_(b) {
    if (masses_.size() == 0) throw DomainError("empty mass vector");
    if ((masses_ < 0.0).any()) throw DomainError("negative probability mass");
    double total = masses_.sum();
    if (total <= 0.0) throw DomainError("zero total mass");
    masses_ /= total;
}

DegreeDistribution DegreeDistribution::poisson(double c) {
    if (c <= 0.0) throw DomainError("poisson rate must be positive");
    std::vector<double> pm;
    double p = std::exp(-c), cum = p;
    pm.push_back(p);
    for (int k = 0; cum < 1.0 - kTailCutoff; ++k) {
        p *= c / double(k + 1);
        pm.push_back(p);
        cum += p;
        if (pm.size() > 4096) break;  // c is desk-scale; never reached
    }
    return {Family::Poisson, Eigen::Map<Eigen::ArrayXd>(pm.data(), long(pm.size())), c, 0.0};
}

DegreeDistribution DegreeDistribution::dirac(int d) {
    if (d < 0) throw DomainError("dirac degree must be non-negative");
    Eigen::ArrayXd m = Eigen::ArrayXd::Zero(d + 1);
    m[d] = 1.0;
    return {Family::Dirac, m, double(d), 0.0};
}

DegreeDistribution DegreeDistribution::binomial(int d, double p) {
    if (d < 0 || p < 0.0 || p > 1.0) throw DomainError("bad binomial parameters");
    Eigen::ArrayXd m(d + 1);
    double v = std::pow(1.0 - p, d);
    for (int k = 0; k <= d; ++k) {
        m[k] = v;
        if (k < d) v *= (double(d - k) / double(k + 1)) * (p / (1.0 - p));
    }
    return {Family::Binomial, m, double(d), p};
}

DegreeDistribution DegreeDistribution::geometric(double p) {
    if (p <= 0.0 || p >= 1.0) throw DomainError("geometric parameter must be in (0,1)");
    std::vector<double> pm;
    double v = p, tail = 1.0 - p;
    pm.push_back(v);
    while (tail > kTailCutoff) {
        v *= 1.0 - p;
        pm.push_back(v);
        tail *= 1.0 - p;
    }
    return {Family::Geometric, Eigen::Map<Eigen::ArrayXd>(pm.data(), long(pm.size())), p, 0.0};
}

DegreeDistribution DegreeDistribution::power_law(double gamma, double tail_const) {
    if (gamma <= 2.0)
        throw DomainError("power law needs gamma > 2 for a finite second moment");
    if (tail_const <= 0.0 || tail_const > 1.0)
        throw DomainError("power law tail constant must be in (0,1]");
    // pi({k,k+1,...}) = C/k^gamma for k >= 1; truncate where the tail
    // drops below the cutoff.
    int kmax = int(std::ceil(std::pow(tail_const / kTailCutoff, 1.0 / gamma))) + 1;
    Eigen::ArrayXd m(kmax + 1);
    m[0] = 1.0 - tail_const;
    for (int k = 1; k < kmax; ++k)
        m[k] = tail_const * (std::pow(double(k), -gamma) - std::pow(double(k + 1), -gamma));
    m[kmax] = tail_const * std::pow(double(kmax), -gamma);
    return {Family::PowerLaw, m, gamma, tail_const};
}

DegreeDistribution DegreeDistribution::from_masses(const Eigen::ArrayXd& masses) {
    return {Family::Explicit, masses, 0.0, 0.0};
}

double DegreeDistribution::mean() const {
    switch (family_) {
        case Family::Poisson: return param_a_;
        case Family::Dirac: return param_a_;
        case Family::Binomial: return param_a_ * param_b_;
        case Family::Geometric: return (1.0 - param_a_) / param_a_;
        default: break;
    }
    double s = 0.0;
    for (int k = 1; k < masses_.size(); ++k) s += double(k) * masses_[k];
    return s;
}

double DegreeDistribution::second_moment() const {
    switch (family_) {
        case Family::Poisson: return param_a_ + param_a_ * param_a_;
        case Family::Dirac: return param_a_ * param_a_;
        case Family::Binomial: {
            double m = param_a_ * param_b_;
            return param_a_ * param_b_ * (1.0 - param_b_) + m * m;
        }
        case Family::Geometric: {
            double q = 1.0 - param_a_;
            return q * (2.0 - param_a_) / (param_a_ * param_a_);
        }
        default: break;
    }
    double s = 0.0;
    for (int k = 1; k < masses_.size(); ++k) s += double(k) * double(k) * masses_[k];
    return s;
}

std::int64_t DegreeSequence::degree_sum() const {
    return std::accumulate(degrees.begin(), degrees.end(), std::int64_t(0));
}

int DegreeSequence::max_degree() const {
    return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
}

DegreeSequence sample_degree_sequence(const DegreeDistribution& dist, int n,
                                      std::uint64_t seed) {
    if (n < 1) throw DomainError("need at least one vertex");
    const Eigen::ArrayXd& m = dist.masses();
    std::vector<double> cdf(std::size_t(m.size()));
    double acc = 0.0;
    for (long k = 0; k < m.size(); ++k) {
        acc += m[k];
        cdf[std::size_t(k)] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    DegreeSequence seq;
    seq.degrees.resize(std::size_t(n));
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) {
        double u = rng.unit();
        int k = int(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (k >= int(cdf.size())) k = int(cdf.size()) - 1;
        seq.degrees[std::size_t(i)] = k;
        total += k;
    }
    if (total % 2 != 0) {
        seq.degrees.back() += 1;
        seq.parity_fixed = true;
    }
    return seq;
}

DegreeDistribution empirical_distribution(const DegreeSequence& seq) {
    if (seq.degrees.empty()) throw DomainError("empty degree sequence");
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(seq.max_degree() + 1);
    for (int d : seq.degrees) counts[d] += 1.0;
    return DegreeDistribution::from_masses(counts / double(seq.size()));
}

AssumptionReport validate_assumptions(const DegreeSequence& seq, double gamma) {
    AssumptionReport r;
    if (seq.degrees.empty()) return r;
    double s2 = 0.0;
    for (int d : seq.degrees) s2 += double(d) * double(d);
    r.empirical_second_moment = s2 / double(seq.size());
    r.max_degree = seq.max_degree();
    r.max_degree_bound = std::pow(double(seq.size()), 1.0 / gamma);
    r.second_moment_finite = std::isfinite(r.empirical_second_moment);
    r.max_degree_ok = double(r.max_degree) <= r.max_degree_bound;
    r.pass = r.second_moment_finite && r.max_degree_ok;
    return r;
}

double total_variation(const Eigen::ArrayXd& p, const Eigen::ArrayXd& q) {
    long n = std::max(p.size(), q.size());
    double s = 0.0;
    for (long k = 0; k < n; ++k) {
        double a = k < p.size() ? p[k] : 0.0;
        double b = k < q.size() ? q[k] : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

}  // namespace confdfs
