#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace confdfs {

enum class Family { Explicit, Poisson, Dirac, Binomial, Geometric, PowerLaw };

std::string family_name(Family f);

/// Probability mass function on {0,1,2,...}. Infinite-support families are
/// truncated where the tail mass drops below `kTailCutoff` and renormalized;
/// the family tag survives so generating-function code can bypass the
/// truncation with exact closed forms.
class DegreeDistribution {
public:
    static constexpr double kTailCutoff = 1e-12;

    static DegreeDistribution poisson(double c);
    static DegreeDistribution dirac(int d);
    static DegreeDistribution binomial(int d, double p);
    static DegreeDistribution geometric(double p);
    /// Tail law pi({k,k+1,...}) = tail_const / k^gamma for k >= 1.
    /// Requires gamma > 2 (finite second moment) and tail_const in (0, 1].
    static DegreeDistribution power_law(double gamma, double tail_const = 1.0);
    static DegreeDistribution from_masses(const Eigen::ArrayXd& masses);

    Family family() const { return family_; }
    /// Truncated, renormalized pmf; index = degree.
    const Eigen::ArrayXd& masses() const { return masses_; }
    double mass(int k) const {
        return (k >= 0 && k < masses_.size()) ? masses_[k] : 0.0;
    }
    int max_degree() const { return int(masses_.size()) - 1; }

    /// First/second moments; analytic for closed-form families.
    double mean() const;
    double second_moment() const;

    // Family parameters (meaning depends on the tag).
    double param_a() const { return param_a_; }
    double param_b() const { return param_b_; }

private:
    DegreeDistribution(Family f, Eigen::ArrayXd masses, double a, double b);

    Family family_;
    Eigen::ArrayXd masses_;
    double param_a_ = 0.0;
    double param_b_ = 0.0;
};

struct DegreeSequence {
    std::vector<int> degrees;
    bool parity_fixed = false;

    int size() const { return int(degrees.size()); }
    std::int64_t degree_sum() const;
    int max_degree() const;
};

/// n i.i.d. draws from `dist` (inverse CDF on the truncated pmf). If the sum
/// is odd the last degree is incremented and `parity_fixed` is set.
DegreeSequence sample_degree_sequence(const DegreeDistribution& dist, int n,
                                      std::uint64_t seed);

/// Frequencies of `seq` as an explicit distribution.
DegreeDistribution empirical_distribution(const DegreeSequence& seq);

struct AssumptionReport {
    double empirical_second_moment = 0.0;
    int max_degree = 0;
    double max_degree_bound = 0.0;  // N^{1/gamma}
    bool second_moment_finite = false;
    bool max_degree_ok = false;
    bool pass = false;
};

/// Checks the standing input assumptions: finite second moment and
/// max degree <= N^{1/gamma}. Report only, never throws.
AssumptionReport validate_assumptions(const DegreeSequence& seq, double gamma);

/// Total variation distance between two pmfs (padded with zeros).
double total_variation(const Eigen::ArrayXd& p, const Eigen::ArrayXd& q);

}  // namespace confdfs
