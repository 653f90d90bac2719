#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace frog {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 1.0;
    double z = 0.0;          ///< z-score for drift tests, 0 otherwise
    std::size_t n = 0;
    bool pass = false;
    double threshold = 0.0;  ///< alpha for p-value tests, |z| bound for z tests
    bool approximate = false;
};

void to_json(nlohmann::json& j, const TestReport& r);

/// P[K > lambda] for the Kolmogorov distribution, series truncated at >= 20 terms.
double kolmogorov_survival(double lambda);

/// Chi-square upper tail P[X > stat] with df degrees of freedom.
double chi_square_survival(double stat, double df);

/// One-sample KS against a continuous CDF. Throws on an empty sample.
TestReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                         double alpha = 0.01, std::string name = "ks_one_sample");

/// Two-sample KS; ties (including infinities) are handled by evaluating the
/// empirical CDFs after each distinct value.
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.01,
                         std::string name = "ks_two_sample");

/// values[r][c] for replica r at checkpoint c; one report per checkpoint with
/// z = (mean - reference) / stderr. Throws with fewer than 2 replicas.
std::vector<TestReport> martingale_drift(const std::vector<std::vector<double>>& values,
                                         double reference, double bound = 3.0,
                                         std::string name = "martingale_drift");

/// Chi-square goodness of fit of the count histogram against Poisson(mean),
/// bins pooled until every expected count is >= 5.
TestReport poisson_count_test(std::span<const std::uint64_t> counts, double mean, double alpha = 0.01,
                              std::string name = "poisson_count");

/// z-test of an observed proportion against p.
TestReport proportion_test(std::size_t hits, std::size_t n, double p, double bound = 3.0,
                           std::string name = "proportion");

}  // namespace frog
