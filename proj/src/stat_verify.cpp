#include "frog/stat_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace frog {

void to_json(nlohmann::json& j, const TestReport& r) {
    j = nlohmann::json{{"name", r.name},         {"statistic", r.statistic}, {"p_value", r.p_value},
                       {"z", r.z},               {"n", r.n},                 {"pass", r.pass},
                       {"threshold", r.threshold}, {"approximate", r.approximate}};
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;  // series converges slowly there and the tail is 1 to double precision
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (k >= 20 && term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi_square_survival(double stat, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("chi_square_survival: df must be > 0");
    if (stat <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

namespace {
double ks_p(double d, double ne) {
    const double root = std::sqrt(ne);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}
}  // namespace

TestReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                         double alpha, std::string name) {
    if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = std::clamp(cdf(x[i]), 0.0, 1.0);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    TestReport r;
    r.name = std::move(name);
    r.statistic = d;
    r.n = x.size();
    r.p_value = ks_p(d, n);
    r.threshold = alpha;
    r.pass = r.p_value > alpha;
    r.approximate = x.size() < 1000;
    return r;
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha,
                         std::string name) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t k = 0;
    double d = 0.0;
    while (i < x.size() || k < y.size()) {
        double v;
        if (k == y.size() || (i < x.size() && x[i] <= y[k])) {
            v = x[i];
        } else {
            v = y[k];
        }
        while (i < x.size() && x[i] == v) ++i;
        while (k < y.size() && y[k] == v) ++k;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(k) / m));
    }
    TestReport r;
    r.name = std::move(name);
    r.statistic = d;
    r.n = x.size() + y.size();
    r.p_value = ks_p(d, n * m / (n + m));
    r.threshold = alpha;
    r.pass = r.p_value > alpha;
    r.approximate = n * m / (n + m) < 1000.0;
    return r;
}

std::vector<TestReport> martingale_drift(const std::vector<std::vector<double>>& values, double reference,
                                         double bound, std::string name) {
    if (values.size() < 2) throw std::invalid_argument("martingale_drift: need at least 2 replicas");
    const std::size_t cols = values.front().size();
    for (const auto& row : values) {
        if (row.size() != cols) throw std::invalid_argument("martingale_drift: ragged replica matrix");
    }
    const double n = static_cast<double>(values.size());
    std::vector<TestReport> out;
    for (std::size_t c = 0; c < cols; ++c) {
        double mean = 0.0;
        for (const auto& row : values) mean += row[c];
        mean /= n;
        double ss = 0.0;
        for (const auto& row : values) ss += (row[c] - mean) * (row[c] - mean);
        const double se = std::sqrt(ss / (n - 1.0) / n);
        TestReport r;
        r.name = name + "[" + std::to_string(c) + "]";
        r.statistic = mean;
        r.n = values.size();
        r.threshold = bound;
        if (se > 0.0) {
            r.z = (mean - reference) / se;
        } else {
            r.z = mean == reference ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean - reference);
        }
        r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
        r.pass = std::abs(r.z) <= bound;
        r.approximate = values.size() < 100;
        out.push_back(std::move(r));
    }
    return out;
}

TestReport poisson_count_test(std::span<const std::uint64_t> counts, double mean, double alpha,
                              std::string name) {
    if (counts.empty()) throw std::invalid_argument("poisson_count_test: no counts");
    TestReport r;
    r.name = std::move(name);
    r.n = counts.size();
    r.threshold = alpha;
    r.approximate = counts.size() < 1000;
    const std::uint64_t top = *std::max_element(counts.begin(), counts.end());
    if (!(mean > 0.0)) {
        r.p_value = top == 0 ? 1.0 : 0.0;
        r.statistic = top == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        r.pass = top == 0;
        return r;
    }
    const double n = static_cast<double>(counts.size());
    const boost::math::poisson_distribution<double> law(mean);
    const auto kmax = static_cast<std::uint64_t>(
        std::max<double>(static_cast<double>(top), mean + 10.0 * std::sqrt(mean) + 10.0));
    std::vector<double> observed(kmax + 1, 0.0);
    for (auto c : counts) observed[c] += 1.0;
    std::vector<double> expected(kmax + 1);
    for (std::uint64_t k = 0; k < kmax; ++k) expected[k] = n * boost::math::pdf(law, static_cast<double>(k));
    expected[kmax] = n * boost::math::cdf(boost::math::complement(law, static_cast<double>(kmax - 1)));
    // pool left to right until each bin expects at least 5; a short tail joins the last bin
    std::vector<double> po;
    std::vector<double> pe;
    double co = 0.0;
    double ce = 0.0;
    for (std::uint64_t k = 0; k <= kmax; ++k) {
        co += observed[k];
        ce += expected[k];
        if (ce >= 5.0) {
            po.push_back(co);
            pe.push_back(ce);
            co = ce = 0.0;
        }
    }
    if (ce > 0.0 || co > 0.0) {
        if (pe.empty()) {
            po.push_back(co);
            pe.push_back(ce);
        } else {
            po.back() += co;
            pe.back() += ce;
        }
    }
    double stat = 0.0;
    for (std::size_t b = 0; b < po.size(); ++b) stat += (po[b] - pe[b]) * (po[b] - pe[b]) / pe[b];
    r.statistic = stat;
    r.p_value = po.size() >= 2 ? chi_square_survival(stat, static_cast<double>(po.size() - 1)) : 1.0;
    r.pass = r.p_value > alpha;
    return r;
}

TestReport proportion_test(std::size_t hits, std::size_t n, double p, double bound, std::string name) {
    if (n == 0) throw std::invalid_argument("proportion_test: n must be > 0");
    TestReport r;
    r.name = std::move(name);
    r.n = n;
    r.threshold = bound;
    const double phat = static_cast<double>(hits) / static_cast<double>(n);
    r.statistic = phat;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    r.z = se > 0.0 ? (phat - p) / se : (phat == p ? 0.0 : std::numeric_limits<double>::infinity());
    r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    r.pass = std::abs(r.z) <= bound;
    return r;
}

}  // namespace frog
