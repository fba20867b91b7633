#include "ncstream/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ncstream::model {

namespace {

double log_choose(int n, int r) {
    return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

}  // namespace

void ModelParams::validate() const {
    if (N < 1 || N_m < 0 || N_m > N) throw std::invalid_argument("model: need 0 <= N_m <= N");
    if (n < 1 || n > N - 1) throw std::invalid_argument("model: need 1 <= n <= N-1");
    if (k < 1) throw std::invalid_argument("model: need k >= 1");
    if (!(p_poll >= 0 && p_poll <= 1)) throw std::invalid_argument("model: p_poll outside [0,1]");
    if (!(p_r > 0 && p_r < 1)) throw std::invalid_argument("model: p_r outside (0,1)");
}

int ModelParams::rounds() const { return (k + n - 1) / n + 1; }

double p_p(int i, int x, int b, double p_poll) {
    if (i < 1 || x < 0) throw std::invalid_argument("p_p: need i >= 1 and x >= 0");
    if (!(p_poll >= 0 && p_poll <= 1)) throw std::invalid_argument("p_p: p_poll outside [0,1]");
    const long long trials = static_cast<long long>(i) * x;
    if (b < 0 || b > trials) return 0.0;
    if (trials == 0) return b == 0 ? 1.0 : 0.0;
    if (p_poll == 0.0) return b == 0 ? 1.0 : 0.0;
    if (p_poll == 1.0) return b == trials ? 1.0 : 0.0;
    const double lp = log_choose(static_cast<int>(trials), b) + b * std::log(p_poll) +
                      (trials - b) * std::log1p(-p_poll);
    return std::exp(lp);
}

double p_rp(int i, int x, const ModelParams& params) {
    params.validate();
    if (i < 1 || x < 0) throw std::invalid_argument("p_rp: need i >= 1 and x >= 0");
    const long long trials = static_cast<long long>(i) * x;
    double not_polluted = 0.0;
    for (long long b = 0; b <= trials; ++b)
        not_polluted += p_p(i, x, static_cast<int>(b), params.p_poll) *
                        std::pow(1.0 - params.p_r, static_cast<double>(b));
    return 1.0 - not_polluted;
}

double p_mn(int N, int N_m, int n, int x) {
    if (N < 1 || N_m < 0 || N_m > N || n < 0 || n > N)
        throw std::invalid_argument("p_mn: invalid population");
    if (x < 0 || x > n || x > N_m || n - x > N - N_m) return 0.0;
    return std::exp(log_choose(N_m, x) + log_choose(N - N_m, n - x) - log_choose(N, n));
}

double p_gp(int i, const ModelParams& params) {
    params.validate();
    if (i < 1) throw std::invalid_argument("p_gp: need i >= 1");
    double acc = 0.0;
    for (int x = 1; x <= params.n; ++x) {
        const double w = p_mn(params.N, params.N_m, params.n, x);
        if (w == 0.0) continue;
        acc += w * p_rp(i, x, params);
    }
    return acc;
}

double p_fclean(const ModelParams& params) {
    params.validate();
    double acc = 1.0;
    for (int i = 1; i <= params.rounds(); ++i) acc *= 1.0 - p_gp(i, params);
    return acc;
}

double p_rclean(const ModelParams& params) {
    params.validate();
    if (params.N_m == 0 || params.p_poll == 0.0) return 1.0;
    const int rounds = params.rounds();
    double acc = 0.0;
    for (int x = 0; x <= params.n; ++x) {
        const double w = p_mn(params.N, params.N_m, params.n, x);
        if (w == 0.0) continue;
        acc += w * p_p(rounds, x, 0, params.p_poll);
    }
    return acc;
}

}  // namespace ncstream::model
