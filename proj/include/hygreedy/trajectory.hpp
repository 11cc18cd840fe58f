#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "hygreedy/combinatorics.hpp"
#include "hygreedy/common.hpp"
#include "hygreedy/quadrature.hpp"
#include "hygreedy/rational.hpp"

namespace hygreedy {

// Continuous-time model parameters for an r-uniform D-regular instance on N
// vertices. Time runs as t = i * time_scale; the open-vertex density follows
// q(t) = exp(-t^(r-1)).
struct TrajectoryParams {
    int r = 3;
    std::int64_t n = 0;
    std::int64_t d = 0;
    double epsilon = 0;
    double delta = 0;
    double zeta = 0;
    double alpha = 0;
    double beta = 0;

    double lambda = 0;
    double time_scale = 0;
    double t_max = 0;
    std::int64_t i_max = 0;
    // Set when the zeta <= delta/10 <= epsilon/100 ordering was overridden.
    std::string ordering_warning;

    static TrajectoryParams make(int r, std::int64_t n, std::int64_t d, double epsilon,
                                 double delta, double zeta, double alpha, double beta,
                                 bool allow_loose_ordering = false) {
        require_input(r >= 3, "trajectory needs uniformity r >= 3");
        require_input(n >= 3, "trajectory needs N >= 3");
        require_input(d >= 1, "trajectory needs degree D >= 1");
        require_input(epsilon > 0 && delta > 0 && zeta > 0,
                      "epsilon, delta, zeta must be positive");
        TrajectoryParams p;
        p.r = r;
        p.n = n;
        p.d = d;
        p.epsilon = epsilon;
        p.delta = delta;
        p.zeta = zeta;
        p.alpha = alpha;
        p.beta = beta;
        const bool ordered = zeta <= delta / 10 && delta <= epsilon / 10;
        if (!ordered) {
            const std::string msg =
                "parameter ordering zeta <= delta/10 <= epsilon/100 violated "
                "(zeta=" + std::to_string(zeta) + " delta=" + std::to_string(delta) +
                " epsilon=" + std::to_string(epsilon) + ")";
            if (!allow_loose_ordering)
                throw InputError(msg + "; pass the loose-ordering override to proceed");
            p.ordering_warning = msg;
        }
        p.lambda = epsilon / (4.0 * r);
        const double nd = static_cast<double>(n);
        const double dd = static_cast<double>(d);
        p.time_scale = std::pow(dd, 1.0 / (r - 1)) / nd;
        const double logpow = std::pow(std::log(nd), 1.0 / (r - 1));
        p.t_max = zeta * logpow;
        p.i_max = static_cast<std::int64_t>(
            std::floor(zeta * nd * std::pow(dd, -1.0 / (r - 1)) * logpow));
        // q(t_max) = N^(-zeta^(r-1)) holds by construction; verify the
        // floating-point evaluation agrees.
        const double lhs = std::exp(-std::pow(p.t_max, r - 1));
        const double rhs = std::pow(nd, -std::pow(zeta, r - 1));
        if (std::abs(lhs - rhs) > 1e-9 * rhs)
            throw std::runtime_error("internal: q(t_max) identity failed numerically");
        return p;
    }
};

inline nlohmann::json params_to_json(const TrajectoryParams& p) {
    return nlohmann::json{{"r", p.r},         {"n", p.n},         {"d", p.d},
                          {"epsilon", p.epsilon}, {"delta", p.delta}, {"zeta", p.zeta},
                          {"alpha", p.alpha}, {"beta", p.beta}};
}

inline TrajectoryParams params_from_json(const nlohmann::json& j,
                                         bool allow_loose_ordering = false) {
    for (const char* key : {"r", "n", "d", "epsilon", "delta", "zeta", "alpha", "beta"})
        require_input(j.contains(key), std::string("params json missing key ") + key);
    return TrajectoryParams::make(j.at("r").get<int>(), j.at("n").get<std::int64_t>(),
                                  j.at("d").get<std::int64_t>(),
                                  j.at("epsilon").get<double>(), j.at("delta").get<double>(),
                                  j.at("zeta").get<double>(), j.at("alpha").get<double>(),
                                  j.at("beta").get<double>(), allow_loose_ordering);
}

inline double scaled_time(const TrajectoryParams& p, std::int64_t i) {
    require_input(i >= 0, "step index must be >= 0");
    return static_cast<double>(i) * p.time_scale;
}

inline double q_of(const TrajectoryParams& p, double t) {
    require_input(t >= 0, "q_of needs t >= 0");
    return std::exp(-std::pow(t, p.r - 1));
}

// Predicted live degree in size class ell at time t:
// s_ell = C(r-1, ell-1) D^((ell-1)/(r-1)) t^(r-ell) q^(ell-1).
inline double s_of(const TrajectoryParams& p, int ell, double t) {
    require_input(ell >= 2 && ell <= p.r, "s_of needs 2 <= ell <= r");
    const double dd = static_cast<double>(p.d);
    return static_cast<double>(binomial(p.r - 1, ell - 1)) *
           std::pow(dd, static_cast<double>(ell - 1) / (p.r - 1)) *
           std::pow(t, p.r - ell) * std::pow(q_of(p, t), ell - 1);
}

enum class Sign { plus, minus };

// Accumulated creation/destruction trajectories:
//   s_ell^+(t) = D^(-1/(r-1)) Int_0^t ell s_(ell+1)/q
//   s_ell^-(t) = D^(-1/(r-1)) Int_0^t (ell-1) s_ell s_2 / q
inline double s_pm_of(const TrajectoryParams& p, int ell, double t, Sign sign) {
    require_input(t >= 0, "s_pm_of needs t >= 0");
    if (sign == Sign::plus)
        require_input(ell >= 2 && ell <= p.r - 1, "s_+ needs 2 <= ell <= r-1");
    else
        require_input(ell >= 2 && ell <= p.r, "s_- needs 2 <= ell <= r");
    if (t == 0) return 0;
    const double prefactor = std::pow(static_cast<double>(p.d), -1.0 / (p.r - 1));
    auto integrand = [&](double tau) {
        if (sign == Sign::plus) return ell * s_of(p, ell + 1, tau) / q_of(p, tau);
        return (ell - 1) * s_of(p, ell, tau) * s_of(p, 2, tau) / q_of(p, tau);
    };
    return prefactor * integrate(integrand, 0.0, t, 1e-9);
}

struct ErrorFunctionValue {
    double value = 0;
    double derivative = 0;
};

namespace detail {

// f = (1 + t^p) exp(alpha t + beta t^(r-1)) q^m with the exact product-rule
// derivative; q^m contributes -m (r-1) t^(r-2).
inline ErrorFunctionValue error_function(const TrajectoryParams& prm, int p, int m,
                                         double t) {
    const int r = prm.r;
    const double tp = std::pow(t, p);
    const double poly = 1 + tp;
    const double poly_d = p * std::pow(t, p - 1);
    const double expo = std::exp(prm.alpha * t + prm.beta * std::pow(t, r - 1)) *
                        std::pow(q_of(prm, t), m);
    ErrorFunctionValue out;
    out.value = poly * expo;
    out.derivative =
        expo * (poly_d + poly * (prm.alpha + (prm.beta - m) * (r - 1) * std::pow(t, r - 2)));
    return out;
}

}  // namespace detail

inline ErrorFunctionValue f_v_of(const TrajectoryParams& p, double t) {
    require_input(t >= 0, "f_v_of needs t >= 0");
    return detail::error_function(p, 2, 2, t);
}

inline ErrorFunctionValue f_ell_of(const TrajectoryParams& p, int ell, double t) {
    require_input(t >= 0, "f_ell_of needs t >= 0");
    require_input(ell >= 2 && ell <= p.r, "f_ell_of needs 2 <= ell <= r");
    return detail::error_function(p, p.r - ell + 2, ell, t);
}

// which = 0 selects the vertex error function, otherwise which = ell.
inline ErrorFunctionValue f_of(const TrajectoryParams& p, int which, double t) {
    return which == 0 ? f_v_of(p, t) : f_ell_of(p, which, t);
}

// Crude-bound exponents, written as base + eps_coeff * epsilon with exact
// rational coefficients (lambda = epsilon/4r is folded in).
struct ThresholdExponent {
    Rational base;
    Rational eps_coeff;
};

inline ThresholdExponent setdegree_threshold_exponent(int r, int a, int b) {
    require_input(2 <= a && a < b && b <= r, "set-degree threshold needs 2 <= a < b <= r");
    ThresholdExponent e;
    e.base = Rational(b - a, r - 1);
    e.eps_coeff = Rational(-1) + Rational(2 * (r - b), 4 * r);
    return e;
}

inline ThresholdExponent codegree_threshold_exponent(int r, int a, int a2, int k) {
    require_input(2 <= a && a <= r && 2 <= a2 && a2 <= r,
                  "codegree threshold needs 2 <= a, a' <= r");
    require_input(1 <= k && k < std::min(a, a2), "codegree threshold needs 1 <= k < min(a,a')");
    ThresholdExponent e;
    e.base = Rational(a + a2 - k - 2, r - 1);
    e.eps_coeff = Rational(-1) + Rational(2 * r - 2 * k - 2, 4 * r);
    return e;
}

// D_{a^b}: cap on the number of live size-b edges over a fixed a-set.
inline double setdegree_threshold(const TrajectoryParams& p, int a, int b) {
    const auto e = setdegree_threshold_exponent(p.r, a, b);
    return std::pow(static_cast<double>(p.d),
                    e.base.value() + e.eps_coeff.value() * p.epsilon);
}

// C_{a,a'->k}: cap on pairwise codegrees, with the 2^r prefactor.
inline double codegree_threshold(const TrajectoryParams& p, int a, int a2, int k) {
    const auto e = codegree_threshold_exponent(p.r, a, a2, k);
    return std::ldexp(1.0, p.r) *
           std::pow(static_cast<double>(p.d),
                    e.base.value() + e.eps_coeff.value() * p.epsilon);
}

// Both crude bounds must sit below D^(base - epsilon/2) for every epsilon > 0,
// i.e. every eps_coeff must be <= -1/2. Checked in exact arithmetic.
inline bool thresholds_respect_envelopes(int r) {
    const Rational half(-1, 2);
    for (int a = 2; a <= r; ++a)
        for (int b = a + 1; b <= r; ++b)
            if (half < setdegree_threshold_exponent(r, a, b).eps_coeff) return false;
    for (int a = 2; a <= r; ++a)
        for (int a2 = 2; a2 <= r; ++a2)
            for (int k = 1; k < std::min(a, a2); ++k)
                if (half < codegree_threshold_exponent(r, a, a2, k).eps_coeff) return false;
    return true;
}

// One inequality family evaluated at one ell (ell = 0 marks the vertex-level
// inequality, which has no ell).
struct VareqEntry {
    int family = 0;
    int ell = 0;
    double min_slack = 0;
    double at_t = 0;
};

struct VareqReport {
    std::vector<VareqEntry> entries;
    bool all_pass = false;
    double worst_slack = 0;
    int worst_family = 0;
    int worst_ell = 0;
    double worst_t = 0;
};

namespace detail {

// Left-minus-right slack of the six derivative inequalities at a single t.
// fv/fs hold the error function values and derivatives at this t.
inline double vareq_slack(const TrajectoryParams& p, int family, int ell, double t,
                          double q, const ErrorFunctionValue& fv,
                          const std::vector<ErrorFunctionValue>& fs) {
    const int r = p.r;
    auto f = [&](int l) -> const ErrorFunctionValue& { return fs[l - 2]; };
    auto choose = [&](int top, int bot) {
        return static_cast<double>(binomial(top, bot));
    };
    switch (family) {
        case 0:
            return fv.derivative - 3 * f(2).value;
        case 1:
            return f(ell).derivative - 5 * ell * f(ell + 1).value / q;
        case 2:
            return f(ell).derivative - 2 * ell * choose(r - 1, ell) *
                                           std::pow(t, r - ell - 1) *
                                           std::pow(q, ell - 2) * fv.value;
        case 3:
            return f(ell).derivative - 7 * (ell - 1) * choose(r - 1, ell - 1) *
                                           std::pow(t, r - ell) * std::pow(q, ell - 2) *
                                           f(2).value;
        case 4:
            return f(ell).derivative -
                   6.0 * (ell - 1) * (r - 1) * std::pow(t, r - 2) * f(ell).value;
        case 5:
            return f(ell).derivative - 3.0 * (ell - 1) * (r - 1) * choose(r - 1, ell - 1) *
                                           std::pow(t, 2 * r - ell - 2) *
                                           std::pow(q, ell - 2) * fv.value;
    }
    throw std::logic_error("unknown variation-equation family");
}

inline std::vector<std::pair<int, int>> vareq_cases(int r) {
    std::vector<std::pair<int, int>> cases;
    cases.emplace_back(0, 0);
    for (int ell = 2; ell <= r - 1; ++ell) cases.emplace_back(1, ell);
    for (int ell = 2; ell <= r - 1; ++ell) cases.emplace_back(2, ell);
    for (int family = 3; family <= 5; ++family)
        for (int ell = 2; ell <= r; ++ell) cases.emplace_back(family, ell);
    return cases;
}

}  // namespace detail

// Checks all six derivative inequality families over a uniform grid on
// [0, t_max]; a family passes when its slack is strictly positive everywhere.
inline VareqReport check_variation_equations(const TrajectoryParams& p,
                                             int grid_points = 10'000) {
    require_input(grid_points >= 2, "variation-equation grid needs >= 2 points");
    const auto cases = detail::vareq_cases(p.r);
    VareqReport report;
    report.entries.resize(cases.size());
    for (std::size_t c = 0; c < cases.size(); ++c) {
        report.entries[c].family = cases[c].first;
        report.entries[c].ell = cases[c].second;
        report.entries[c].min_slack = std::numeric_limits<double>::infinity();
    }
    std::vector<ErrorFunctionValue> fs(p.r - 1);
    for (int g = 0; g < grid_points; ++g) {
        const double t = p.t_max * g / (grid_points - 1);
        const double q = q_of(p, t);
        const ErrorFunctionValue fv = f_v_of(p, t);
        for (int ell = 2; ell <= p.r; ++ell) fs[ell - 2] = f_ell_of(p, ell, t);
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const double slack =
                detail::vareq_slack(p, cases[c].first, cases[c].second, t, q, fv, fs);
            if (slack < report.entries[c].min_slack) {
                report.entries[c].min_slack = slack;
                report.entries[c].at_t = t;
            }
        }
    }
    report.all_pass = true;
    report.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& e : report.entries) {
        if (e.min_slack <= 0) report.all_pass = false;
        if (e.min_slack < report.worst_slack) {
            report.worst_slack = e.min_slack;
            report.worst_family = e.family;
            report.worst_ell = e.ell;
            report.worst_t = e.at_t;
        }
    }
    return report;
}

struct AlphaBetaSearch {
    int alpha = 0;
    int beta = 0;
    VareqReport report;
};

// Smallest integer pair (beta, alpha) in lexicographic order for which all
// variation equations hold over the grid. A coarse pre-screen rejects most
// candidates cheaply; the returned pair is validated on the full grid.
inline AlphaBetaSearch search_alpha_beta(TrajectoryParams p, int alpha_cap = 256,
                                         int beta_cap = 64, int grid_points = 10'000) {
    for (int beta = 0; beta <= beta_cap; ++beta) {
        for (int alpha = 1; alpha <= alpha_cap; ++alpha) {
            p.alpha = alpha;
            p.beta = beta;
            if (!check_variation_equations(p, 512).all_pass) continue;
            auto full = check_variation_equations(p, grid_points);
            if (!full.all_pass) continue;
            return {alpha, beta, std::move(full)};
        }
    }
    throw ResourceError("variation-equation search exhausted alpha <= " +
                        std::to_string(alpha_cap) + ", beta <= " +
                        std::to_string(beta_cap));
}

}  // namespace hygreedy
