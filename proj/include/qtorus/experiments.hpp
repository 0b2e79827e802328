#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "cyclic.hpp"
#include "diophantine.hpp"
#include "measures.hpp"
#include "optimize.hpp"
#include "serialize.hpp"

namespace qtorus {

struct Row {
    std::string module, op, params, metric;
    double value = 0.0;
    double bound = 0.0;
    double delta = 0.0;
    bool pass = true;
};

// exit codes: 0 = all rows pass, 2 = assertion failure, 3 = budget
// exhaustion, 4 = configuration error
struct Report {
    std::string experiment;
    json config;
    std::uint64_t config_hash = 0;
    std::vector<Row> rows;
    int exit_code = 0;
};

namespace exp_detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void finalize(Report& rep) {
    rep.config_hash = fnv1a_hash(rep.config.dump());
    if (rep.exit_code == 0)
        for (const Row& r : rep.rows)
            if (!r.pass) {
                rep.exit_code = 2;
                break;
            }
}

// L_p norm of a 1-axis trigonometric polynomial via exact-phase quadrature;
// p = inf returns the grid sup polished by a shrinking local search.
inline double lp_1d(const std::vector<cd>& c, long long d, double p, long long N) {
    auto eval_abs = [&](double t) {
        cd s = 0.0;
        for (long long m = -d; m <= d; ++m)
            s += c[static_cast<std::size_t>(m + d)] * unit_from_turns(std::fmod(m * t, 1.0));
        return std::abs(s);
    };
    if (std::isinf(p)) {
        double best = 0.0, tb = 0.0;
        for (long long j = 0; j < N; ++j) {
            const double v = eval_abs(static_cast<double>(j) / static_cast<double>(N));
            if (v > best) {
                best = v;
                tb = static_cast<double>(j) / static_cast<double>(N);
            }
        }
        double radius = 1.0 / static_cast<double>(N);
        for (int step = 0; step < 30; ++step) {
            for (int i = -1; i <= 1; i += 2) {
                const double v = eval_abs(tb + i * radius);
                if (v > best) {
                    best = v;
                    tb += i * radius;
                }
            }
            radius *= 0.5;
        }
        return best;
    }
    double acc = 0.0;
    for (long long j = 0; j < N; ++j) {
        // exact rational phases: coefficient m at node j contributes (j*m mod N)/N turns
        cd s = 0.0;
        for (long long m = -d; m <= d; ++m) {
            const long long r = (((j * m) % N) + N) % N;
            s += c[static_cast<std::size_t>(m + d)] *
                 unit_from_turns(static_cast<double>(r) / static_cast<double>(N));
        }
        acc += std::pow(std::abs(s), p);
    }
    return std::pow(acc / static_cast<double>(N), 1.0 / p);
}

inline QPoly poly_from(const std::vector<cd>& c, long long d) {
    QPoly x(Theta::rational(0, 1));
    for (long long m = -d; m <= d; ++m) x.add_coeff(m, 0, c[static_cast<std::size_t>(m + d)]);
    return x;
}

inline std::string pname(double p) {
    if (std::isinf(p)) return "inf";
    if (p == static_cast<long long>(p)) return std::to_string(static_cast<long long>(p));
    return fmt(p);
}

}  // namespace exp_detail

// Empirical operator-norm ratios of the torus -> cyclic sampling map and its
// inverse against the closed-form discretization bounds.
inline Report run_discretization_check(const json& user) {
    using namespace exp_detail;
    Report rep;
    rep.experiment = "disc-check";
    const long long trials = user.value("trials", 1300LL);
    const std::uint64_t seed = user.value("seed", 1ULL);
    rep.config = json{{"experiment", rep.experiment},
                      {"trials", trials},
                      {"seed", seed},
                      {"pairs", json::array({{1, 4}, {2, 8}, {4, 32}, {8, 128}})},
                      {"p", json::array({"1", "2", "4", "inf"})}};
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<std::pair<long long, long long>> pairs{{1, 4}, {2, 8}, {4, 32}, {8, 128}};
    const std::vector<double> ps{1.0, 2.0, 4.0, inf};
    for (std::size_t pi_ = 0; pi_ < pairs.size(); ++pi_) {
        const auto [d, n] = pairs[pi_];
        std::vector<double> worst_fwd(ps.size(), 0.0), worst_inv(ps.size(), 0.0);
        for (long long t = 0; t < trials; ++t) {
            auto rng = seeded_stream(seed, (static_cast<std::uint64_t>(pi_) << 32) ^
                                               static_cast<std::uint64_t>(t));
            std::normal_distribution<double> g(0.0, 1.0);
            std::vector<cd> c(static_cast<std::size_t>(2 * d + 1));
            for (cd& v : c) v = cd{g(rng), g(rng)};
            const QPoly x = poly_from(c, d);
            const CyclicPoly y = j_dn(x, d, n);
            // inverse direction: a cyclic polynomial supported on |k| <= d
            CyclicPoly z(n);
            for (long long m = -d; m <= d; ++m) {
                const cd v = cd{g(rng), g(rng)};
                z.add_coeff(m, v);
            }
            const QPoly w = j_dn_inverse(z, d, n);
            std::vector<cd> wc(static_cast<std::size_t>(2 * d + 1));
            for (long long m = -d; m <= d; ++m) wc[static_cast<std::size_t>(m + d)] = w.coeff(m, 0);
            std::vector<cd> zc(static_cast<std::size_t>(2 * d + 1));
            for (long long m = -d; m <= d; ++m) zc[static_cast<std::size_t>(m + d)] = z.coeff(m);
            for (std::size_t ip = 0; ip < ps.size(); ++ip) {
                const double p = ps[ip];
                const long long N = (p == 2.0 || p == 4.0) ? 4 * d + 1 : 257;
                const double den_f = lp_1d(c, d, p, N);
                const double num_f = cyclic_lp_norm(y, p);
                if (den_f > 1e-12) worst_fwd[ip] = std::max(worst_fwd[ip], num_f / den_f);
                const double den_i = cyclic_lp_norm(z, p);
                const double num_i = lp_1d(wc, d, p, N);
                if (den_i > 1e-12) worst_inv[ip] = std::max(worst_inv[ip], num_i / den_i);
            }
        }
        for (std::size_t ip = 0; ip < ps.size(); ++ip) {
            const std::string params =
                "d=" + std::to_string(d) + ";n=" + std::to_string(n) + ";p=" + pname(ps[ip]);
            const double bf = sinc_bound(d, n);
            rep.rows.push_back({"transference", "j_dn", params, "max_ratio", worst_fwd[ip], bf,
                                bf - worst_fwd[ip], worst_fwd[ip] <= bf + 1e-9});
            const double bi = sinc_bound_inverse(d, n);
            rep.rows.push_back({"transference", "j_dn_inverse", params, "max_ratio", worst_inv[ip],
                                bi, bi - worst_inv[ip], worst_inv[ip] <= bi + 1e-9});
        }
    }
    finalize(rep);
    return rep;
}

// Multiplier-norm lower bounds for a 1-D symbol tensored with the identity
// axis, at theta = 0 and along a convergent ladder of the target angle.
inline Report run_norm_growth_scan(const json& user) {
    using namespace exp_detail;
    Report rep;
    rep.experiment = "norm-scan";
    const std::string theta_str = user.value("theta", std::string("sqrt2-1"));
    const std::string symbol_str = user.value("symbol", std::string("fejer:4"));
    const std::string p_str = user.value("p", std::string("4"));
    const long long degree = user.value("degree", 2LL);
    const int ladder = user.value("ladder", 4);
    OptimizerConfig oc;
    oc.seed = user.value("seed", 1ULL);
    oc.restarts = user.value("restarts", 8);
    oc.iterations = user.value("iterations", 200);
    if (user.contains("grid")) oc.grid = user.at("grid").get<long long>();
    rep.config = json{{"experiment", rep.experiment}, {"theta", theta_str},
                      {"symbol", symbol_str},         {"p", p_str},
                      {"degree", degree},             {"ladder", ladder},
                      {"seed", oc.seed},              {"restarts", oc.restarts},
                      {"iterations", oc.iterations},  {"grid", oc.grid}};
    const double p = p_str == "inf" ? std::numeric_limits<double>::infinity() : std::stod(p_str);
    Symbol phi = parse_symbol(symbol_str);
    const Symbol phi2 = phi.d == 1 ? tensor_with_one(phi) : phi;
    const Theta target = parse_theta(theta_str);
    if (target.is_rational())
        throw std::invalid_argument("norm-scan: theta must parse to an irrational target");

    const NormEstimate base = norm_lower_bound(phi2, p, Theta::rational(0, 1), degree, oc);
    rep.rows.push_back({"multipliers", "norm_lower_bound", "theta=0/1;p=" + p_str, "lower",
                        base.value, 0.0, base.delta, std::isfinite(base.value)});
    for (const Convergent& cv : cf_convergents(target.value(), ladder)) {
        const std::string params =
            "theta=" + std::to_string(cv.p) + "/" + std::to_string(cv.q) + ";p=" + p_str;
        const NormEstimate e =
            norm_lower_bound(phi2, p, Theta::rational(cv.p, cv.q), degree, oc);
        rep.rows.push_back({"multipliers", "norm_lower_bound", params, "lower", e.value, 0.0,
                            e.delta, std::isfinite(e.value)});
        rep.rows.push_back({"multipliers", "norm_lower_bound", params, "ratio_vs_theta0",
                            e.value / base.value, 0.0, 0.0, std::isfinite(e.value / base.value)});
    }
    finalize(rep);
    return rep;
}

// Sidon construction at the target angle: anticommutator decay, the
// rational-ladder cross-check, and randomized span-norm checks.
inline Report run_sidon_check(const json& user) {
    using namespace exp_detail;
    Report rep;
    rep.experiment = "sidon-check";
    const std::string theta_str = user.value("theta", std::string("sqrt2-1"));
    const int horizon = user.value("horizon", 10);
    const int trials = user.value("trials", 100);
    const int ladder = user.value("ladder", 6);
    const std::uint64_t seed = user.value("seed", 1ULL);
    rep.config = json{{"experiment", rep.experiment}, {"theta", theta_str},
                      {"horizon", horizon},           {"trials", trials},
                      {"ladder", ladder},             {"seed", seed},
                      {"precision_digits", 100}};
    const BigFloat theta = theta_value(theta_str);
    SidonPair pair;
    try {
        pair = sidon_sequences(theta, horizon);
    } catch (const BudgetError& e) {
        rep.rows.push_back({"diophantine", "sidon_sequences", "theta=" + theta_str, "budget",
                            e.best_residual, 0.0, 0.0, false});
        rep.exit_code = 3;
        finalize(rep);
        return rep;
    }
    for (int n = 2; n <= horizon; ++n) {
        for (int j = 1; j < n; ++j) {
            const std::string params = "j=" + std::to_string(j) + ";n=" + std::to_string(n);
            const double v = anticommutator_norm(theta, pair, j, n);
            const double b = std::pow(2.0, 1 - n);
            rep.rows.push_back(
                {"diophantine", "anticommutator_norm", params, "norm", v, b, b - v, v <= b});
            const auto lad = anticommutator_ladder(theta, pair, j, n, ladder);
            const double delta =
                std::fabs(lad.back().value - lad[lad.size() - 2].value);
            const double gap = std::fabs(lad.back().value - v);
            rep.rows.push_back({"diophantine", "anticommutator_ladder", params, "model_gap", gap,
                                delta + 1e-9, delta + 1e-9 - gap, gap <= delta + 1e-9});
        }
    }
    for (const auto [n0, w] : {std::pair{6, 4}, {7, 3}, {8, 2}}) {
        if (n0 + w > horizon) continue;
        const auto sp = span_norm_check(theta, pair, n0, w, trials, seed, 8);
        const std::string params = "n=" + std::to_string(n0) + ";Nspan=" + std::to_string(w) +
                                   ";trials=" + std::to_string(trials);
        const int viol = sp.violations_l2 + sp.violations_bound + sp.violations_op;
        rep.rows.push_back({"diophantine", "span_norm_check", params, "violations",
                            static_cast<double>(viol), 0.0, 0.0, viol == 0});
        rep.rows.push_back({"diophantine", "span_norm_check", params, "worst_op_over_l2",
                            sp.worst_op_ratio, 2.0, 2.0 - sp.worst_op_ratio,
                            sp.worst_op_ratio <= 2.0 + 1e-9});
    }
    finalize(rep);
    return rep;
}

// Measure construction from convex tails: coefficient interpolation and the
// total-variation bound for the three reference profiles.
inline Report run_measure_check(const json& user) {
    using namespace exp_detail;
    Report rep;
    rep.experiment = "measure-check";
    const long long n_max = user.value("n_max", 64LL);
    rep.config = json{{"experiment", rep.experiment},
                      {"n_max", n_max},
                      {"profiles", json::array({"one", "affine", "inverse-sinc-256"})}};
    struct Profile {
        std::string name;
        std::function<double(double)> f;
    };
    const double N = 256.0;
    const std::vector<Profile> profiles{
        {"one", [](double) { return 1.0; }},
        {"affine", [](double x) { return 1.0 + x; }},
        {"inverse-sinc-256", [N](double x) { return x == 0.0 ? 1.0 : (pi * x / N) / std::sin(pi * x / N); }}};
    for (const Profile& pr : profiles) {
        for (long long n = 1; n <= n_max; n *= 2) {
            const AtomicFejerMeasure mu = convex_measure(pr.f, n);
            double coeff_err = 0.0;
            for (long long k = -n; k <= n; ++k)
                coeff_err = std::max(coeff_err, std::abs(measure_fourier(mu, k) -
                                                         pr.f(static_cast<double>(std::llabs(k)))));
            const std::string params = "f=" + pr.name + ";n=" + std::to_string(n);
            rep.rows.push_back({"multipliers", "convex_measure", params, "coeff_err", coeff_err,
                                1e-10, 1e-10 - coeff_err, coeff_err <= 1e-10});
            const double tv = total_variation_bound(mu);
            const double cap = pr.f(static_cast<double>(n)) * pr.f(static_cast<double>(n));
            rep.rows.push_back({"multipliers", "convex_measure", params, "tv_bound", tv,
                                cap, cap - tv, tv <= cap + 1e-9});
        }
    }
    finalize(rep);
    return rep;
}

// Commutation-defect sequences: the simultaneous-approximation searches with
// their verified residuals.
inline Report run_relation_check(const json& user) {
    using namespace exp_detail;
    Report rep;
    rep.experiment = "relation-check";
    const std::string theta_str = user.value("theta", std::string("sqrt2-1"));
    const std::string gamma_str = user.value("gamma", std::string("1/3"));
    const long long period = user.value("period", 2LL);
    const int count = user.value("count", 8);
    const long long budget = user.value("budget", 1000000LL);
    const std::string pair_gamma_str = user.value("pair_gamma", std::string("golden"));
    const double pair_eps = user.value("pair_eps", 0.05);
    rep.config = json{{"experiment", rep.experiment}, {"theta", theta_str},
                      {"gamma", gamma_str},           {"period", period},
                      {"count", count},               {"budget", budget},
                      {"pair_gamma", pair_gamma_str}, {"pair_eps", pair_eps}};
    const double theta = parse_theta(theta_str).value();
    const double gamma = parse_theta(gamma_str).value();
    try {
        const auto rels = emb_sequences(theta, gamma, period, count, budget);
        for (const auto& r : rels) {
            const std::string params = "n=" + std::to_string(r.n) + ";k=" + std::to_string(r.k) +
                                       ";l=" + std::to_string(r.l);
            const double b = 1.0 / static_cast<double>(r.n);
            rep.rows.push_back({"diophantine", "emb_sequences", params, "defect_k", r.defect_k, b,
                                b - r.defect_k, r.defect_k < b});
            rep.rows.push_back({"diophantine", "emb_sequences", params, "defect_l", r.defect_l, b,
                                b - r.defect_l, r.defect_l < b});
        }
        const double pg = parse_theta(pair_gamma_str).value();
        const long long k = find_pair_equidist(theta, pg, pair_eps, budget);
        const double r1 = dio_detail::chord(dio_detail::frac(pg * static_cast<double>(k)));
        const double r2 =
            dio_detail::chord(dio_detail::frac(theta * static_cast<double>(k - 1)));
        const std::string params = "k=" + std::to_string(k) + ";eps=" + fmt(pair_eps);
        rep.rows.push_back({"diophantine", "find_pair_equidist", params, "residual_gamma", r1,
                            pair_eps, pair_eps - r1, r1 < pair_eps});
        rep.rows.push_back({"diophantine", "find_pair_equidist", params, "residual_theta", r2,
                            pair_eps, pair_eps - r2, r2 < pair_eps});
    } catch (const BudgetError& e) {
        rep.rows.push_back({"diophantine", "search", "budget=" + std::to_string(e.budget),
                            "best_residual", e.best_residual, 0.0, 0.0, false});
        rep.exit_code = 3;
    }
    finalize(rep);
    return rep;
}

inline Report run_experiment(const std::string& name, const json& user) {
    if (name == "disc-check") return run_discretization_check(user);
    if (name == "norm-scan") return run_norm_growth_scan(user);
    if (name == "sidon-check") return run_sidon_check(user);
    if (name == "measure-check") return run_measure_check(user);
    if (name == "relation-check") return run_relation_check(user);
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

inline json report_to_json(const Report& rep) {
    char hash[19];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(rep.config_hash));
    json rows = json::array();
    for (const Row& r : rep.rows)
        rows.push_back(json{{"experiment", rep.experiment},
                            {"module", r.module},
                            {"op", r.op},
                            {"params", r.params},
                            {"metric", r.metric},
                            {"value", r.value},
                            {"bound", r.bound},
                            {"delta", r.delta},
                            {"pass", r.pass}});
    return json{{"experiment", rep.experiment},
                {"config", rep.config},
                {"config_hash", hash},
                {"exit_code", rep.exit_code},
                {"rows", rows}};
}

inline std::string report_to_csv(const Report& rep) {
    using exp_detail::fmt;
    char hash[19];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(rep.config_hash));
    std::string out = "# config=" + rep.config.dump() + "\n# config_hash=" + hash + "\n";
    out += "experiment,module,op,params,metric,value,bound,delta,pass\n";
    for (const Row& r : rep.rows)
        out += rep.experiment + "," + r.module + "," + r.op + "," + r.params + "," + r.metric +
               "," + fmt(r.value) + "," + fmt(r.bound) + "," + fmt(r.delta) + "," +
               (r.pass ? "true" : "false") + "\n";
    return out;
}

}  // namespace qtorus
