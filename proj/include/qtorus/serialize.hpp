#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cyclic.hpp"
#include "diophantine.hpp"
#include "matrix_model.hpp"
#include "qpoly.hpp"
#include "symbols.hpp"

namespace qtorus {

using json = nlohmann::json;

// "a/b" parses exactly rational; "sqrt2-1", "golden" and decimal literals
// parse as real angles (full precision lives in theta_value for the
// big-float consumers; Theta keeps the double image).
inline Theta parse_theta(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("theta: empty string");
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::size_t pos1 = 0, pos2 = 0;
        const long long num = std::stoll(s.substr(0, slash), &pos1);
        const long long den = std::stoll(s.substr(slash + 1), &pos2);
        if (pos1 != slash || pos2 != s.size() - slash - 1)
            throw std::invalid_argument("theta: malformed rational '" + s + "'");
        return Theta::rational(num, den);
    }
    if (s == "sqrt2-1" || s == "golden")
        return Theta::real(theta_value(s).convert_to<double>());
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("theta: malformed value '" + s + "'");
    return Theta::real(v);
}

inline json to_json(const Theta& th) {
    if (th.is_rational()) return json{{"num", th.num()}, {"den", th.den()}};
    return json{{"real", th.value()}};
}

inline Theta theta_from_json(const json& j) {
    if (j.contains("den")) return Theta::rational(j.at("num").get<long long>(), j.at("den").get<long long>());
    return Theta::real(j.at("real").get<double>());
}

// coefficients as lexicographically sorted rows [m, n, re, im]
inline json to_json(const QPoly& x) {
    json coeffs = json::array();
    for (const auto& [idx, c] : x.coeffs())
        coeffs.push_back({idx[0], idx[1], c.real(), c.imag()});
    return json{{"theta", to_json(x.theta())}, {"coeffs", coeffs}};
}

inline QPoly qpoly_from_json(const json& j) {
    QPoly x(theta_from_json(j.at("theta")));
    for (const auto& row : j.at("coeffs"))
        x.add_coeff(row.at(0).get<long long>(), row.at(1).get<long long>(),
                    cd{row.at(2).get<double>(), row.at(3).get<double>()});
    return x;
}

inline json to_json(const NormEstimate& e) {
    json j{{"value", e.value}, {"kind", e.kind}, {"grid", e.grid}, {"delta", e.delta}};
    if (!e.ladder.empty()) j["ladder"] = e.ladder;
    if (!e.witness.empty()) j["witness"] = e.witness;
    if (e.has_transcript)
        j["transcript"] = json{{"seed", e.transcript.seed},
                               {"restarts", e.transcript.restarts},
                               {"iterations", e.transcript.iterations},
                               {"discarded", e.transcript.discarded}};
    return j;
}

// Builtin symbol specs: "fejer:n", "dirichlet:n", "pisier:seed:blocks"
// (1-D; callers tensor as needed).  A trailing ":2" on fejer/dirichlet
// builds the 2-D product symbol directly.
inline Symbol parse_symbol(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    auto as_ll = [&](std::size_t i, const char* what) {
        if (i >= parts.size()) throw std::invalid_argument(std::string("symbol: missing ") + what);
        return std::stoll(parts[i]);
    };
    if (parts[0] == "fejer") {
        const long long n = as_ll(1, "order");
        const int d = parts.size() > 2 ? static_cast<int>(as_ll(2, "dim")) : 1;
        return fejer_symbol(n, d);
    }
    if (parts[0] == "dirichlet") {
        const long long n = as_ll(1, "order");
        const int d = parts.size() > 2 ? static_cast<int>(as_ll(2, "dim")) : 1;
        return dirichlet_symbol(n, d);
    }
    if (parts[0] == "pisier") {
        const auto seed = static_cast<std::uint64_t>(as_ll(1, "seed"));
        const int blocks = static_cast<int>(as_ll(2, "blocks"));
        return pisier_symbol(seed, blocks);
    }
    throw std::invalid_argument("symbol: unknown builtin '" + parts[0] + "'");
}

// Structural symbol wire form: {"d", "period"?, "support"?, "values":[[m,(n),re,im],...]}.
inline json to_json(const Symbol& phi, long long box) {
    json j{{"d", phi.d}};
    if (phi.period) j["period"] = *phi.period;
    if (phi.support) j["support"] = *phi.support;
    json values = json::array();
    if (phi.d == 1) {
        for (long long m = -box; m <= box; ++m) {
            const cd v = phi.f(m, 0);
            values.push_back({m, v.real(), v.imag()});
        }
    } else {
        for (long long m = -box; m <= box; ++m)
            for (long long n = -box; n <= box; ++n) {
                const cd v = phi.f(m, n);
                values.push_back({m, n, v.real(), v.imag()});
            }
    }
    j["values"] = values;
    return j;
}

inline Symbol symbol_from_json(const json& j) {
    const int d = j.at("d").get<int>();
    std::map<std::array<long long, 2>, cd> table;
    for (const auto& row : j.at("values")) {
        if (d == 1)
            table[{row.at(0).get<long long>(), 0}] =
                cd{row.at(1).get<double>(), row.at(2).get<double>()};
        else
            table[{row.at(0).get<long long>(), row.at(1).get<long long>()}] =
                cd{row.at(2).get<double>(), row.at(3).get<double>()};
    }
    std::optional<std::array<long long, 2>> period;
    if (j.contains("period"))
        period = std::array<long long, 2>{j.at("period").at(0).get<long long>(),
                                          j.at("period").at(1).get<long long>()};
    Symbol phi = table_symbol(d, table, period);
    if (j.contains("support"))
        phi.support = std::array<long long, 2>{j.at("support").at(0).get<long long>(),
                                               j.at("support").at(1).get<long long>()};
    return phi;
}

inline json to_json(const SidonPair& pair, const BigFloat& theta) {
    json rows = json::array();
    for (std::size_t i = 0; i < pair.k.size(); ++i) {
        json row{{"n", i + 1}, {"k", pair.k[i].str()}, {"l", pair.l[i].str()}};
        if (i > 0) {
            // verified residuals of the binding inequalities at this index
            double worst_anti = 0.0, worst_comm = 0.0;
            for (std::size_t j = 0; j + 1 < i + 1; ++j) {
                const double fa = dio_detail::big_frac(theta * BigFloat(pair.k[j] * pair.l[i]))
                                      .convert_to<double>();
                const double fc = dio_detail::big_frac(theta * BigFloat(pair.k[i] * pair.l[j]))
                                      .convert_to<double>();
                worst_anti = std::max(worst_anti, 2.0 * std::fabs(std::cos(pi * fa)));
                worst_comm = std::max(worst_comm, 2.0 * std::fabs(std::sin(pi * fc)));
            }
            row["residual_anti"] = worst_anti;
            row["residual_comm"] = worst_comm;
        }
        rows.push_back(row);
    }
    return json{{"horizon", pair.horizon}, {"entries", rows}};
}

// FNV-1a 64-bit, the configuration fingerprint embedded in every report
inline std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qtorus
