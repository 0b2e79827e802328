#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace qtorus {

// Continued-fraction approximant p/q with |theta - p/q| < 1/q^2.
struct Convergent {
    long long p = 0;
    long long q = 1;
};

// Standard continued-fraction expansion of theta in (0,1).  Consecutive
// convergents sharing a denominator (the leading 0/1 vs 1/1 case) are
// deduplicated keeping the later, closer one.  Expansion stops at `count`
// terms, at rational termination, or once q outgrows what double precision
// can still certify against |theta - p/q| < 1/q^2.
inline std::vector<Convergent> cf_convergents(double theta, int count) {
    std::vector<Convergent> raw;
    if (count <= 0) return raw;
    const long long q_cap = 100000000;  // 1e8: beyond this 1/q^2 dips under double noise
    long long p_prev = 1, q_prev = 0;   // formal (-1)-st convergent
    long long p_cur = 0, q_cur = 1;
    double frac = theta - std::floor(theta);
    raw.push_back({p_cur, q_cur});
    while (static_cast<int>(raw.size()) < count + 1) {
        if (frac < 1e-12) break;  // rational termination
        const double inv = 1.0 / frac;
        const long long a = static_cast<long long>(std::floor(inv));
        frac = inv - static_cast<double>(a);
        if (a > (q_cap - q_prev) / q_cur) break;  // denominator would exceed the cap
        const long long p_next = a * p_cur + p_prev;
        const long long q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        raw.push_back({p_cur, q_cur});
    }
    std::vector<Convergent> out;
    for (const Convergent& c : raw) {
        if (!out.empty() && out.back().q == c.q)
            out.back() = c;
        else
            out.push_back(c);
    }
    if (static_cast<int>(out.size()) > count) out.resize(count);
    return out;
}

}  // namespace qtorus
