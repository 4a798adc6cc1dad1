#pragma once

// Exact search for integer roots of a univariate integer polynomial: strip
// powers of V, bound the real roots (Cauchy), isolate them on the square-free
// part with a Sturm sequence and exact-sign bisection at integer points, then
// evaluate the integers adjacent to each isolating interval.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "polyring.hpp"

namespace pseudopoints {

/// Half-open interval (lo, hi] holding `roots` distinct real roots.
struct RootInterval {
    BigInt lo;
    BigInt hi;
    std::uint32_t roots = 0;

    friend bool operator==(const RootInterval&, const RootInterval&) = default;
};

struct CandidateCheck {
    BigInt m;
    BigInt value;

    friend bool operator==(const CandidateCheck&, const CandidateCheck&) = default;
};

/// Everything the integer-root search looked at, in a re-checkable form.
struct RootExclusion {
    std::vector<BigInt> coefficients; // g(V) = f(n, V), constant term first
    std::uint32_t zero_multiplicity = 0;
    BigInt cauchy_bound = 0;
    std::vector<RootInterval> intervals;
    std::vector<CandidateCheck> candidates;

    friend bool operator==(const RootExclusion&, const RootExclusion&) = default;
};

struct IntegerRoots {
    std::vector<BigInt> roots; // increasing
    RootExclusion record;
};

namespace upoly {

using Coeffs = std::vector<BigInt>;

inline void trim(Coeffs& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long deg(const Coeffs& a) { return static_cast<long>(a.size()) - 1; }

inline Coeffs derivative(const Coeffs& a) {
    Coeffs d;
    for (std::size_t k = 1; k < a.size(); ++k) d.push_back(a[k] * static_cast<unsigned long long>(k));
    trim(d);
    return d;
}

inline BigInt content(const Coeffs& a) {
    BigInt g = 0;
    for (const auto& c : a) g = gcd(g, c);
    return g;
}

/// Divides out the positive content; the sign of the polynomial is kept.
inline Coeffs primitive(Coeffs a) {
    const BigInt c = content(a);
    if (c > 1)
        for (auto& x : a) x /= c;
    return a;
}

/// |lc(b)|^(deg a - deg b + 1) * a mod b. The multiplier is positive so the
/// remainder keeps the sign pattern a Sturm sequence needs.
inline Coeffs pseudo_remainder(Coeffs a, const Coeffs& b) {
    const BigInt lc = big_abs(b.back());
    const BigInt& lb = b.back();
    while (deg(a) >= deg(b) && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const BigInt la = a.back();
        for (auto& x : a) x *= lc;
        // a <- a - (la*lc/lb) V^shift b, exact because lc = |lb|.
        const BigInt factor = la * lc / lb;
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= factor * b[k];
        trim(a);
    }
    return a;
}

inline Coeffs gcd_poly(Coeffs a, Coeffs b) {
    if (deg(a) < deg(b)) std::swap(a, b);
    a = primitive(std::move(a));
    b = primitive(std::move(b));
    while (!b.empty()) {
        Coeffs r = primitive(pseudo_remainder(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() < 0)
        for (auto& x : a) x = -x;
    return a;
}

/// a / b when b divides a with an integer quotient.
inline Coeffs exact_div(Coeffs a, const Coeffs& b) {
    if (deg(a) < deg(b)) return {};
    Coeffs q(a.size() - b.size() + 1);
    while (deg(a) >= deg(b) && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const BigInt factor = a.back() / b.back();
        q[shift] = factor;
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= factor * b[k];
        trim(a);
    }
    trim(q);
    return q;
}

inline BigInt evaluate(const Coeffs& a, const BigInt& x) {
    BigInt acc = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline int sign(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

class SturmSequence {
public:
    explicit SturmSequence(const Coeffs& squarefree) {
        seq_.push_back(squarefree);
        Coeffs d = derivative(squarefree);
        if (d.empty()) return;
        seq_.push_back(primitive(d));
        while (true) {
            Coeffs r = pseudo_remainder(seq_[seq_.size() - 2], seq_.back());
            if (r.empty()) break;
            for (auto& x : r) x = -x;
            seq_.push_back(primitive(std::move(r)));
        }
    }

    int variations(const BigInt& x) const {
        int count = 0;
        int last = 0;
        for (const auto& p : seq_) {
            const int s = sign(evaluate(p, x));
            if (s == 0) continue;
            if (last != 0 && s != last) ++count;
            last = s;
        }
        return count;
    }

    /// Distinct real roots in (lo, hi].
    int roots_in(const BigInt& lo, const BigInt& hi) const { return variations(lo) - variations(hi); }

private:
    std::vector<Coeffs> seq_;
};

} // namespace upoly

/// 1 + ceil(max_{k<d} |a_k| / |a_d|): every real root r has |r| <= this.
inline BigInt cauchy_bound(const std::vector<BigInt>& coeffs) {
    if (coeffs.size() <= 1) return 1;
    const BigInt lead = big_abs(coeffs.back());
    BigInt top = 0;
    for (std::size_t k = 0; k + 1 < coeffs.size(); ++k) top = std::max(top, big_abs(coeffs[k]));
    return 1 + (top + lead - 1) / lead;
}

/// All integer roots of g, with the record of how they were found.
/// Throws DomainError for the zero polynomial, whose roots are all integers.
inline IntegerRoots integer_roots(const UnivariatePoly& g) {
    if (g.is_zero()) throw DomainError("integer roots of the zero polynomial are unbounded");
    IntegerRoots out;
    RootExclusion& rec = out.record;
    rec.coefficients = g.coefficients();

    upoly::Coeffs h = g.coefficients();
    while (h.front() == 0) {
        h.erase(h.begin());
        ++rec.zero_multiplicity;
    }
    if (rec.zero_multiplicity > 0) out.roots.push_back(0);

    rec.cauchy_bound = cauchy_bound(h);
    if (upoly::deg(h) >= 1) {
        const upoly::Coeffs sqf = upoly::exact_div(h, upoly::gcd_poly(h, upoly::derivative(h)));
        const upoly::SturmSequence sturm(sqf);

        struct Pending {
            BigInt lo, hi;
            int roots;
        };
        std::vector<Pending> stack;
        const BigInt lo0 = -rec.cauchy_bound - 1;
        const BigInt hi0 = rec.cauchy_bound;
        stack.push_back({lo0, hi0, sturm.roots_in(lo0, hi0)});
        while (!stack.empty()) {
            Pending cur = std::move(stack.back());
            stack.pop_back();
            if (cur.roots == 0) continue;
            if (cur.hi - cur.lo <= 1) {
                rec.intervals.push_back({cur.lo, cur.hi, static_cast<std::uint32_t>(cur.roots)});
                continue;
            }
            BigInt mid = cur.lo + (cur.hi - cur.lo) / 2;
            const int left = sturm.roots_in(cur.lo, mid);
            // Right half first so the left half is processed next (increasing order).
            stack.push_back({mid, cur.hi, cur.roots - left});
            stack.push_back({cur.lo, std::move(mid), left});
        }
        for (const auto& iv : rec.intervals) {
            for (const BigInt* m : {&iv.lo, &iv.hi}) {
                if (!rec.candidates.empty() && rec.candidates.back().m == *m) continue;
                rec.candidates.push_back({*m, g(*m)});
                if (rec.candidates.back().value == 0) out.roots.push_back(*m);
            }
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
    return out;
}

/// Smallest integer m with f(n, m) = 0, if any.
inline std::optional<BigInt> integer_solution(const BivariatePoly& f, const BigInt& n) {
    const auto g = specialize_u(f, n);
    if (g.is_zero())
        throw DomainError("f(" + to_decimal(n) + ", V) vanishes identically; U - n divides f");
    auto found = integer_roots(g);
    if (found.roots.empty()) return std::nullopt;
    return found.roots.front();
}

} // namespace pseudopoints
