#include "siegel/sk.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace siegel {

namespace {

void require_prime(i64 p, const char* who) {
    if (!is_prime(p)) throw std::invalid_argument(std::string(who) + ": " + std::to_string(p) + " is not prime");
}

bool divisible(const QuadForm& T, i64 p) { return T.a % p == 0 && T.b % p == 0 && T.c % p == 0; }

QuadForm scaled(const QuadForm& T, i64 p) { return {T.a * p, T.b * p, T.c * p}; }

FourierExpansion reindexed(const FourierExpansion& f, i64 p, bool keep_p_multiple, const std::string& name) {
    require_prime(p, name.c_str());
    FourierExpansion g(f.k, f.N * p, f.det_bound, name + "(" + std::to_string(p) + ")" + f.label);
    for (const auto& [T, v] : f.coeffs) {
        if (keep_p_multiple) {
            if (divisible(T, p)) g.coeffs.emplace(T, v);
        } else {
            QuadForm pT = scaled(T, p);
            if (g.within_bound(pT)) g.coeffs.emplace(gl2_reduce(pT), v);
        }
    }
    return g;
}

Rat power(i64 p, int e) { return rpow(Rat(p), e); }

const Rat& elliptic_coefficient(const EllipticFormData& g, i64 p, const char* who) {
    if (p > g.bound())
        throw std::out_of_range(std::string(who) + ": elliptic data '" + g.label + "' stops at n = " +
                                std::to_string(g.bound()));
    return g.a[p];
}

void check_source(const EllipticFormData& g, int k, i64 p, const char* who) {
    require_prime(p, who);
    if (g.weight != 2 * k - 2)
        throw std::invalid_argument(std::string(who) + ": weight " + std::to_string(g.weight) + " is not 2k - 2 for k = " +
                                    std::to_string(k));
    if (g.level % p == 0) throw std::invalid_argument(std::string(who) + ": p divides the level");
}

}  // namespace

FourierExpansion T1_map(const FourierExpansion& f, i64 p) { return reindexed(f, p, false, "T1"); }

FourierExpansion T3_map(const FourierExpansion& f, i64 p) { return reindexed(f, p, true, "T3"); }

std::size_t coefficient_rank(const std::vector<FourierExpansion>& forms, i64 det_bound) {
    for (const auto& f : forms)
        if (f.det_bound < det_bound)
            throw std::out_of_range("coefficient_rank: '" + f.label + "' stops at detBound " +
                                    std::to_string(f.det_bound));
    auto keys = keys_upto(det_bound);
    std::vector<std::vector<Rat>> pivots;
    std::vector<std::size_t> pivot_col;
    for (const auto& f : forms) {
        std::vector<Rat> row(keys.size());
        for (std::size_t j = 0; j < keys.size(); ++j) {
            auto it = f.coeffs.find(keys[j]);
            if (it != f.coeffs.end()) row[j] = it->second;
        }
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            Rat c = row[pivot_col[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < keys.size(); ++j)
                if (pivots[i][j] != 0) row[j] -= c * pivots[i][j];
        }
        auto nz = std::find_if(row.begin(), row.end(), [](const Rat& x) { return x != 0; });
        if (nz == row.end()) continue;
        std::size_t col = static_cast<std::size_t>(nz - row.begin());
        Rat inv = 1 / Rat(row[col]);
        for (auto& x : row)
            if (x != 0) x *= inv;
        pivots.push_back(std::move(row));
        pivot_col.push_back(col);
    }
    return pivots.size();
}

SKOldformBasis oldform_basis(const FourierExpansion& lift, const std::vector<i64>& primes) {
    SKOldformBasis b;
    b.primes = primes;
    b.det_bound = lift.det_bound;
    std::set<i64> seen;
    for (i64 p : primes) {
        require_prime(p, "oldform_basis");
        if (!seen.insert(p).second) throw std::invalid_argument("oldform_basis: repeated prime " + std::to_string(p));
        if (lift.N % p == 0) throw std::invalid_argument("oldform_basis: p divides the level of the lift");
    }
    b.members = {lift};
    b.words = {""};
    i64 N = lift.N;
    for (i64 p : primes) {
        std::size_t n = b.members.size();
        std::string ps = "(" + std::to_string(p) + ")";
        for (std::size_t i = 0; i < n; ++i) {
            b.members.push_back(T1_map(b.members[i], p));
            b.words.push_back("T1" + ps + b.words[i]);
            b.members.push_back(T3_map(b.members[i], p));
            b.words.push_back("T3" + ps + b.words[i]);
        }
        N *= p;
        for (auto& f : b.members) f.N = N;
    }
    b.rank = coefficient_rank(b.members, b.det_bound);
    return b;
}

SKOldformBasis oldform_basis(const PlusSpaceData& plus, const std::vector<i64>& primes, i64 det_bound) {
    SKOldformBasis b = oldform_basis(sk_lift(plus, det_bound), primes);
    if (!b.full_rank() && plus.bound() >= 8 * det_bound) b = oldform_basis(sk_lift(plus, 2 * det_bound), primes);
    return b;
}

Rat predicted_eigenvalue(const EllipticFormData& g, int k, i64 p) {
    check_source(g, k, p, "predicted_eigenvalue");
    return elliptic_coefficient(g, p, "predicted_eigenvalue") + power(p, k - 1) + power(p, k - 2);
}

std::vector<RecurrenceResidual> three_term_recurrence(const FourierExpansion& f, i64 p, const Rat& lambda) {
    require_prime(p, "three_term_recurrence");
    Rat shift = power(p, f.k - 1) + power(p, 2 * f.k - 3);
    std::vector<RecurrenceResidual> out;
    for (const auto& T : keys_upto(f.det_bound)) {
        QuadForm pT = scaled(T, p);
        if (!f.within_bound(pT)) continue;
        Rat aT = f.coefficient(T);
        Rat r = lambda * aT - f.coefficient(pT) - shift * aT;
        r.canonicalize();
        out.push_back({T, r});
    }
    return out;
}

bool detect_ramanujan_violation(const SatakeParams& s, i64 p, double tol) {
    SatakeParams c = weyl_canonicalize(s.a, s.b);
    return std::max(std::abs(c.a), std::abs(c.b)) >= std::sqrt(double(p)) - tol;
}

SatakeParams sk_satake(const EllipticFormData& g, int k, i64 p) {
    check_source(g, k, p, "sk_satake");
    double t = elliptic_coefficient(g, p, "sk_satake").get_d() / std::pow(double(p), (g.weight - 1) / 2.0);
    cplx a = (cplx(t, 0) + std::sqrt(cplx(t * t - 4, 0))) / 2.0;
    return weyl_canonicalize(a, cplx(std::sqrt(double(p)), 0));
}

Rat brown_constant(int k, i64 M) {
    if (M < 1 || !squarefree(M)) throw std::invalid_argument("brown_constant: M must be squarefree and positive");
    auto f = factorize(M);
    Rat num = power(M, k) * (k - 1);
    for (auto [p, e] : f) num *= Rat(p * p * p * p + 1);
    auto psi = [](i64 n) -> Rat {
        Rat r(n);
        for (auto [p, e] : factorize(n)) r *= frac(p + 1, p);
        return r;
    };
    Rat gamma0_4 = psi(4 * M) / psi(M);
    Rat den = rpow(Rat(2), static_cast<long>(f.size()) + 3) * 3 * Rat(gamma0_index(M)) * gamma0_4;
    Rat r = num / den;
    r.canonicalize();
    return r;
}

double brown_norm(const EllipticFormData& g, const PlusSpaceData& shimura, int k, i64 M, i64 D) {
    if (g.weight != 2 * k - 2) throw std::invalid_argument("brown_norm: weight of g is not 2k - 2");
    if (g.level != M) throw std::invalid_argument("brown_norm: level of g differs from M");
    if (D >= 0 || !is_fundamental_discriminant(D)) throw std::invalid_argument("brown_norm: D must be a negative fundamental discriminant");
    if (gcd(M, -D) != 1) throw std::invalid_argument("brown_norm: gcd(M, D) != 1");
    if (!g.petersson_norm) throw std::invalid_argument("brown_norm: '" + g.label + "' has no Petersson norm");
    if (!g.L_one) throw std::invalid_argument("brown_norm: '" + g.label + "' has no L_one");
    if (!g.L_half_twist) throw std::invalid_argument("brown_norm: '" + g.label + "' has no L_half_twist");
    if (g.twist_D != D) throw std::invalid_argument("brown_norm: stored twist is not D = " + std::to_string(D));
    if (-D > shimura.bound()) throw std::out_of_range("brown_norm: plus space data too short");
    double a = shimura.at(-D).get_d();
    if (a == 0) throw std::domain_error("brown_norm: a(|D|) vanishes");
    double B = brown_constant(k, M).get_d();
    return B * a * a * *g.L_one / (kPi * std::pow(double(-D), k - 1.5) * *g.L_half_twist) * *g.petersson_norm;
}

double sk_omega_closed_form(const EllipticFormData& g, int k, i64 M) {
    if (!g.petersson_norm || !g.L_one || !g.L_half_twist)
        throw std::invalid_argument("sk_omega_closed_form: '" + g.label + "' lacks norm or L-values");
    double B = brown_constant(k, M).get_d();
    double log_ratio = std::lgamma(2.0 * k - 3) - (2.0 * k - 3) * std::log(4 * kPi);
    return kPi * kPi / (2 * volume(M) * B * (k - 2)) * std::exp(log_ratio) / *g.petersson_norm * *g.L_half_twist /
           *g.L_one;
}

double sk_weight_budget(i64 M, int k, double delta) {
    if (M < 1 || k < 1 || delta < 0 || delta >= 2) throw std::invalid_argument("sk_weight_budget: bad arguments");
    return std::pow(double(M), -(5 - delta)) * std::pow(double(k), -(2 - delta));
}

std::string to_json(const SKAudit& a) {
    nlohmann::json j;
    j["k"] = a.k;
    j["N"] = a.N;
    j["omega_mass"] = a.omega_mass;
    j["budget"] = a.budget;
    j["flagged"] = nlohmann::json::array();
    for (const auto& e : a.flagged)
        j["flagged"].push_back({{"label", e.label}, {"omega", e.omega}, {"ramanujan_violation", e.ramanujan_violation}});
    return j.dump(2);
}

}  // namespace siegel
