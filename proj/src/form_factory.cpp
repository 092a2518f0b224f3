#include "siegel/form_factory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace siegel {

Rat zeta_neg(int n) {
    if (n < 1 || n % 2 == 0) throw std::domain_error("zeta_neg: need odd n >= 1");
    return -bernoulli(n + 1) / (n + 1);
}

Rat cohen_H(int r, i64 N) {
    if (r < 1) throw std::domain_error("cohen_H: r must be positive");
    if (N < 0) throw std::domain_error("cohen_H: N must be nonnegative");
    if (N == 0) return -bernoulli(2 * r) / (2 * r);
    if (mod(N, 4) == 1 || mod(N, 4) == 2) return 0;

    static std::mutex mu;
    static std::map<std::pair<int, i64>, Rat> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({r, N});
        if (it != cache.end()) return it->second;
    }
    i64 D0, f;
    fundamental_part(-N, D0, f);
    i64 m = -D0;
    // generalized Bernoulli number B_{r,chi} from power sums of chi
    std::vector<Big> S(r + 1, Big(0));
    for (i64 a = 1; a <= m; ++a) {
        int ch = kronecker(D0, a);
        if (!ch) continue;
        Big pw = 1;
        for (int e = 0; e <= r; ++e) {
            S[e] += ch * pw;
            pw *= a;
        }
    }
    Rat B = 0;
    Big binom = 1;
    for (int j = 0; j <= r; ++j) {
        Rat fj = j == 0 ? frac(1, m) : Rat(ipow(Big(m), j - 1));
        B += Rat(binom) * bernoulli(j) * fj * Rat(S[r - j]);
        binom = binom * (r - j) / (j + 1);
    }
    Rat L = -B / r;
    Big s = 0;
    for (i64 d : divisors(f)) {
        int mu_d = mobius(d);
        if (!mu_d) continue;
        s += mu_d * kronecker(D0, d) * ipow(Big(d), r - 1) * sigma_k(f / d, 2 * r - 1);
    }
    Rat h = L * Rat(s);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(r, N), h);
    return h;
}

std::vector<Rat> q_eisenstein(int k, i64 nmax) {
    std::vector<Rat> e(nmax + 1, Rat(0));
    e[0] = 1;
    Rat c = Rat(-2 * k) / bernoulli(k);
    for (i64 n = 1; n <= nmax; ++n) e[n] = c * Rat(sigma_k(n, k - 1));
    return e;
}

std::vector<Rat> q_mul(const std::vector<Rat>& x, const std::vector<Rat>& y, i64 nmax) {
    std::vector<Rat> out(nmax + 1, Rat(0));
    for (i64 i = 0; i <= nmax && i < i64(x.size()); ++i) {
        if (x[i] == 0) continue;
        for (i64 j = 0; i + j <= nmax && j < i64(y.size()); ++j) out[i + j] += x[i] * y[j];
    }
    return out;
}

EllipticFormData elliptic_eigenform(int w, i64 nmax) {
    auto E4 = q_eisenstein(4, nmax), E6 = q_eisenstein(6, nmax);
    auto E43 = q_mul(q_mul(E4, E4, nmax), E4, nmax), E62 = q_mul(E6, E6, nmax);
    std::vector<Rat> delta(nmax + 1);
    for (i64 n = 0; n <= nmax; ++n) delta[n] = (E43[n] - E62[n]) / 1728;
    std::vector<Rat> g;
    switch (w) {
        case 12: g = delta; break;
        case 16: g = q_mul(delta, E4, nmax); break;
        case 18: g = q_mul(delta, E6, nmax); break;
        case 20: g = q_mul(delta, q_mul(E4, E4, nmax), nmax); break;
        case 22: g = q_mul(delta, q_mul(E4, E6, nmax), nmax); break;
        case 26: g = q_mul(delta, q_mul(q_mul(E4, E4, nmax), E6, nmax), nmax); break;
        default: throw std::domain_error("elliptic_eigenform: weight " + std::to_string(w) + " unsupported");
    }
    EllipticFormData d;
    d.weight = w;
    d.level = 1;
    d.a = g;
    d.label = "level1_w" + std::to_string(w);
    return d;
}

void EllipticFormData::validate() const {
    if (a.size() < 2) throw std::invalid_argument("elliptic data '" + label + "': no coefficients");
    if (a[1] != 1) throw std::invalid_argument("elliptic data '" + label + "': a(1) != 1 (not a normalized newform)");
    if (weight < 2 || weight % 2) throw std::invalid_argument("elliptic data '" + label + "': bad weight");
    for (i64 p : primes_upto(bound())) {
        if (level % p == 0) continue;
        double bnd = 2 * std::pow(double(p), (weight - 1) / 2.0);
        if (std::abs(a[p].get_d()) > bnd * (1 + 1e-12))
            throw std::invalid_argument("elliptic data '" + label + "': a(" + std::to_string(p) +
                                        ") violates the Deligne bound");
    }
}

const Rat& PlusSpaceData::at(i64 n) const {
    if (n < 0 || n > bound()) throw std::out_of_range("plus space '" + label + "': c(" + std::to_string(n) + ") not available");
    return c[n];
}

void PlusSpaceData::validate() const {
    for (i64 n = 0; n <= bound(); ++n)
        if ((mod(n, 4) == 1 || mod(n, 4) == 2) && c[n] != 0)
            throw std::invalid_argument("plus space '" + label + "': nonzero c(" + std::to_string(n) + ")");
}

std::vector<Rat> jacobi_eisenstein(int k, i64 Dmax) {
    Rat z = zeta_neg(2 * k - 3);
    std::vector<Rat> e(Dmax + 1, Rat(0));
    for (i64 D = 0; D <= Dmax; ++D)
        if (mod(D, 4) == 0 || mod(D, 4) == 3) e[D] = cohen_H(k - 1, D) / z;
    return e;
}

namespace {

// (g * phi)(D) = sum_j g(j) c_phi(D - 4j)
std::vector<Rat> jacobi_times_elliptic(const std::vector<Rat>& g, const std::vector<Rat>& phi, i64 Dmax) {
    std::vector<Rat> out(Dmax + 1, Rat(0));
    for (i64 D = 0; D <= Dmax; ++D) {
        if (mod(D, 4) == 1 || mod(D, 4) == 2) continue;
        for (i64 j = 0; 4 * j <= D; ++j)
            if (g[j] != 0 && phi[D - 4 * j] != 0) out[D] += g[j] * phi[D - 4 * j];
    }
    return out;
}

}  // namespace

PlusSpaceData plus_space_form(const std::string& name, i64 Dmax) {
    i64 n = Dmax / 4 + 1;
    auto E4 = q_eisenstein(4, n), E6 = q_eisenstein(6, n);
    auto e4 = jacobi_eisenstein(4, Dmax), e6 = jacobi_eisenstein(6, Dmax);
    auto combine = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
        std::vector<Rat> c(Dmax + 1);
        for (i64 D = 0; D <= Dmax; ++D) c[D] = (x[D] - y[D]) / 144;
        return c;
    };
    PlusSpaceData p;
    p.label = name;
    if (name == "phi10" || name == "phi10E6") {
        p.k = 10;
        p.c = combine(jacobi_times_elliptic(E6, e4, Dmax), jacobi_times_elliptic(E4, e6, Dmax));
        if (name == "phi10E6") {
            p.k = 16;
            p.c = jacobi_times_elliptic(E6, p.c, Dmax);
        }
    } else if (name == "phi12" || name == "phi12E4") {
        p.k = 12;
        p.c = combine(jacobi_times_elliptic(q_mul(E4, E4, n), e4, Dmax), jacobi_times_elliptic(E6, e6, Dmax));
        if (name == "phi12E4") {
            p.k = 16;
            p.c = jacobi_times_elliptic(E4, p.c, Dmax);
        }
    } else {
        throw std::invalid_argument("plus_space_form: unknown form '" + name + "'");
    }
    return p;
}

Rat sk_coefficient(const PlusSpaceData& plus, const QuadForm& T) {
    if (!T.positive_definite()) throw std::domain_error("sk_coefficient: T not positive definite");
    i64 D4 = T.det4();
    if (D4 > plus.bound())
        throw std::out_of_range("sk_coefficient: plus space data '" + plus.label + "' only covers n <= " +
                                std::to_string(plus.bound()) + ", need " + std::to_string(D4));
    Rat s = 0;
    for (i64 e : divisors(content(T))) s += Rat(ipow(Big(e), plus.k - 1)) * plus.c[D4 / (e * e)];
    return s;
}

FourierExpansion sk_lift(const PlusSpaceData& plus, i64 det_bound, const std::string& label) {
    if (plus.bound() < 4 * det_bound)
        throw std::out_of_range("sk_lift: plus space data '" + plus.label + "' covers n <= " +
                                std::to_string(plus.bound()) + " but detBound " + std::to_string(det_bound) +
                                " needs " + std::to_string(4 * det_bound));
    FourierExpansion f(plus.k, 1, det_bound, label.empty() ? "SK(" + plus.label + ")" : label);
    auto keys = keys_upto(det_bound);
    std::vector<Rat> vals(keys.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < keys.size(); ++i) vals[i] = sk_coefficient(plus, keys[i]);
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (vals[i] != 0) f.coeffs.emplace(keys[i], vals[i]);
    return f;
}

QuadForm semidefinite_key(const QuadForm& T) {
    if (T.a < 0 || T.c < 0 || T.det4() < 0) throw std::domain_error("form " + T.str() + " is not positive semidefinite");
    if (T.a == 0 && T.b == 0 && T.c == 0) return {0, 0, 0};
    if (T.det4() == 0) return {content(T), 0, 0};
    return gl2_reduce(T);
}

Rat eisenstein_coefficient(int k, const QuadForm& T) {
    if (!(k == 4 || k == 6 || k == 8 || k == 10 || k == 12))
        throw std::domain_error("eisenstein_coefficient: weight " + std::to_string(k) + " unsupported");
    QuadForm key = semidefinite_key(T);
    if (key.a == 0) return 1;
    if (key.det4() == 0) return Rat(-2 * k) / bernoulli(k) * Rat(sigma_k(key.a, k - 1));
    Rat pref = Rat(2) / (zeta_neg(k - 1) * zeta_neg(2 * k - 3));
    i64 D4 = key.det4();
    Rat s = 0;
    for (i64 d : divisors(content(key))) s += Rat(ipow(Big(d), k - 1)) * cohen_H(k - 1, D4 / (d * d));
    return pref * s;
}

FourierExpansion eisenstein_series(int k, i64 det_bound) {
    FourierExpansion f(k, 1, det_bound, "E" + std::to_string(k));
    for (const auto& T : keys_upto(det_bound)) f.set(T, eisenstein_coefficient(k, T));
    return f;
}

std::pair<FourierExpansion, FourierExpansion> igusa_cusp_forms(i64 det_bound) {
    auto p10 = plus_space_form("phi10", 4 * det_bound);
    auto p12 = plus_space_form("phi12", 4 * det_bound);
    return {sk_lift(p10, det_bound, "chi10"), sk_lift(p12, det_bound, "chi12")};
}

Rat product_coefficient(const SeriesFn& f, const SeriesFn& g, const QuadForm& T) {
    Rat s = 0;
    for (i64 a1 = 0; a1 <= T.a; ++a1)
        for (i64 c1 = 0; c1 <= T.c; ++c1) {
            i64 bmax = isqrt(4 * a1 * c1);
            for (i64 b1 = -bmax; b1 <= bmax; ++b1) {
                QuadForm R{T.a - a1, T.b - b1, T.c - c1};
                if (R.det4() < 0) continue;
                s += f({a1, b1, c1}) * g(R);
            }
        }
    return s;
}

namespace {

SeriesFn memoize(SeriesFn fn) {
    auto memo = std::make_shared<std::map<QuadForm, Rat>>();
    return [fn, memo](const QuadForm& T) {
        QuadForm key = semidefinite_key(T);
        auto it = memo->find(key);
        if (it != memo->end()) return it->second;
        Rat v = fn(key);
        memo->emplace(key, v);
        return v;
    };
}

SeriesFn product(SeriesFn f, SeriesFn g) {
    return memoize([f, g](const QuadForm& T) { return product_coefficient(f, g, T); });
}

}  // namespace

std::pair<FourierExpansion, FourierExpansion> igusa_from_eisenstein(i64 det_bound) {
    auto E = [](int k) { return memoize([k](const QuadForm& T) { return eisenstein_coefficient(k, T); }); };
    SeriesFn E4 = E(4), E6 = E(6), E10 = E(10), E12 = E(12);
    SeriesFn E4E6 = product(E4, E6), E4sq = product(E4, E4);
    SeriesFn E4cube = product(E4sq, E4), E6sq = product(E6, E6);
    auto x10 = [&](const QuadForm& T) -> Rat { return E4E6(T) - E10(T); };
    auto x12 = [&](const QuadForm& T) -> Rat { return 441 * E4cube(T) + 250 * E6sq(T) - 691 * E12(T); };
    QuadForm one{1, 1, 1};
    Rat n10 = x10(one), n12 = x12(one);
    FourierExpansion c10(10, 1, det_bound, "chi10_eis"), c12(12, 1, det_bound, "chi12_eis");
    for (const auto& T : keys_upto(det_bound)) {
        c10.set(T, x10(T) / n10);
        c12.set(T, x12(T) / n12);
    }
    return {c10, c12};
}

namespace {

struct HeaderBody {
    std::map<std::string, std::vector<std::string>> header;
    std::vector<std::pair<i64, Rat>> body;
};

HeaderBody parse_indexed(const std::string& text, const std::string& source) {
    HeaderBody hb;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error(source + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            hb.header[key].push_back(line.substr(eq + 1));
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) fail("expected 'n : value'");
        try {
            std::size_t pos = 0;
            std::string ns = line.substr(0, colon);
            i64 n = std::stol(ns, &pos);
            if (ns.find_first_not_of(' ', pos) != std::string::npos) fail("bad index '" + ns + "'");
            hb.body.emplace_back(n, parse_rational(line.substr(colon + 1)));
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    return hb;
}

const std::string* single(const HeaderBody& hb, const std::string& key) {
    auto it = hb.header.find(key);
    if (it == hb.header.end()) return nullptr;
    return &it->second.back();
}

}  // namespace

EllipticFormData parse_elliptic(const std::string& text, const std::string& source) {
    auto hb = parse_indexed(text, source);
    static const std::vector<std::string> known = {"weight", "level", "label", "al", "petersson_norm",
                                                   "L_one", "L_half_twist", "twist_D"};
    for (const auto& kv : hb.header)
        if (std::find(known.begin(), known.end(), kv.first) == known.end())
            throw std::runtime_error(source + ": unknown header key '" + kv.first + "'");
    EllipticFormData g;
    auto w = single(hb, "weight");
    if (!w) throw std::runtime_error(source + ": missing weight");
    g.weight = std::stoi(*w);
    if (auto s = single(hb, "level")) g.level = std::stol(*s);
    if (auto s = single(hb, "label")) g.label = *s;
    if (auto s = single(hb, "petersson_norm")) g.petersson_norm = std::stod(*s);
    if (auto s = single(hb, "L_one")) g.L_one = std::stod(*s);
    if (auto s = single(hb, "L_half_twist")) g.L_half_twist = std::stod(*s);
    if (auto s = single(hb, "twist_D")) g.twist_D = std::stol(*s);
    if (hb.header.count("al"))
        for (const auto& v : hb.header.at("al")) {
            auto c = v.find(':');
            if (c == std::string::npos) throw std::runtime_error(source + ": al entries are 'p:sign'");
            g.atkin_lehner[std::stol(v.substr(0, c))] = std::stoi(v.substr(c + 1));
        }
    i64 nmax = 0;
    for (const auto& [n, v] : hb.body) {
        if (n < 1) throw std::runtime_error(source + ": index " + std::to_string(n) + " must be >= 1");
        nmax = std::max(nmax, n);
    }
    g.a.assign(nmax + 1, Rat(0));
    std::vector<bool> seen(nmax + 1, false);
    for (const auto& [n, v] : hb.body) {
        if (seen[n]) throw std::runtime_error(source + ": duplicate index " + std::to_string(n));
        seen[n] = true;
        g.a[n] = v;
    }
    for (i64 n = 1; n <= nmax; ++n)
        if (!seen[n]) throw std::runtime_error(source + ": missing coefficient a(" + std::to_string(n) + ")");
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(source + ": " + e.what());
    }
    return g;
}

PlusSpaceData parse_plus(const std::string& text, const std::string& source) {
    auto hb = parse_indexed(text, source);
    for (const auto& kv : hb.header)
        if (kv.first != "k" && kv.first != "label") throw std::runtime_error(source + ": unknown header key '" + kv.first + "'");
    PlusSpaceData p;
    auto k = single(hb, "k");
    if (!k) throw std::runtime_error(source + ": missing k");
    p.k = std::stoi(*k);
    if (auto s = single(hb, "label")) p.label = *s;
    i64 nmax = 0;
    for (const auto& [n, v] : hb.body) {
        if (n < 0) throw std::runtime_error(source + ": negative index");
        if (mod(n, 4) == 1 || mod(n, 4) == 2)
            throw std::runtime_error(source + ": index " + std::to_string(n) + " is not 0 or 3 mod 4");
        nmax = std::max(nmax, n);
    }
    p.c.assign(nmax + 1, Rat(0));
    std::vector<bool> seen(nmax + 1, false);
    for (const auto& [n, v] : hb.body) {
        if (seen[n]) throw std::runtime_error(source + ": duplicate index " + std::to_string(n));
        seen[n] = true;
        p.c[n] = v;
    }
    for (i64 n = 3; n <= nmax; ++n)
        if ((mod(n, 4) == 0 || mod(n, 4) == 3) && !seen[n])
            throw std::runtime_error(source + ": missing coefficient c(" + std::to_string(n) + ")");
    return p;
}

std::string to_text(const EllipticFormData& g) {
    std::ostringstream os;
    os.precision(17);
    os << "# weight=" << g.weight << "\n# level=" << g.level << "\n# label=" << g.label << "\n";
    for (const auto& [p, s] : g.atkin_lehner) os << "# al=" << p << ":" << s << "\n";
    if (g.petersson_norm) os << "# petersson_norm=" << *g.petersson_norm << "\n";
    if (g.L_one) os << "# L_one=" << *g.L_one << "\n";
    if (g.L_half_twist) os << "# L_half_twist=" << *g.L_half_twist << "\n";
    os << "# twist_D=" << g.twist_D << "\n";
    for (i64 n = 1; n <= g.bound(); ++n) os << n << " : " << g.a[n].get_str() << "\n";
    return os.str();
}

std::string to_text(const PlusSpaceData& c) {
    std::ostringstream os;
    os << "# k=" << c.k << "\n# label=" << c.label << "\n";
    for (i64 n = 0; n <= c.bound(); ++n)
        if (mod(n, 4) == 0 || mod(n, 4) == 3) os << n << " : " << c.c[n].get_str() << "\n";
    return os.str();
}

Ingested ingest(const std::string& path, Schema schema) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    switch (schema) {
        case Schema::Elliptic: return parse_elliptic(ss.str(), path);
        case Schema::Plus: return parse_plus(ss.str(), path);
        case Schema::Fourier: return from_text(ss.str(), path);
    }
    throw std::logic_error("ingest: bad schema");
}

}  // namespace siegel
