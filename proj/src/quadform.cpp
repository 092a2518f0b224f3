#include "siegel/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace siegel {

std::string QuadForm::str() const {
    std::ostringstream os;
    os << a << ' ' << b << ' ' << c;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadForm& f) { return os << '(' << f.a << ',' << f.b << ',' << f.c << ')'; }

QuadForm parse_form(const std::string& s) {
    std::istringstream is(s);
    QuadForm f;
    if (!(is >> f.a >> f.b >> f.c)) throw std::invalid_argument("parse_form: expected 'a b c', got '" + s + "'");
    std::string rest;
    if (is >> rest) throw std::invalid_argument("parse_form: trailing input in '" + s + "'");
    return f;
}

Unimodular Unimodular::operator*(const Unimodular& o) const {
    Unimodular r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
}

QuadForm transform(const Unimodular& U, const QuadForm& f) {
    const auto& m = U.m;
    QuadForm g;
    g.a = f.eval(m[0][0], m[0][1]);
    g.c = f.eval(m[1][0], m[1][1]);
    g.b = f.bilinear2(m[0][0], m[0][1], m[1][0], m[1][1]);
    return g;
}

bool is_reduced(const QuadForm& f) {
    if (!f.positive_definite()) return false;
    if (!(std::abs(f.b) <= f.a && f.a <= f.c)) return false;
    if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

static i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Reduction reduce(const QuadForm& f) {
    if (!f.positive_definite()) throw std::domain_error("reduce: form " + f.str() + " is not positive definite");
    QuadForm g = f;
    Unimodular U;
    const Unimodular S{{{{0, 1}, {-1, 0}}}};
    for (;;) {
        if (g.b <= -g.a || g.b > g.a) {
            i64 t = floor_div(g.a - g.b, 2 * g.a);
            Unimodular Tt{{{{1, 0}, {t, 1}}}};
            g = transform(Tt, g);
            U = Tt * U;
        }
        if (g.a > g.c) {
            g = transform(S, g);
            U = S * U;
            continue;
        }
        break;
    }
    if (g.a == g.c && g.b < 0) {
        g = transform(S, g);
        U = S * U;
    }
    return {g, U};
}

QuadForm gl2_reduce(const QuadForm& f) {
    QuadForm g = reduce(f).form;
    g.b = std::abs(g.b);
    return g;
}

std::vector<std::array<i64, 2>> representations(const QuadForm& f, i64 n, bool primitive_only) {
    std::vector<std::array<i64, 2>> out;
    if (!f.positive_definite()) throw std::domain_error("representations: form not positive definite");
    if (n <= 0) {
        if (n == 0 && !primitive_only) out.push_back({0, 0});
        return out;
    }
    i64 D = f.disc();
    // f(x,y) >= (-D/4a) y^2
    i64 ymax = isqrt((4 * f.a * n) / (-D)) + 1;
    for (i64 y = -ymax; y <= ymax; ++y) {
        i64 disc = D * y * y + 4 * f.a * n;
        if (disc < 0 || !is_square(disc)) continue;
        i64 s = isqrt(disc);
        std::set<i64> xs;
        for (i64 num : {-f.b * y + s, -f.b * y - s})
            if (num % (2 * f.a) == 0) xs.insert(num / (2 * f.a));
        for (i64 x : xs) {
            if (f.eval(x, y) != n) continue;
            if (primitive_only && gcd(x, y) != 1) continue;
            out.push_back({x, y});
        }
    }
    return out;
}

i64 automorphism_count(const QuadForm& Q, const QuadForm& T) {
    if (!Q.positive_definite() || !T.positive_definite())
        throw std::domain_error("automorphism_count: forms must be positive definite");
    if (Q.disc() != T.disc()) return 0;
    auto r1s = representations(Q, T.a, true);
    auto r2s = representations(Q, T.c, true);
    i64 count = 0;
    for (const auto& r1 : r1s)
        for (const auto& r2 : r2s) {
            i64 det = r1[0] * r2[1] - r1[1] * r2[0];
            if (det != 1 && det != -1) continue;
            if (Q.bilinear2(r1[0], r1[1], r2[0], r2[1]) == T.b) ++count;
        }
    return count;
}

QuadForm scale_LM(const QuadForm& Q, i64 L, i64 M) { return {L * M * M * Q.a, L * M * Q.b, L * Q.c}; }

i64 content(const QuadForm& T) {
    i64 g = gcd3(T.a, T.b, T.c);
    if (g == 0) throw std::domain_error("content: zero form");
    return g;
}

std::vector<QuadForm> reduced_forms(i64 D, bool primitive_only) {
    if (D >= 0 || (mod(D, 4) != 0 && mod(D, 4) != 1)) throw std::domain_error("reduced_forms: bad discriminant");
    std::vector<QuadForm> out;
    for (i64 a = 1; 3 * a * a <= -D; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod(b - D, 2) != 0) continue;
            i64 num = b * b - D;
            if (num % (4 * a)) continue;
            i64 c = num / (4 * a);
            QuadForm f{a, b, c};
            if (!is_reduced(f)) continue;
            if (primitive_only && gcd3(a, b, c) != 1) continue;
            out.push_back(f);
        }
    std::sort(out.begin(), out.end(), [](const QuadForm& x, const QuadForm& y) {
        return std::tie(x.a, x.c, x.b) < std::tie(y.a, y.c, y.b);
    });
    return out;
}

QuadForm principal_form(i64 D) {
    i64 b = mod(D, 2);
    return {1, b, (b * b - D) / 4};
}

QuadForm inverse_form(const QuadForm& f) { return reduce(QuadForm{f.a, -f.b, f.c}).form; }

QuadForm compose(const QuadForm& f, const QuadForm& g) {
    i64 D = f.disc();
    if (g.disc() != D) throw std::domain_error("compose: discriminants differ");
    i64 beta = (f.b + g.b) / 2;
    i64 x, y, s, t;
    i64 g1 = ext_gcd(f.a, g.a, x, y);
    i64 e = ext_gcd(g1, beta, s, t);
    i64 u = s * x, v = s * y, w = t;
    i64 A = f.a * g.a / (e * e);
    // B = (u a1 b2 + v a2 b1 + w (b1 b2 + D)/2) / e  mod 2A
    __int128 num = (__int128)u * f.a * g.b + (__int128)v * g.a * f.b + (__int128)w * ((f.b * g.b + D) / 2);
    if (num % e != 0) throw std::logic_error("compose: non-integral middle coefficient");
    i64 B = static_cast<i64>(num / e % (2 * A));
    if (B < 0) B += 2 * A;
    i64 Cn = B * B - D;
    if (Cn % (4 * A) != 0) throw std::logic_error("compose: inconsistent composition");
    return reduce(QuadForm{A, B, Cn / (4 * A)}).form;
}

std::complex<double> Character::operator()(std::size_t i) const {
    return std::polar(1.0, 2 * kPi * double(mod(expo.at(i), order)) / double(order));
}

bool Character::is_real() const {
    for (i64 e : expo)
        if (mod(2 * e, order) != 0) return false;
    return true;
}

std::size_t ClassGroupData::index_of(const QuadForm& f) const {
    QuadForm r = reduce(f).form;
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i] == r) return i;
    throw std::domain_error("class_group: form " + f.str() + " not in class group of -" + std::to_string(d));
}

std::string ClassGroupData::dump() const {
    std::ostringstream os;
    os << "# d=" << d << " h=" << h() << " w=" << w << "\n";
    for (std::size_t i = 0; i < h(); ++i) {
        os << i << " : " << elements[i].str() << " :";
        for (std::size_t j : table[i]) os << ' ' << j;
        os << "\n";
    }
    return os.str();
}

static std::vector<Character> build_characters(const std::vector<std::vector<std::size_t>>& table) {
    std::size_t h = table.size();
    std::vector<std::size_t> gens;
    std::set<std::size_t> H{0};
    for (std::size_t g = 0; g < h; ++g) {
        if (H.count(g)) continue;
        gens.push_back(g);
        std::deque<std::size_t> q(H.begin(), H.end());
        while (!q.empty()) {
            std::size_t x = q.front();
            q.pop_front();
            for (std::size_t gen : gens) {
                std::size_t y = table[x][gen];
                if (H.insert(y).second) q.push_back(y);
            }
        }
    }
    std::vector<Character> out;
    std::vector<i64> e(gens.size(), 0);
    for (;;) {
        std::vector<i64> val(h, -1);
        val[0] = 0;
        std::deque<std::size_t> q{0};
        bool ok = true;
        while (!q.empty() && ok) {
            std::size_t x = q.front();
            q.pop_front();
            for (std::size_t i = 0; i < gens.size() && ok; ++i) {
                std::size_t y = table[x][gens[i]];
                i64 v = mod(val[x] + e[i], static_cast<i64>(h));
                if (val[y] < 0) {
                    val[y] = v;
                    q.push_back(y);
                } else if (val[y] != v) {
                    ok = false;
                }
            }
        }
        if (ok) out.push_back(Character{val, static_cast<i64>(h)});
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == static_cast<i64>(h)) e[i++] = 0;
        if (i == e.size()) break;
    }
    // trivial character first
    std::stable_sort(out.begin(), out.end(), [](const Character& x, const Character& y) {
        return std::count(x.expo.begin(), x.expo.end(), 0) > std::count(y.expo.begin(), y.expo.end(), 0);
    });
    return out;
}

ClassGroupData class_group(i64 d) {
    if (!is_fundamental_discriminant(-d))
        throw std::domain_error("class_group: -" + std::to_string(d) + " is not a fundamental discriminant");
    ClassGroupData cg;
    cg.d = d;
    cg.elements = reduced_forms(-d, true);
    QuadForm one = principal_form(-d);
    auto it = std::find(cg.elements.begin(), cg.elements.end(), one);
    std::rotate(cg.elements.begin(), it, it + 1);
    std::size_t h = cg.elements.size();
    cg.table.assign(h, std::vector<std::size_t>(h));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) cg.table[i][j] = cg.index_of(compose(cg.elements[i], cg.elements[j]));
    cg.characters = build_characters(cg.table);
    cg.w = d == 3 ? 6 : (d == 4 ? 4 : 2);
    return cg;
}

std::vector<std::size_t> prime_ideal_classes(const ClassGroupData& cg, i64 p) {
    if (!is_prime(p)) throw std::domain_error("prime_ideal_classes: p not prime");
    std::vector<std::size_t> out;
    for (i64 b = 0; b < 2 * p; ++b) {
        i64 num = b * b + cg.d;
        if (num % (4 * p)) continue;
        out.push_back(cg.index_of(QuadForm{p, b, num / (4 * p)}));
    }
    return out;
}

std::complex<double> lambda_p(const ClassGroupData& cg, std::size_t chi, i64 p) {
    std::complex<double> s = 0;
    for (std::size_t c : prime_ideal_classes(cg, p)) s += cg.characters.at(chi)(c);
    return s;
}

}  // namespace siegel
