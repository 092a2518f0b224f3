#include "siegel/fourier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "siegel/equidist.hpp"

namespace siegel {

Rat FourierExpansion::coefficient(const QuadForm& T) const {
    if (!T.positive_definite()) throw std::domain_error("coefficient: key " + T.str() + " is not positive definite");
    if (!within_bound(T))
        throw std::out_of_range("coefficient: det of " + T.str() + " exceeds detBound " + std::to_string(det_bound) +
                                " of '" + label + "'");
    auto it = coeffs.find(gl2_reduce(T));
    return it == coeffs.end() ? Rat(0) : it->second;
}

void FourierExpansion::set(const QuadForm& T, const Rat& v) {
    if (!within_bound(T)) throw std::out_of_range("set: key " + T.str() + " beyond detBound");
    QuadForm key = gl2_reduce(T);
    Rat c = v;
    c.canonicalize();
    if (c == 0)
        coeffs.erase(key);
    else
        coeffs[key] = c;
}

bool FourierExpansion::is_zero() const { return coeffs.empty(); }

bool operator==(const FourierExpansion& f, const FourierExpansion& g) {
    return f.k == g.k && f.N == g.N && f.det_bound == g.det_bound && f.coeffs == g.coeffs;
}

bool key_less(const QuadForm& x, const QuadForm& y) {
    i64 dx = x.det4(), dy = y.det4();
    if (dx != dy) return dx < dy;
    return x < y;
}

std::vector<QuadForm> keys_upto(i64 det_bound) {
    std::vector<QuadForm> out;
    i64 D4 = 4 * det_bound;
    // reduced: 0 <= b <= a <= c, so 3a^2 <= 4ac - b^2
    for (i64 a = 1; 3 * a * a <= D4; ++a)
        for (i64 b = 0; b <= a; ++b)
            for (i64 c = a; 4 * a * c - b * b <= D4; ++c) out.push_back({a, b, c});
    std::sort(out.begin(), out.end(), key_less);
    return out;
}

FourierExpansion linear_combine(const std::vector<std::pair<Rat, const FourierExpansion*>>& terms,
                                const std::string& label) {
    if (terms.empty()) throw std::invalid_argument("linear_combine: no terms");
    const FourierExpansion& f0 = *terms.front().second;
    FourierExpansion out(f0.k, f0.N, f0.det_bound, label);
    for (const auto& [s, f] : terms) {
        if (f->k != f0.k || f->N != f0.N) throw std::invalid_argument("linear_combine: mismatched weight or level");
        out.det_bound = std::min(out.det_bound, f->det_bound);
    }
    for (const auto& [s, f] : terms)
        for (const auto& [T, v] : f->coeffs) {
            if (!out.within_bound(T)) continue;
            out.coeffs[T] += s * v;
        }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
    return out;
}

Rat parse_rational(const std::string& s0) {
    std::string s = s0;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    if (s.empty()) throw std::invalid_argument("empty number");
    auto dot = s.find('.');
    Rat r;
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg || (!ip.empty() && ip[0] == '+')) ip.erase(ip.begin());
        if (ip.empty()) ip = "0";
        for (char ch : ip + fp)
            if (!std::isdigit(static_cast<unsigned char>(ch))) throw std::invalid_argument("bad decimal '" + s + "'");
        Big num(ip + fp), den = ipow(Big(10), fp.size());
        r = Rat(num, den);
        r.canonicalize();
        if (neg) r = -r;
        return r;
    }
    for (char ch : s)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
            throw std::invalid_argument("bad rational '" + s + "'");
    std::string t = s[0] == '+' ? s.substr(1) : s;
    if (r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string to_text(const FourierExpansion& f) {
    std::ostringstream os;
    os << "# k=" << f.k << "\n# N=" << f.N << "\n# detBound=" << f.det_bound << "\n# label=" << f.label << "\n";
    std::vector<QuadForm> keys;
    for (const auto& kv : f.coeffs) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end(), key_less);
    for (const auto& T : keys) os << T.str() << " : " << f.coeffs.at(T).get_str() << "\n";
    return os.str();
}

FourierExpansion from_text(const std::string& text, const std::string& source) {
    std::istringstream is(text);
    std::string line;
    FourierExpansion f;
    bool have_k = false, have_bound = false;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(source + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1), val = line.substr(eq + 1);
            while (!key.empty() && key.front() == ' ') key.erase(key.begin());
            try {
                if (key == "k") {
                    f.k = std::stoi(val);
                    have_k = true;
                } else if (key == "N") {
                    f.N = std::stol(val);
                } else if (key == "detBound") {
                    f.det_bound = std::stol(val);
                    have_bound = true;
                } else if (key == "label") {
                    f.label = val;
                } else {
                    fail("unknown header key '" + key + "'");
                }
            } catch (const std::logic_error&) {
                fail("bad header value '" + val + "'");
            }
            continue;
        }
        if (!have_k || !have_bound) fail("coefficient before k/detBound header");
        auto colon = line.find(':');
        if (colon == std::string::npos) fail("expected 'a b c : value'");
        QuadForm T;
        try {
            T = parse_form(line.substr(0, colon));
        } catch (const std::exception& e) {
            fail(e.what());
        }
        if (!T.positive_definite()) fail("key " + T.str() + " is not positive definite");
        if (!(is_reduced(T) && T.b >= 0)) fail("key " + T.str() + " is not reduced");
        if (!f.within_bound(T)) fail("key " + T.str() + " exceeds detBound");
        Rat v;
        try {
            v = parse_rational(line.substr(colon + 1));
        } catch (const std::exception& e) {
            fail(e.what());
        }
        if (f.coeffs.count(T)) fail("duplicate key " + T.str());
        if (v != 0) f.coeffs[T] = v;
    }
    if (!have_k || !have_bound) fail("missing k or detBound header");
    return f;
}

void save(const FourierExpansion& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << to_text(f);
}

FourierExpansion load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_text(ss.str(), path);
}

double log_gamma_block(int k) {
    return 0.5 * std::log(kPi) + (3.0 - 2.0 * k) * std::log(4 * kPi) + std::lgamma(k - 1.5) + std::lgamma(k - 2.0);
}

PeterssonConstant petersson_pairing_constant(int k, i64 N, const QuadForm& Q) {
    if (k < 6 || k % 2) throw std::domain_error("petersson_pairing_constant: k must be even and >= 6");
    if (!Q.positive_definite()) throw std::domain_error("petersson_pairing_constant: Q not positive definite");
    PeterssonConstant pc;
    pc.k = k;
    pc.N = N;
    pc.q_det = Q.det();
    double ld = std::log(Q.det().get_d());
    pc.value = 2.0 / volume(N) * std::exp(log_gamma_block(k) + (1.5 - k) * ld);
    return pc;
}

}  // namespace siegel
