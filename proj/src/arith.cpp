#include "siegel/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace siegel {

i64 gcd(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 gcd3(i64 a, i64 b, i64 c) { return gcd(gcd(a, b), c); }

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 isqrt(i64 n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(i64 n) {
    if (n < 0) return false;
    i64 r = isqrt(n);
    return r * r == n;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::vector<i64> primes_upto(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<char> sieve(n + 1, 1);
    sieve[0] = sieve[1] = 0;
    for (i64 i = 2; i * i <= n; ++i)
        if (sieve[i])
            for (i64 j = i * i; j <= n; j += i) sieve[j] = 0;
    for (i64 i = 2; i <= n; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n < 0) n = -n;
    for (i64 p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> out{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t sz = out.size();
        i64 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int mobius(i64 n) {
    int r = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        r = -r;
    }
    return r;
}

bool squarefree(i64 n) {
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

static int jacobi(i64 a, i64 n) {
    // n odd positive
    a = mod(a, n);
    int r = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 m8 = n % 8;
            if (m8 == 3 || m8 == 5) r = -r;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) r = -r;
        a %= n;
    }
    return n == 1 ? r : 0;
}

int kronecker(i64 D, i64 n) {
    if (n <= 0) throw std::domain_error("kronecker: n must be positive");
    int r = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        i64 m8 = mod(D, 8);
        if (m8 == 3 || m8 == 5) r = -r;
    }
    if (n == 1) return r;
    return r * jacobi(D, n);
}

void fundamental_part(i64 D, i64& D0, i64& f) {
    if (D >= 0 || (mod(D, 4) != 0 && mod(D, 4) != 1))
        throw std::domain_error("fundamental_part: need negative discriminant");
    D0 = D;
    f = 1;
    for (auto [p, e] : factorize(-D)) {
        for (int i = 0; i < e / 2; ++i) {
            i64 cand = D0 / (p * p);
            if (mod(cand, 4) == 0 || mod(cand, 4) == 1) {
                D0 = cand;
                f *= p;
            }
        }
    }
    // a remaining factor 4 with D0/4 = 2,3 mod 4 is not removable; the loop above
    // already skipped it because the quotient is not a discriminant
}

bool is_fundamental_discriminant(i64 D) {
    if (D >= 0) return false;
    i64 m = mod(D, 4);
    if (m == 1) return squarefree(-D);
    if (m == 0) {
        i64 q = -D / 4;
        i64 r = mod(-q, 4);
        return (r == 2 || r == 3) && squarefree(q);
    }
    return false;
}

Rat frac(i64 num, i64 den) {
    if (den == 0) throw std::domain_error("frac: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Big ipow(const Big& b, unsigned long e) {
    Big r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Rat rpow(const Rat& b, long e) {
    if (e >= 0) {
        Big n = ipow(b.get_num(), e), d = ipow(b.get_den(), e);
        Rat r(n, d);
        r.canonicalize();
        return r;
    }
    if (b == 0) throw std::domain_error("rpow: zero to negative power");
    Rat inv = 1 / b;
    return rpow(inv, -e);
}

Big sigma_k(i64 n, unsigned k) {
    Big s = 0;
    for (i64 d : divisors(n)) s += ipow(Big(static_cast<long>(d)), k);
    return s;
}

const Rat& bernoulli(unsigned n) {
    static std::mutex mu;
    static std::vector<Rat> cache{Rat(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (cache.size() <= n) {
        unsigned m = cache.size();
        Rat s = 0;
        Big binom = 1;  // C(m+1, j)
        for (unsigned j = 0; j < m; ++j) {
            s += Rat(binom) * cache[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        cache.push_back(-s / (m + 1));
    }
    return cache[n];
}

const std::vector<Big>& cyclotomic_poly(i64 n) {
    static std::mutex mu;
    static std::map<i64, std::vector<Big>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    // x^n - 1 divided by Phi_d for proper divisors d
    std::vector<Big> num(n + 1, Big(0));
    num[0] = -1;
    num[n] = 1;
    for (i64 d : divisors(n)) {
        if (d == n) continue;
        const std::vector<Big>& den = cyclotomic_poly(d);
        std::size_t dn = den.size() - 1;
        std::vector<Big> q(num.size() - dn, Big(0));
        for (long i = long(num.size()) - 1; i >= long(dn); --i) {
            Big c = num[i];
            q[i - dn] = c;
            if (c != 0)
                for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
        }
        num = q;
    }
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, num).first->second;
}

CycloSum::CycloSum(i64 n) : n_(n), c_(n, Rat(0)) {
    if (n < 1) throw std::domain_error("CycloSum: order must be positive");
}

void CycloSum::add(i64 j, const Rat& c) { c_[mod(j, n_)] += c; }

std::vector<Rat> CycloSum::reduced() const {
    const std::vector<Big>& phi = cyclotomic_poly(n_);
    std::size_t deg = phi.size() - 1;
    std::vector<Rat> r = c_;
    for (std::size_t i = r.size(); i-- > deg;) {
        if (r[i] == 0) continue;
        Rat c = r[i];
        for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * Rat(phi[j]);
    }
    r.resize(deg);
    return r;
}

bool CycloSum::is_rational() const {
    auto r = reduced();
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] != 0) return false;
    return true;
}

Rat CycloSum::to_rational() const {
    auto r = reduced();
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] != 0) throw std::domain_error("CycloSum: value is not rational");
    return r.empty() ? Rat(0) : r[0];
}

cplx CycloSum::to_complex() const {
    cplx s = 0;
    for (i64 j = 0; j < n_; ++j)
        if (c_[j] != 0) s += c_[j].get_d() * std::polar(1.0, 2 * kPi * double(j) / double(n_));
    return s;
}

cplx expi_frac(const Rat& x) {
    Big q = x.get_num() / x.get_den();
    Rat f = x - Rat(q);
    if (f < 0) f += 1;
    return std::polar(1.0, 2 * kPi * f.get_d());
}

}  // namespace siegel
