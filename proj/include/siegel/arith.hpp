#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace siegel {

using i64 = long;
using Rat = mpq_class;
using Big = mpz_class;
using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

i64 gcd(i64 a, i64 b);
i64 gcd3(i64 a, i64 b, i64 c);
// returns g = gcd(a,b) and x, y with a*x + b*y = g
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
i64 mod(i64 a, i64 m);
i64 isqrt(i64 n);
bool is_square(i64 n);

bool is_prime(i64 n);
std::vector<i64> primes_upto(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);
std::vector<i64> divisors(i64 n);
int mobius(i64 n);
bool squarefree(i64 n);

// Kronecker symbol (D/n) for n >= 1
int kronecker(i64 D, i64 n);

// -D = D0 * f^2 with D0 a fundamental discriminant (D < 0, D = 0,1 mod 4)
void fundamental_part(i64 D, i64& D0, i64& f);
bool is_fundamental_discriminant(i64 D);

// num/den in lowest terms
Rat frac(i64 num, i64 den);
Big ipow(const Big& b, unsigned long e);
Rat rpow(const Rat& b, long e);
Big sigma_k(i64 n, unsigned k);

// B_n with B_1 = -1/2
const Rat& bernoulli(unsigned n);

// Coefficients of the n-th cyclotomic polynomial, low degree first.
const std::vector<Big>& cyclotomic_poly(i64 n);

// Exact accumulator for sums of the form sum_j c_j * zeta_n^j.
class CycloSum {
public:
    explicit CycloSum(i64 n);
    void add(i64 j, const Rat& c);
    i64 order() const { return n_; }
    // Reduced representative modulo the n-th cyclotomic polynomial.
    std::vector<Rat> reduced() const;
    bool is_rational() const;
    // Throws std::domain_error if the value is not rational.
    Rat to_rational() const;
    cplx to_complex() const;

private:
    i64 n_;
    std::vector<Rat> c_;
};

// e(x) = exp(2 pi i x) for a rational x, reduced mod 1 before the call
cplx expi_frac(const Rat& x);

}  // namespace siegel
