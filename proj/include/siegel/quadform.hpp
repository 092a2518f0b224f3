#pragma once

#include <array>
#include <compare>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "siegel/arith.hpp"

namespace siegel {

// [[a, b/2], [b/2, c]]
struct QuadForm {
    i64 a = 0, b = 0, c = 0;

    i64 disc() const { return b * b - 4 * a * c; }
    // 4 det = 4ac - b^2
    i64 det4() const { return 4 * a * c - b * b; }
    Rat det() const { return frac(det4(), 4); }
    bool positive_definite() const { return a > 0 && disc() < 0; }
    i64 eval(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
    // x^t T y, doubled so that it stays integral
    i64 bilinear2(i64 x1, i64 x2, i64 y1, i64 y2) const {
        return 2 * a * x1 * y1 + b * (x1 * y2 + x2 * y1) + 2 * c * x2 * y2;
    }

    auto operator<=>(const QuadForm&) const = default;
    std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const QuadForm& f);
QuadForm parse_form(const std::string& s);

// 2x2 integer matrix
struct Unimodular {
    std::array<std::array<i64, 2>, 2> m{{{1, 0}, {0, 1}}};
    i64 det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    Unimodular operator*(const Unimodular& o) const;
    bool operator==(const Unimodular&) const = default;
    static Unimodular identity() { return {}; }
};

// U F U^t
QuadForm transform(const Unimodular& U, const QuadForm& f);

struct Reduction {
    QuadForm form;
    Unimodular U;  // form == transform(U, input), det U = 1
};

bool is_reduced(const QuadForm& f);
Reduction reduce(const QuadForm& f);
// Representative of the GL2(Z) class: reduced with b >= 0
QuadForm gl2_reduce(const QuadForm& f);

// #{U in GL2(Z) : U Q U^t = T}
i64 automorphism_count(const QuadForm& Q, const QuadForm& T);
// proper representations (x,y) with gcd 1 and f(x,y) = n; pairs with both signs
std::vector<std::array<i64, 2>> representations(const QuadForm& f, i64 n, bool primitive_only);

QuadForm scale_LM(const QuadForm& Q, i64 L, i64 M);
i64 content(const QuadForm& T);

// reduced forms (SL2 classes) of discriminant D < 0
std::vector<QuadForm> reduced_forms(i64 D, bool primitive_only);
// Dirichlet composition of primitive forms of equal discriminant, reduced
QuadForm compose(const QuadForm& f, const QuadForm& g);
QuadForm principal_form(i64 D);
QuadForm inverse_form(const QuadForm& f);

struct Character {
    // value on element i is exp(2 pi i expo[i] / order)
    std::vector<i64> expo;
    i64 order = 1;
    std::complex<double> operator()(std::size_t i) const;
    bool is_real() const;
};

struct ClassGroupData {
    i64 d = 0;
    std::vector<QuadForm> elements;
    std::vector<std::vector<std::size_t>> table;
    std::vector<Character> characters;
    int w = 2;

    std::size_t h() const { return elements.size(); }
    std::size_t index_of(const QuadForm& f) const;
    std::size_t identity() const { return 0; }
    int dLambda(std::size_t chi) const { return characters.at(chi).is_real() ? 1 : 2; }
    // (-d/p)
    int chi(i64 p) const { return kronecker(-d, p); }
    std::string dump() const;
};

ClassGroupData class_group(i64 d);
std::complex<double> lambda_p(const ClassGroupData& cg, std::size_t chi, i64 p);
// class indices of the prime ideals above p (0, 1 or 2 entries)
std::vector<std::size_t> prime_ideal_classes(const ClassGroupData& cg, i64 p);

}  // namespace siegel
