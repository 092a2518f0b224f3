#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

struct FourierExpansion {
    int k = 0;
    i64 N = 1;
    i64 det_bound = 0;  // keys satisfy det(T) = (4ac - b^2)/4 <= det_bound
    std::map<QuadForm, Rat> coeffs;  // GL2-reduced keys (b >= 0)
    std::string label;

    FourierExpansion() = default;
    FourierExpansion(int k_, i64 N_, i64 bound, std::string lbl = {})
        : k(k_), N(N_), det_bound(bound), label(std::move(lbl)) {}

    bool within_bound(const QuadForm& T) const { return T.det4() <= 4 * det_bound; }
    // coefficient of the GL2(Z) class of T; throws std::out_of_range beyond det_bound
    Rat coefficient(const QuadForm& T) const;
    void set(const QuadForm& T, const Rat& v);
    bool is_zero() const;
};

bool operator==(const FourierExpansion& f, const FourierExpansion& g);

// GL2-reduced positive definite forms with det <= bound, ordered by (det, a, b, c)
std::vector<QuadForm> keys_upto(i64 det_bound);
bool key_less(const QuadForm& x, const QuadForm& y);

FourierExpansion linear_combine(const std::vector<std::pair<Rat, const FourierExpansion*>>& terms,
                                const std::string& label = {});

void save(const FourierExpansion& f, const std::string& path);
FourierExpansion load(const std::string& path);
std::string to_text(const FourierExpansion& f);
FourierExpansion from_text(const std::string& text, const std::string& source = "<string>");
Rat parse_rational(const std::string& s);

struct PeterssonConstant {
    int k = 0;
    Rat q_det;
    i64 N = 1;
    double value = 0;
};

// 2/vol(Gamma_0(N)\H_2) * sqrt(pi) (4 pi)^{3-2k} Gamma(k-3/2) Gamma(k-2) det(Q)^{-k+3/2}
PeterssonConstant petersson_pairing_constant(int k, i64 N, const QuadForm& Q);
// log of sqrt(pi) (4 pi)^{3-2k} Gamma(k-3/2) Gamma(k-2)
double log_gamma_block(int k);

}  // namespace siegel
