#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "siegel/fourier.hpp"

namespace siegel {

struct EllipticFormData {
    int weight = 0;
    i64 level = 1;
    std::vector<Rat> a;  // a[n] for 0 <= n <= bound, a[0] = 0
    std::map<i64, int> atkin_lehner;
    std::optional<double> petersson_norm;
    std::optional<double> L_one;        // L(1, pi_g)
    std::optional<double> L_half_twist;  // L(1/2, pi_g x chi_D) for twist_D
    i64 twist_D = -4;
    std::string label;

    i64 bound() const { return static_cast<i64>(a.size()) - 1; }
    void validate() const;
};

// weight k - 1/2 plus space form: c(n) for n = 0,3 mod 4
struct PlusSpaceData {
    int k = 0;  // Siegel weight of the lift
    std::vector<Rat> c;
    std::string label;

    i64 bound() const { return static_cast<i64>(c.size()) - 1; }
    const Rat& at(i64 n) const;
    void validate() const;
};

// Cohen's H(r, N); H(r, 0) = zeta(1 - 2r)
Rat cohen_H(int r, i64 N);
Rat zeta_neg(int n);  // zeta(-n) for odd n >= 1; zeta(1-k) = zeta_neg(k-1)

std::vector<Rat> q_eisenstein(int k, i64 nmax);
std::vector<Rat> q_mul(const std::vector<Rat>& x, const std::vector<Rat>& y, i64 nmax);
// normalized level-1 eigenform of weight w for the one-dimensional spaces w in {12,16,18,20,22,26}
EllipticFormData elliptic_eigenform(int w, i64 nmax);

// index-1 Jacobi Eisenstein series coefficients e_{k,1}(D), D = 4n - r^2
std::vector<Rat> jacobi_eisenstein(int k, i64 Dmax);
// named plus-space forms: phi10, phi12 (Siegel weights 10, 12) and phi10E6, phi12E4 (weight 16)
PlusSpaceData plus_space_form(const std::string& name, i64 Dmax);

// a(T) = sum_{e | cont T} e^{k-1} c(4 det T / e^2)
Rat sk_coefficient(const PlusSpaceData& plus, const QuadForm& T);
FourierExpansion sk_lift(const PlusSpaceData& plus, i64 det_bound, const std::string& label = {});

// Siegel Eisenstein coefficient for any positive semidefinite T (zero form gives 1)
Rat eisenstein_coefficient(int k, const QuadForm& T);
FourierExpansion eisenstein_series(int k, i64 det_bound);

// chi10, chi12 normalized so a((1,1,1)) = 1, built through the Maass lift
std::pair<FourierExpansion, FourierExpansion> igusa_cusp_forms(i64 det_bound);
// the same forms from Eisenstein series products (slow; small bounds only)
std::pair<FourierExpansion, FourierExpansion> igusa_from_eisenstein(i64 det_bound);

using SeriesFn = std::function<Rat(const QuadForm&)>;
// coefficient of a product of two degree-2 series at T (T positive semidefinite)
Rat product_coefficient(const SeriesFn& f, const SeriesFn& g, const QuadForm& T);
// canonical key for a positive semidefinite form: GL2-reduced, (e,0,0) for rank one, (0,0,0)
QuadForm semidefinite_key(const QuadForm& T);

enum class Schema { Elliptic, Plus, Fourier };
using Ingested = std::variant<EllipticFormData, PlusSpaceData, FourierExpansion>;
Ingested ingest(const std::string& path, Schema schema);
EllipticFormData parse_elliptic(const std::string& text, const std::string& source = "<string>");
PlusSpaceData parse_plus(const std::string& text, const std::string& source = "<string>");
std::string to_text(const EllipticFormData& g);
std::string to_text(const PlusSpaceData& c);

}  // namespace siegel
