#pragma once

#include <string>
#include <vector>

#include "siegel/equidist.hpp"
#include "siegel/form_factory.hpp"
#include "siegel/fourier.hpp"
#include "siegel/hecke.hpp"

namespace siegel {

// a(T) moved to the key pT
FourierExpansion T1_map(const FourierExpansion& f, i64 p);
// a(pT) kept at the key pT, zero elsewhere
FourierExpansion T3_map(const FourierExpansion& f, i64 p);

struct SKOldformBasis {
    std::vector<i64> primes;
    std::vector<FourierExpansion> members;  // members[0] is the lift itself
    std::vector<std::string> words;         // "", "T1(2)", "T3(3)T1(2)", ...
    i64 det_bound = 0;
    std::size_t rank = 0;  // exact rank of the truncated coefficient matrix
    bool full_rank() const { return rank == members.size(); }
};

// exact rank over Q of the coefficient vectors on keys of det <= bound
std::size_t coefficient_rank(const std::vector<FourierExpansion>& forms, i64 det_bound);

SKOldformBasis oldform_basis(const FourierExpansion& lift, const std::vector<i64>& primes);
// builds the lift from the plus-space form; on a rank deficit the bound is doubled once
SKOldformBasis oldform_basis(const PlusSpaceData& plus, const std::vector<i64>& primes, i64 det_bound);

// a_g(p) + p^{k-1} + p^{k-2} for the T(p) eigenvalue of SK(g), g of weight 2k - 2
Rat predicted_eigenvalue(const EllipticFormData& g, int k, i64 p);

struct RecurrenceResidual {
    QuadForm T;
    Rat residual;  // lambda a(T) - a(pT) - (p^{k-1} + p^{2k-3}) a(T)
};
// the three-term recurrence lambda a(T) = a(pT) + p^{k-1} a(T) + p^{2k-3} a(T) on every key with pT stored
std::vector<RecurrenceResidual> three_term_recurrence(const FourierExpansion& f, i64 p, const Rat& lambda);

bool detect_ramanujan_violation(const SatakeParams& s, i64 p, double tol = 1e-10);
// Satake parameters of SK(g) at p: the unitary elliptic pair a and b = sqrt(p)
SatakeParams sk_satake(const EllipticFormData& g, int k, i64 p);

// M^k (k - 1) prod (p^4 + 1) / (2^{m+3} 3 [Sp4(Z) : Gamma0(M)] [Gamma0(M) : Gamma0(4M)])
Rat brown_constant(int k, i64 M);
// <SK(g), SK(g)> from |a(|D|; Sh g)|^2 L(1, pi_g) <g, g> / (pi |D|^{k-3/2} L(1/2, pi_g x chi_D))
double brown_norm(const EllipticFormData& g, const PlusSpaceData& shimura, int k, i64 M, i64 D);
// omega of SK(g) for d = 4 in closed form
double sk_omega_closed_form(const EllipticFormData& g, int k, i64 M);

double sk_weight_budget(i64 M, int k, double delta = 0.1);

struct SKAuditEntry {
    std::string label;
    double omega = 0;
    bool ramanujan_violation = false;
};

struct SKAudit {
    int k = 10;
    i64 N = 1;
    std::vector<SKAuditEntry> flagged;
    double omega_mass = 0;
    double budget = 0;
};

std::string to_json(const SKAudit& a);

}  // namespace siegel
