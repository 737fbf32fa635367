// twisted.hpp — twisted sums over cylinders, the concatenation cocycle,
// twisted substitution matrices M_m(omega), the Pi_m column recursion with a
// brute-force oracle, and the quantitative product bounds.
//
// Conventions fixed project-wide:
//   phi_[k,n](v, w) = sum_{j=0}^{|v|-n} 1_[k,n](T^j v) e^{-2 pi i w j}
//   phi(vw) = phi(v) + e^{-2 pi i w |v|} (phi(w) + H(v, w))
// where the seam sum H collects the windows straddling the concatenation
// point with phase e^{+2 pi i w t} for the window using the last t symbols of
// v.  The sign inside H is forced by requiring exact equality with direct
// evaluation of phi on vw.

#pragma once

#include <complex>
#include <vector>

#include "weakmix/substitution.hpp"

namespace weakmix {

using cplx = std::complex<double>;

// e^{-2 pi i omega j}, long-double phase reduction
cplx unit_phase(double omega, long long j);

// max over coordinates of the distance to the nearest integer
double int_dist(const std::vector<double>& v);
double int_dist(double x);

// Language context: factor tables and cylinder measures for ranks 1..n_max,
// built once and immutable afterwards.  Measures are exact (n-block
// presentation) when theta is an exact integer, empirical otherwise.
struct Language {
    SubstitutionSystem subst;
    std::vector<FactorTable> tables;        // tables[n-1] has rank n
    std::vector<std::vector<double>> freqs; // freqs[n-1][k] = mu([k,n])
    Language(const SubstitutionSystem& s, int n_max);
    const FactorTable& table(int n) const;
    const std::vector<double>& freq(int n) const;
    int rank_max() const { return static_cast<int>(tables.size()); }
};

// phi_[k,n](v, omega); the cylinder is given by its word.
cplx phi_cyl(const Word& v, const Word& cyl, double omega);

// Seam sum between v and w for rank n: windows using the last t in [1, n-1]
// symbols of v.  Requires |v|, |w| >= n.
cplx boundary_H(const Word& v, const Word& w, double omega, int n, const Word& cyl);

// General seam sum valid for any lengths: v_tail is the last min(|v|, n-1)
// symbols of v, w_head the first min(|w|, n-1) symbols of w.
cplx seam_sum(const std::string& v_tail, const std::string& w_head, long long v_len,
              long long w_len, double omega, int n, const Word& cyl);

// phi(vw) assembled from phi(v), phi(w) and the seam; equals phi_cyl(vw)
// to rounding error by construction.
cplx phi_concat(const Word& v, const Word& w, double omega, int n, const Word& cyl,
                cplx phi_v, cplx phi_w);

// Cylindrical function of rank n on the subshift.
struct CylFunction {
    int n = 0;
    std::vector<double> coeffs;  // indexed by cylinder k
    double sup_norm = 0;         // max |r_k|
    double weak_lip = 0;         // sup over coarser cylinders of osc / mu
    double norm_L = 0;           // weak_lip + sup_norm
    double norm2_sq = 0;         // sum r_k^2 mu([k,n])
    double mean = 0;             // sum r_k mu([k,n])
    bool zero_mean = false;

    static CylFunction make(const Language& lang, int n, std::vector<double> coeffs);
    static CylFunction indicator(const Language& lang, int n, int k);
};

// phi_f(v, omega) = sum_k r_k phi_[k,n](v, omega)
cplx phi_f(const Word& v, double omega, const CylFunction& f, const Language& lang);

struct TwistedMatrix {
    int m = 0; // uses expansion lengths |beta^(m-1)(.)|
    double omega = 0;
    std::vector<std::vector<cplx>> entries; // p x p, entry (b, c)
};

// M with entry (b,c) = sum over positions j of rules[b] with letter c of
// e^{-2 pi i omega (|beta^(m-1)(u_1)| + ... + |beta^(m-1)(u_{j-1})|)}.
// At omega = 0 this is S^t exactly; Pi_m = M(m) Pi_{m-1} + E_{m-1}.
TwistedMatrix build_twisted_matrix(const SubstitutionSystem& s, int m, double omega);

struct PiState {
    int m = 0, n = 0;
    double omega = 0;
    std::vector<std::vector<cplx>> cols; // [letter][cylinder]
};

// Smallest m with min_b |beta^m(b)| >= n.
int base_level(const SubstitutionSystem& s, int n);

// First (last) len symbols of beta^m(letter), expanded lazily.
std::string expand_prefix(const SubstitutionSystem& s, char letter, int m, int len);
std::string expand_suffix(const SubstitutionSystem& s, char letter, int m, int len);

// Columns by direct expansion of beta^m(b).
PiState pi_direct(const Language& lang, int m, int n, double omega);

// Columns by the matrix recursion from the base level, with seam corrections.
PiState pi_recursive(const Language& lang, int m, int n, double omega);

struct XhatBound {
    std::vector<double> xhat;
    double dist = 0;
    bool ok = false;
};

// xhat_k = omega * (|beta^k(0)|, ..., |beta^k(p-1)|); ok iff
// ||xhat_k||_Z >= ||omega||_Z / 3.
XhatBound xhat_lattice_bound(const SubstitutionSystem& s, int k, double omega);

struct VeechCheck {
    std::vector<double> lhs;     // | prod M_j | * ones, entrywise
    std::vector<double> rhs;     // (1 - c_fit ||w||^2)^(m-n) (S^t)^(m-n) ones
    double c_fit = 0;            // largest admissible contraction constant
    bool lattice_span = false;   // population vectors of the supplied words
    // per product step k = n+1..m: the word maximizing ||omega |beta^k(v)| ||_Z
    std::vector<int> schedule;
    std::vector<double> step_dist;
};

// Product over levels j = n+1 .. m of the matrices whose level-j factor is
// built from expansion lengths |beta^j(.)|.
VeechCheck veech_product_check(const SubstitutionSystem& s, int n, int m, double omega,
                               const std::vector<Word>& return_words);

struct GrowthFit {
    std::vector<long long> N_list;
    std::vector<double> max_entry;   // max |Pi_m(N)(omega)| entry per N
    std::vector<int> m_used, n_used;
    double c_dd = 0;                 // fitted exponent defect c''
    double C_S = 0;                  // fitted prefactor
    std::vector<double> C_S_per_N;   // implied prefactor per N
    bool stable = false;             // per-N prefactors within +-50% of median
};

// |Pi_m(omega)| <= C_S N^(1 - c'' ||w||^2) + C_S m n with m ~ log_3 N,
// n ~ log_3(N)/2; fits (c'', C_S).
GrowthFit corollary_growth_check(const Language& lang, double omega,
                                 const std::vector<long long>& N_list);

} // namespace weakmix
