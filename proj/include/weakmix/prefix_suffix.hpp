// prefix_suffix.hpp — decomposition of factors into substitution images,
// depth bounds, and the decomposition-based twisted-sum evaluation.
//
// Every factor splits as
//   w = u_0 beta(u_1) ... beta^m(u_m) beta^m(v_m) ... beta(v_1) v_0
// where the u_i come out as proper suffixes and the v_i as proper prefixes of
// image words beta(b) (or short inner pieces at the deepest level).  The
// binding contract is the concatenation identity; the localization picks the
// lowest expansion level and the leftmost occurrence.

#pragma once

#include "weakmix/twisted.hpp"

namespace weakmix {

struct Decomposition {
    int depth = 0;                 // m
    std::vector<Word> u_parts;     // u_0 .. u_m
    std::vector<Word> v_parts;     // v_0 .. v_m (stored low level first)
    bool strict = true;            // every part is a proper prefix/suffix of an image

    Word reconstruct(const SubstitutionSystem& s) const;
};

// Throws not_a_factor when w does not occur in the subshift.
Decomposition decompose(const SubstitutionSystem& s, const Word& w);

struct DepthBounds {
    long long min_piece = 0;   // min_b |beta^m(b)|
    long long max_next = 0;    // max_b |beta^(m+1)(b)|
    bool ok = false;           // min_piece <= N <= 2 * max_next
};

DepthBounds depth_bounds_check(const SubstitutionSystem& s, long long N, int m);

struct AssembledPhi {
    cplx value;   // equals direct phi_f to rounding error
    double bound; // fitted-constant envelope from the product estimates
};

// phi_f over the decomposition parts, glued with the concatenation cocycle at
// every seam; c_prime and fit_constant parameterize the reported envelope
//   fit * n * ||f||_L * (N^(1 - c' ||w||^2) + 6 log^2 N + 2 log N + 1).
AssembledPhi phi_via_decomposition(const Language& lang, const Word& x_factor, double omega,
                                   const CylFunction& f, double c_prime = 0.05,
                                   double fit_constant = 1.0);

} // namespace weakmix
