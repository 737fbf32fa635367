// substitution.hpp — primitive-substitution machinery: words, iteration,
// substitution matrix, Perron-Frobenius data, language enumeration,
// frequencies, return words, and the Chacon alpha/beta recoding.
//
// Words are std::strings whose characters are the alphabet symbols.  The
// Chacon pair:
//   beta: 0 -> 0012, 1 -> 12, 2 -> 012   (primitive)
//   alpha: 0 -> 0010, 1 -> 1             (not primitive, codes the interval map)
// Recoding 2 -> 0 carries beta-words to alpha-words; the inverse turns every
// 0 that immediately follows a 1 into a 2.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weakmix/errors.hpp"
#include "weakmix/rational.hpp"

namespace weakmix {

using Word = std::string;
using IntMatrix = std::vector<std::vector<long long>>; // row-major, S[i][j]

struct SubstitutionSystem {
    std::vector<char> alphabet;        // ordered; fixes row/column indexing
    std::map<char, Word> rules;
    IntMatrix matrix;                  // S[i][j] = count of alphabet[i] in rules[alphabet[j]]
    double theta = 0.0;                // dominant eigenvalue of the matrix
    bool primitive = false;            // some S^n entrywise positive
    int L_max = 0;                     // max image length
    long long memory_cap = 100'000'000;

    int size() const { return static_cast<int>(alphabet.size()); }
    int index_of(char c) const;        // throws unknown_symbol
    const Word& rule(char c) const;

    static SubstitutionSystem chacon_beta();
    static SubstitutionSystem chacon_alpha();
    static SubstitutionSystem from_rules(const std::vector<char>& alphabet,
                                         const std::map<char, Word>& rules);
    static SubstitutionSystem from_json_text(const std::string& text);
    std::string to_json_text() const;
};

struct PFData {
    double theta = 0.0;                      // dominant eigenvalue
    std::vector<double> frequencies;         // right eigenvector, sum 1
    bool primitive = false;
    bool eigen_exact = false;                // true when the spectrum was found exactly
    std::vector<long long> exact_eigenvalues; // all integer eigenvalues when eigen_exact
    std::optional<Rat> theta_exact;          // set when theta is rational
};

struct FactorTable {
    int n = 0;
    std::vector<Word> factors;               // distinct length-n factors, lexicographic
    long long count() const { return static_cast<long long>(factors.size()); }
    int index_of(const Word& w) const;       // throws not_a_factor
    std::optional<int> try_index_of(const Word& w) const;
};

struct FrequencyEstimate {
    double freq = 0.0;
    double err_bound = 0.0;
};

using PopulationVector = std::vector<long long>;

// --- core operations ------------------------------------------------------

// beta^m(w) by m-fold rule expansion; checks the matrix length prediction
// against memory_cap before expanding.
Word apply_power(const SubstitutionSystem& s, const Word& w, int m);

// p x p matrix with column j counting the symbols of rules[j].
IntMatrix substitution_matrix(const SubstitutionSystem& s);

// |beta^m(c)| = <1, S^m e_c>, exact integers (overflow-checked).
long long image_length(const SubstitutionSystem& s, char c, int m);
std::vector<long long> image_lengths(const SubstitutionSystem& s, int m);

PFData pf_data(const SubstitutionSystem& s);

// First N symbols of the one-sided fixed point seeded at `seed`.
Word fixed_point_prefix(const SubstitutionSystem& s, char seed, long long N);

// Distinct length-n factors of the subshift generated from the first
// alphabet letter, enumerated until two consecutive expansion rounds agree.
FactorTable enumerate_factors(const SubstitutionSystem& s, int n);

// Occurrence frequency of w in a long fixed-point prefix plus a discrepancy
// based error bound.
FrequencyEstimate factor_frequency(const SubstitutionSystem& s, const Word& w,
                                   long long prefix_len = 1'594'323 /* 3^13 */);

// Exact cylinder measures for rank n via the n-block presentation: valid when
// theta is an exact integer (both Chacon substitutions).  Returned in the
// order of enumerate_factors(s, n).
std::vector<Rat> exact_factor_frequencies(const SubstitutionSystem& s, int n);

enum class RecodeDirection { beta_to_alpha, alpha_to_beta };
enum class RecodeContext { fresh, after_zero, after_one, unspecified };

// 2 -> 0 one way; contextual 0 -> 2 the other way.  For alpha_to_beta a word
// starting with 0 needs to know the preceding symbol (or that there is none).
Word alpha_beta_conjugacy(const Word& w, RecodeDirection dir,
                          RecodeContext ctx = RecodeContext::fresh);

// Words v with |v| <= max_len such that v + v[0] occurs in beta^power(b) for
// every letter b.
std::vector<Word> find_return_words(const SubstitutionSystem& s, int power, int max_len);

PopulationVector population_vector(const SubstitutionSystem& s, const Word& w);

// True iff the integer span of the vectors is all of Z^p (gcd of maximal
// minors equals 1).
bool lattice_span_check(const std::vector<PopulationVector>& vectors);

} // namespace weakmix
