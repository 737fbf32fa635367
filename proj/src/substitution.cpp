// substitution.cpp

#include "weakmix/substitution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace weakmix {

int SubstitutionSystem::index_of(char c) const {
    for (int i = 0; i < size(); ++i)
        if (alphabet[i] == c) return i;
    raise(Errc::unknown_symbol, std::string("unknown symbol '") + c + "'");
}

const Word& SubstitutionSystem::rule(char c) const {
    auto it = rules.find(c);
    if (it == rules.end()) raise(Errc::unknown_symbol, std::string("no rule for '") + c + "'");
    return it->second;
}

SubstitutionSystem SubstitutionSystem::from_rules(const std::vector<char>& alphabet,
                                                  const std::map<char, Word>& rules) {
    SubstitutionSystem s;
    s.alphabet = alphabet;
    s.rules = rules;
    const int p = s.size();
    if (p == 0 || rules.empty()) raise(Errc::config_invalid, "empty substitution");
    s.matrix.assign(p, std::vector<long long>(p, 0));
    for (int j = 0; j < p; ++j) {
        const Word& img = s.rule(alphabet[j]);
        if (img.empty()) raise(Errc::config_invalid, "empty image word");
        s.L_max = std::max<int>(s.L_max, static_cast<int>(img.size()));
        for (char c : img) s.matrix[s.index_of(c)][j] += 1;
    }
    PFData pf = pf_data(s);
    s.theta = pf.theta;
    s.primitive = pf.primitive;
    return s;
}

SubstitutionSystem SubstitutionSystem::chacon_beta() {
    return from_rules({'0', '1', '2'}, {{'0', "0012"}, {'1', "12"}, {'2', "012"}});
}

SubstitutionSystem SubstitutionSystem::chacon_alpha() {
    return from_rules({'0', '1'}, {{'0', "0010"}, {'1', "1"}});
}

SubstitutionSystem SubstitutionSystem::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<char> alphabet;
    for (const auto& a : j.at("alphabet")) {
        std::string sym = a.get<std::string>();
        if (sym.size() != 1) raise(Errc::config_invalid, "alphabet symbols must be single characters");
        alphabet.push_back(sym[0]);
    }
    std::map<char, Word> rules;
    for (auto& [key, val] : j.at("rules").items()) {
        if (key.size() != 1) raise(Errc::config_invalid, "rule keys must be single characters");
        rules[key[0]] = val.get<std::string>();
    }
    return from_rules(alphabet, rules);
}

std::string SubstitutionSystem::to_json_text() const {
    nlohmann::json j;
    for (char c : alphabet) j["alphabet"].push_back(std::string(1, c));
    for (char c : alphabet) j["rules"][std::string(1, c)] = rule(c);
    return j.dump();
}

IntMatrix substitution_matrix(const SubstitutionSystem& s) { return s.matrix; }

namespace {

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    const int p = static_cast<int>(a.size());
    IntMatrix c(p, std::vector<long long>(p, 0));
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < p; ++j) {
                __int128 v = static_cast<__int128>(c[i][j]) +
                             static_cast<__int128>(a[i][k]) * b[k][j];
                if (v > 0x7fffffffffffffffLL)
                    raise(Errc::numeric_overflow, "matrix power overflow");
                c[i][j] = static_cast<long long>(v);
            }
        }
    return c;
}

IntMatrix mat_pow(IntMatrix base, int e) {
    const int p = static_cast<int>(base.size());
    IntMatrix r(p, std::vector<long long>(p, 0));
    for (int i = 0; i < p; ++i) r[i][i] = 1;
    while (e > 0) {
        if (e & 1) r = mat_mul(r, base);
        e >>= 1;
        if (e) base = mat_mul(base, base);
    }
    return r;
}

} // namespace

long long image_length(const SubstitutionSystem& s, char c, int m) {
    return image_lengths(s, m)[s.index_of(c)];
}

std::vector<long long> image_lengths(const SubstitutionSystem& s, int m) {
    IntMatrix Sm = mat_pow(s.matrix, m);
    const int p = s.size();
    std::vector<long long> out(p, 0);
    for (int j = 0; j < p; ++j) {
        __int128 acc = 0;
        for (int i = 0; i < p; ++i) acc += Sm[i][j];
        if (acc > 0x7fffffffffffffffLL) raise(Errc::numeric_overflow, "image length overflow");
        out[j] = static_cast<long long>(acc);
    }
    return out;
}

Word apply_power(const SubstitutionSystem& s, const Word& w, int m) {
    if (m < 0) raise(Errc::config_invalid, "apply_power: negative power");
    // predicted length <1, S^m l(w)>
    std::vector<long long> lens = image_lengths(s, m);
    __int128 predicted = 0;
    for (char c : w) predicted += lens[s.index_of(c)];
    if (predicted > s.memory_cap)
        raise(Errc::cap_exceeded, "apply_power: predicted length exceeds memory cap");
    Word cur = w;
    for (char c : cur) (void)s.index_of(c); // validate symbols
    for (int step = 0; step < m; ++step) {
        Word next;
        next.reserve(cur.size() * s.L_max);
        for (char c : cur) next += s.rule(c);
        cur.swap(next);
    }
    return cur;
}

Word fixed_point_prefix(const SubstitutionSystem& s, char seed, long long N) {
    const Word& img = s.rule(seed);
    if (img[0] != seed)
        raise(Errc::seed_not_extendable, "fixed_point_prefix: rules[seed] does not start with seed");
    if (N > s.memory_cap) raise(Errc::cap_exceeded, "fixed_point_prefix: N exceeds memory cap");
    if (N <= 0) return Word();
    Word cur(1, seed);
    while (static_cast<long long>(cur.size()) < N) {
        Word next;
        next.reserve(std::min<long long>(N + s.L_max, static_cast<long long>(cur.size()) * s.L_max + s.L_max));
        for (char c : cur) {
            next += s.rule(c);
            if (static_cast<long long>(next.size()) >= N) break;
        }
        if (next.size() == cur.size())
            raise(Errc::seed_not_extendable, "fixed_point_prefix: expansion does not grow");
        cur.swap(next);
    }
    cur.resize(N);
    return cur;
}

FactorTable enumerate_factors(const SubstitutionSystem& s, int n) {
    if (n < 1) raise(Errc::config_invalid, "enumerate_factors: rank must be >= 1");
    char seed0 = s.alphabet[0];
    std::set<Word> prev, cur;
    Word w(1, seed0);
    int rounds_stable = 0;
    for (int m = 0; m < 64; ++m) {
        cur.clear();
        if (static_cast<long long>(w.size()) >= n)
            for (size_t i = 0; i + n <= w.size(); ++i) cur.insert(w.substr(i, n));
        if (!cur.empty() && cur == prev) {
            ++rounds_stable;
            if (rounds_stable >= 1) break; // two consecutive rounds identical
        } else {
            rounds_stable = 0;
        }
        prev = cur;
        if (static_cast<long long>(w.size()) * s.L_max > s.memory_cap)
            raise(Errc::cap_exceeded, "enumerate_factors: expansion exceeds memory cap");
        Word next;
        next.reserve(w.size() * s.L_max);
        for (char c : w) next += s.rule(c);
        w.swap(next);
    }
    FactorTable t;
    t.n = n;
    t.factors.assign(cur.begin(), cur.end()); // std::set is already lexicographic
    return t;
}

int FactorTable::index_of(const Word& w) const {
    auto it = std::lower_bound(factors.begin(), factors.end(), w);
    if (it == factors.end() || *it != w) raise(Errc::not_a_factor, "not a factor: " + w);
    return static_cast<int>(it - factors.begin());
}

std::optional<int> FactorTable::try_index_of(const Word& w) const {
    auto it = std::lower_bound(factors.begin(), factors.end(), w);
    if (it == factors.end() || *it != w) return std::nullopt;
    return static_cast<int>(it - factors.begin());
}

FrequencyEstimate factor_frequency(const SubstitutionSystem& s, const Word& w, long long prefix_len) {
    FactorTable t = enumerate_factors(s, static_cast<int>(w.size()));
    if (!t.try_index_of(w)) raise(Errc::not_a_factor, "factor_frequency: not a factor");
    Word prefix = fixed_point_prefix(s, s.alphabet[0], prefix_len);
    long long windows = static_cast<long long>(prefix.size()) - static_cast<long long>(w.size()) + 1;
    long long count = 0;
    for (long long i = 0; i < windows; ++i)
        if (prefix.compare(i, w.size(), w) == 0) ++count;
    FrequencyEstimate est;
    est.freq = static_cast<double>(count) / static_cast<double>(windows);
    // Occurrence counts deviate from N*mu by O(log^2 N); 25 log^2 is a
    // generous envelope for both Chacon substitutions at these sizes.
    double logN = std::log(static_cast<double>(windows)) / std::log(3.0);
    est.err_bound = 25.0 * logN * logN / static_cast<double>(windows);
    return est;
}

// --- Perron-Frobenius data --------------------------------------------------

namespace {

// integer characteristic polynomial coefficients for p <= 3, monic,
// poly(x) = x^p - c[p-1] x^(p-1) - ... - c[0]  stored as general signed array
std::vector<long long> char_poly(const IntMatrix& S) {
    const int p = static_cast<int>(S.size());
    if (p == 1) return {-S[0][0], 1}; // x - a
    if (p == 2) {
        long long tr = S[0][0] + S[1][1];
        long long det = S[0][0] * S[1][1] - S[0][1] * S[1][0];
        return {det, -tr, 1}; // x^2 - tr x + det
    }
    // p == 3: x^3 - tr x^2 + m2 x - det
    long long tr = S[0][0] + S[1][1] + S[2][2];
    long long m2 = (S[1][1] * S[2][2] - S[1][2] * S[2][1]) +
                   (S[0][0] * S[2][2] - S[0][2] * S[2][0]) +
                   (S[0][0] * S[1][1] - S[0][1] * S[1][0]);
    long long det = S[0][0] * (S[1][1] * S[2][2] - S[1][2] * S[2][1]) -
                    S[0][1] * (S[1][0] * S[2][2] - S[1][2] * S[2][0]) +
                    S[0][2] * (S[1][0] * S[2][1] - S[1][1] * S[2][0]);
    return {-det, m2, -tr, 1};
}

double poly_eval(const std::vector<long long>& c, double x) {
    double v = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * x + static_cast<double>(c[i]);
    return v;
}

// divide poly by (x - r) when r is an integer root; returns quotient coeffs
std::vector<long long> deflate(const std::vector<long long>& c, long long r) {
    std::vector<long long> q(c.size() - 1, 0);
    long long carry = c.back();
    for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
        q[i] = carry;
        carry = c[i] + carry * r;
    }
    return q;
}

std::vector<long long> integer_roots(std::vector<long long> c) {
    std::vector<long long> roots;
    bool progress = true;
    while (c.size() > 1 && progress) {
        progress = false;
        // constant term 0 -> root 0
        if (c[0] == 0) {
            roots.push_back(0);
            c.erase(c.begin());
            progress = true;
            continue;
        }
        long long a0 = std::llabs(c[0]);
        for (long long d = 1; d * d <= a0; ++d) {
            if (a0 % d) continue;
            for (long long cand : {d, -d, a0 / d, -(a0 / d)}) {
                // exact Horner over __int128
                __int128 v = 0;
                bool overflow = false;
                for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
                    v = v * cand + c[i];
                    if (v > (__int128)1 << 100 || v < -((__int128)1 << 100)) { overflow = true; break; }
                }
                if (!overflow && v == 0) {
                    roots.push_back(cand);
                    c = deflate(c, cand);
                    progress = true;
                    break;
                }
            }
            if (progress) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// rational kernel vector of (S - theta I) for integer theta, p <= 3
std::vector<Rat> integer_eigvec(const IntMatrix& S, long long theta) {
    const int p = static_cast<int>(S.size());
    std::vector<std::vector<Rat>> A(p, std::vector<Rat>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) A[i][j] = Rat(S[i][j] - (i == j ? theta : 0));
    // Gaussian elimination, track pivot columns
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < p && row < p; ++col) {
        int pr = -1;
        for (int r = row; r < p; ++r)
            if (!A[r][col].is_zero()) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(A[pr], A[row]);
        for (int r = 0; r < p; ++r) {
            if (r == row || A[r][col].is_zero()) continue;
            Rat f = Rat(A[r][col].num, A[r][col].den) * Rat(A[row][col].den, A[row][col].num);
            for (int cc = 0; cc < p; ++cc) A[r][cc] = A[r][cc] - f * A[row][cc];
        }
        pivot_col.push_back(col);
        ++row;
    }
    // free column -> set it to 1, back-substitute
    std::vector<Rat> v(p, Rat(0));
    int free_col = -1;
    for (int c = 0; c < p; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) { free_col = c; break; }
    if (free_col < 0) return {}; // trivial kernel: theta not an eigenvalue
    v[free_col] = Rat(1);
    for (int r = static_cast<int>(pivot_col.size()) - 1; r >= 0; --r) {
        int pc = pivot_col[r];
        Rat acc(0);
        for (int c = pc + 1; c < p; ++c) acc = acc + A[r][c] * v[c];
        v[pc] = -acc * Rat(A[r][pc].den, A[r][pc].num);
    }
    return v;
}

} // namespace

PFData pf_data(const SubstitutionSystem& s) {
    const int p = s.size();
    PFData out;
    // primitivity: some S^n entrywise positive, n <= p^2 (boolean closure)
    {
        IntMatrix B = s.matrix;
        for (int n = 1; n <= p * p; ++n) {
            bool all = true;
            for (auto& row : B)
                for (auto v : row)
                    if (v == 0) all = false;
            if (all) { out.primitive = true; break; }
            B = mat_mul(B, s.matrix);
            for (auto& row : B)
                for (auto& v : row) v = v > 0 ? 1 : 0;
        }
    }
    std::vector<long long> cp = char_poly(s.matrix);
    std::vector<long long> roots = integer_roots(cp);
    if (static_cast<int>(roots.size()) == p) {
        out.eigen_exact = true;
        out.exact_eigenvalues = roots;
        out.theta = static_cast<double>(roots.back());
        out.theta_exact = Rat(roots.back());
    } else if (p == 2) {
        // quadratic formula
        double tr = static_cast<double>(-cp[1]);
        double det = static_cast<double>(cp[0]);
        double disc = tr * tr - 4.0 * det;
        out.theta = (tr + std::sqrt(std::max(0.0, disc))) / 2.0;
    } else {
        // bisection on the characteristic polynomial beyond the largest found root
        double lo = 0.0, hi = 1.0;
        while (poly_eval(cp, hi) < 0 || poly_eval(cp, hi) == 0.0) hi *= 2.0;
        for (double base = hi; base > lo; base /= 2.0) {} // keep lo = 0
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2.0;
            if (poly_eval(cp, mid) > 0) hi = mid; else lo = mid;
        }
        out.theta = (lo + hi) / 2.0;
    }
    // right eigenvector
    std::vector<double> v(p, 1.0);
    bool exact_vec = false;
    if (out.theta_exact && out.theta_exact->den == 1) {
        std::vector<Rat> rv = integer_eigvec(s.matrix, out.theta_exact->num);
        if (!rv.empty()) {
            for (int i = 0; i < p; ++i) v[i] = rv[i].to_double();
            exact_vec = true;
        }
    }
    if (!exact_vec) {
        for (int it = 0; it < 20000; ++it) {
            std::vector<double> w(p, 0.0);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j) w[i] += static_cast<double>(s.matrix[i][j]) * v[j];
            double norm = 0;
            for (double x : w) norm += std::abs(x);
            for (double& x : w) x /= norm;
            double diff = 0;
            for (int i = 0; i < p; ++i) diff += std::abs(w[i] - v[i]);
            v = w;
            if (diff < 1e-14 && it > 3) break;
        }
    }
    double sum = 0;
    for (double x : v) sum += x;
    out.frequencies.resize(p);
    for (int i = 0; i < p; ++i) out.frequencies[i] = v[i] / sum;
    return out;
}

// --- exact cylinder measures via the n-block presentation -------------------

std::vector<Rat> exact_factor_frequencies(const SubstitutionSystem& s, int n) {
    PFData pf = pf_data(s);
    if (!pf.theta_exact || pf.theta_exact->den != 1)
        raise(Errc::config_invalid, "exact_factor_frequencies: theta is not an exact integer");
    const long long theta = pf.theta_exact->num;
    FactorTable t = enumerate_factors(s, n);
    const int J = static_cast<int>(t.factors.size());
    // Block substitution: the image of block w = x[i..i+n-1] lists the n-blocks
    // of beta(w) at offsets 0 .. |beta(w_0)|-1.
    IntMatrix B(J, std::vector<long long>(J, 0));
    for (int j = 0; j < J; ++j) {
        const Word& w = t.factors[j];
        Word img;
        for (char c : w) img += s.rule(c);
        long long first_len = static_cast<long long>(s.rule(w[0]).size());
        for (long long off = 0; off < first_len; ++off) {
            if (off + n > static_cast<long long>(img.size()))
                raise(Errc::config_invalid, "exact_factor_frequencies: block image too short");
            Word blk = img.substr(off, n);
            B[t.index_of(blk)][j] += 1;
        }
    }
    // kernel of (B - theta I), normalized to sum 1
    std::vector<std::vector<Rat>> A(J, std::vector<Rat>(J));
    for (int i = 0; i < J; ++i)
        for (int j = 0; j < J; ++j) A[i][j] = Rat(B[i][j] - (i == j ? theta : 0));
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < J && row < J; ++col) {
        int pr = -1;
        for (int r = row; r < J; ++r)
            if (!A[r][col].is_zero()) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(A[pr], A[row]);
        for (int r = 0; r < J; ++r) {
            if (r == row || A[r][col].is_zero()) continue;
            Rat f = A[r][col] * Rat(A[row][col].den, A[row][col].num);
            for (int cc = col; cc < J; ++cc) A[r][cc] = A[r][cc] - f * A[row][cc];
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<Rat> v(J, Rat(0));
    int free_col = -1;
    for (int c = 0; c < J; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) { free_col = c; break; }
    if (free_col < 0)
        raise(Errc::config_invalid, "exact_factor_frequencies: theta is not an eigenvalue of the block matrix");
    v[free_col] = Rat(1);
    for (int r = static_cast<int>(pivot_col.size()) - 1; r >= 0; --r) {
        int pc = pivot_col[r];
        Rat acc(0);
        for (int c = pc + 1; c < J; ++c)
            if (!v[c].is_zero()) acc = acc + A[r][c] * v[c];
        v[pc] = -acc * Rat(A[r][pc].den, A[r][pc].num);
    }
    Rat sum(0);
    for (const Rat& x : v) sum = sum + x;
    if (sum.is_zero()) raise(Errc::config_invalid, "exact_factor_frequencies: degenerate eigenvector");
    for (Rat& x : v) x = x * Rat(sum.den, sum.num);
    return v;
}

// --- recoding ----------------------------------------------------------------

Word alpha_beta_conjugacy(const Word& w, RecodeDirection dir, RecodeContext ctx) {
    Word out = w;
    if (dir == RecodeDirection::beta_to_alpha) {
        for (char& c : out)
            if (c == '2') c = '0';
        return out;
    }
    if (w.empty()) return out;
    if (w[0] == '0' && ctx == RecodeContext::unspecified)
        raise(Errc::ambiguous_context, "alpha_beta_conjugacy: leading 0 needs left context");
    char prev = (ctx == RecodeContext::after_one) ? '1' : '0'; // fresh/after_zero: no 1 precedes
    for (size_t i = 0; i < out.size(); ++i) {
        char cur = out[i];
        if (cur == '0' && prev == '1') out[i] = '2';
        prev = cur;
    }
    return out;
}

std::vector<Word> find_return_words(const SubstitutionSystem& s, int power, int max_len) {
    if (power < 1) raise(Errc::config_invalid, "find_return_words: power must be >= 1");
    std::vector<Word> images;
    for (char b : s.alphabet) images.push_back(apply_power(s, Word(1, b), power));
    std::vector<Word> out;
    for (int len = 1; len <= max_len; ++len) {
        FactorTable t = enumerate_factors(s, len);
        for (const Word& v : t.factors) {
            Word probe = v + v[0];
            bool ok = true;
            for (const Word& img : images)
                if (img.find(probe) == Word::npos) { ok = false; break; }
            if (ok) out.push_back(v);
        }
    }
    return out;
}

PopulationVector population_vector(const SubstitutionSystem& s, const Word& w) {
    PopulationVector v(s.size(), 0);
    for (char c : w) v[s.index_of(c)] += 1;
    return v;
}

namespace {

long long det_ll(const std::vector<PopulationVector>& rows) {
    const int p = static_cast<int>(rows.size());
    if (p == 1) return rows[0][0];
    if (p == 2) return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    if (p == 3)
        return rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1]) -
               rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0]) +
               rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
    raise(Errc::config_invalid, "lattice_span_check: dimension > 3 not supported");
}

} // namespace

bool lattice_span_check(const std::vector<PopulationVector>& vectors) {
    if (vectors.empty()) return false;
    const size_t p = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != p) raise(Errc::dimension_mismatch, "lattice_span_check: mixed dimensions");
    if (vectors.size() < p) return false;
    // gcd over all p x p minors
    std::vector<size_t> idx(p);
    long long g = 0;
    // enumerate combinations of size p
    std::vector<size_t> comb(p);
    for (size_t i = 0; i < p; ++i) comb[i] = i;
    while (true) {
        std::vector<PopulationVector> rows;
        for (size_t i : comb) rows.push_back(vectors[i]);
        long long d = det_ll(rows);
        g = std::gcd(g, d < 0 ? -d : d);
        if (g == 1) return true;
        // next combination
        int i = static_cast<int>(p) - 1;
        while (i >= 0 && comb[i] == vectors.size() - p + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (size_t j = i + 1; j < p; ++j) comb[j] = comb[j - 1] + 1;
    }
    return g == 1;
}

} // namespace weakmix
