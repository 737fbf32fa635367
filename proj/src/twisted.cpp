// twisted.cpp

#include "weakmix/twisted.hpp"

#include <algorithm>
#include <cmath>

namespace weakmix {

namespace {

constexpr long double TWO_PI_L = 6.283185307179586476925286766559L;

// compensated complex accumulator
struct Kahan {
    cplx sum{0.0, 0.0}, comp{0.0, 0.0};
    void add(cplx x) {
        cplx y = x - comp;
        cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace

cplx unit_phase(double omega, long long j) {
    long double frac = fmodl(static_cast<long double>(omega) * static_cast<long double>(j), 1.0L);
    long double a = -TWO_PI_L * frac;
    return {static_cast<double>(cosl(a)), static_cast<double>(sinl(a))};
}

double int_dist(double x) {
    double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

double int_dist(const std::vector<double>& v) {
    double d = 0;
    for (double x : v) d = std::max(d, int_dist(x));
    return d;
}

Language::Language(const SubstitutionSystem& s, int n_max) : subst(s) {
    if (n_max < 1) raise(Errc::config_invalid, "Language: n_max < 1");
    tables.reserve(n_max);
    freqs.reserve(n_max);
    PFData pf = pf_data(s);
    for (int n = 1; n <= n_max; ++n) {
        tables.push_back(enumerate_factors(s, n));
        std::vector<double> f;
        if (pf.theta_exact && pf.theta_exact->den == 1) {
            for (const Rat& r : exact_factor_frequencies(s, n)) f.push_back(r.to_double());
        } else {
            for (const Word& w : tables.back().factors) f.push_back(factor_frequency(s, w).freq);
        }
        freqs.push_back(std::move(f));
    }
}

const FactorTable& Language::table(int n) const {
    if (n < 1 || n > rank_max()) raise(Errc::config_invalid, "Language: rank out of range");
    return tables[n - 1];
}

const std::vector<double>& Language::freq(int n) const {
    if (n < 1 || n > rank_max()) raise(Errc::config_invalid, "Language: rank out of range");
    return freqs[n - 1];
}

cplx phi_cyl(const Word& v, const Word& cyl, double omega) {
    const int n = static_cast<int>(cyl.size());
    if (static_cast<int>(v.size()) < n) raise(Errc::word_too_short, "phi_cyl: |v| < n");
    Kahan acc;
    for (long long j = 0; j + n <= static_cast<long long>(v.size()); ++j)
        if (v.compare(j, n, cyl) == 0) acc.add(unit_phase(omega, j));
    return acc.sum;
}

cplx seam_sum(const std::string& v_tail, const std::string& w_head, long long v_len,
              long long w_len, double omega, int n, const Word& cyl) {
    Kahan acc;
    for (int t = 1; t <= n - 1; ++t) {
        if (t > v_len || n - t > w_len) continue;
        // window = last t symbols of v + first n-t symbols of w
        bool match = true;
        for (int i = 0; i < t && match; ++i)
            if (v_tail[v_tail.size() - t + i] != cyl[i]) match = false;
        for (int i = 0; i < n - t && match; ++i)
            if (w_head[i] != cyl[t + i]) match = false;
        if (match) acc.add(std::conj(unit_phase(omega, t))); // e^{+2 pi i omega t}
    }
    return acc.sum;
}

cplx boundary_H(const Word& v, const Word& w, double omega, int n, const Word& cyl) {
    if (static_cast<int>(v.size()) < n || static_cast<int>(w.size()) < n)
        raise(Errc::word_too_short, "boundary_H: |v|, |w| must be >= n");
    if (n <= 1) return {0.0, 0.0};
    std::string tail = v.substr(v.size() - (n - 1));
    std::string head = w.substr(0, n - 1);
    return seam_sum(tail, head, v.size(), w.size(), omega, n, cyl);
}

cplx phi_concat(const Word& v, const Word& w, double omega, int n, const Word& cyl,
                cplx phi_v, cplx phi_w) {
    cplx shift = unit_phase(omega, static_cast<long long>(v.size()));
    cplx h = n > 1 ? boundary_H(v, w, omega, n, cyl) : cplx{0.0, 0.0};
    return phi_v + shift * (phi_w + h);
}

// --- cylindrical functions ----------------------------------------------------

CylFunction CylFunction::make(const Language& lang, int n, std::vector<double> coeffs) {
    const FactorTable& t = lang.table(n);
    if (static_cast<long long>(coeffs.size()) != t.count())
        raise(Errc::dimension_mismatch, "CylFunction: coefficient count != J_n");
    CylFunction f;
    f.n = n;
    f.coeffs = std::move(coeffs);
    const std::vector<double>& mu = lang.freq(n);
    for (size_t k = 0; k < f.coeffs.size(); ++k) {
        f.sup_norm = std::max(f.sup_norm, std::abs(f.coeffs[k]));
        f.norm2_sq += f.coeffs[k] * f.coeffs[k] * mu[k];
        f.mean += f.coeffs[k] * mu[k];
    }
    // weak-Lipschitz constant: oscillation within each coarser cylinder,
    // relative to its measure (f is constant within rank-n cylinders)
    for (int m = 1; m < n; ++m) {
        const FactorTable& tm = lang.table(m);
        const std::vector<double>& mum = lang.freq(m);
        for (long long i = 0; i < tm.count(); ++i) {
            const Word& u = tm.factors[i];
            double rmax = -1e300, rmin = 1e300;
            for (long long k = 0; k < t.count(); ++k)
                if (t.factors[k].compare(0, m, u) == 0) {
                    rmax = std::max(rmax, f.coeffs[k]);
                    rmin = std::min(rmin, f.coeffs[k]);
                }
            if (rmax >= rmin && mum[i] > 0)
                f.weak_lip = std::max(f.weak_lip, (rmax - rmin) / mum[i]);
        }
    }
    f.norm_L = f.weak_lip + f.sup_norm;
    f.zero_mean = std::abs(f.mean) <= 1e-9;
    return f;
}

CylFunction CylFunction::indicator(const Language& lang, int n, int k) {
    std::vector<double> c(lang.table(n).count(), 0.0);
    c.at(k) = 1.0;
    return make(lang, n, std::move(c));
}

cplx phi_f(const Word& v, double omega, const CylFunction& f, const Language& lang) {
    const FactorTable& t = lang.table(f.n);
    if (static_cast<int>(v.size()) < f.n) raise(Errc::word_too_short, "phi_f: |v| < n");
    // single pass over windows, coefficient looked up per window
    Kahan acc;
    for (long long j = 0; j + f.n <= static_cast<long long>(v.size()); ++j) {
        auto k = t.try_index_of(v.substr(j, f.n));
        if (k && f.coeffs[*k] != 0.0) {
            cplx ph = unit_phase(omega, j);
            acc.add(f.coeffs[*k] * ph);
        }
    }
    return acc.sum;
}

// --- matrices and the Pi recursion ---------------------------------------------

TwistedMatrix build_twisted_matrix(const SubstitutionSystem& s, int m, double omega) {
    if (m < 1) raise(Errc::config_invalid, "build_twisted_matrix: m < 1");
    const int p = s.size();
    std::vector<long long> lens = image_lengths(s, m - 1);
    TwistedMatrix M;
    M.m = m;
    M.omega = omega;
    M.entries.assign(p, std::vector<cplx>(p, {0.0, 0.0}));
    for (int b = 0; b < p; ++b) {
        const Word& img = s.rule(s.alphabet[b]);
        long long cum = 0;
        for (char u : img) {
            int c = s.index_of(u);
            M.entries[b][c] += unit_phase(omega, cum);
            cum += lens[c];
        }
    }
    return M;
}

int base_level(const SubstitutionSystem& s, int n) {
    for (int m = 0; m <= 64; ++m) {
        std::vector<long long> lens = image_lengths(s, m);
        long long mn = lens[0];
        for (long long L : lens) mn = std::min(mn, L);
        if (mn >= n) return m;
    }
    raise(Errc::depth_too_shallow, "base_level: no level reaches the rank");
}

PiState pi_direct(const Language& lang, int m, int n, double omega) {
    const SubstitutionSystem& s = lang.subst;
    std::vector<long long> lens = image_lengths(s, m);
    for (long long L : lens)
        if (L < n) raise(Errc::depth_too_shallow, "pi_direct: |beta^m(b)| < n");
    const FactorTable& t = lang.table(n);
    PiState st;
    st.m = m;
    st.n = n;
    st.omega = omega;
    st.cols.assign(s.size(), std::vector<cplx>(t.count(), {0.0, 0.0}));
    for (int b = 0; b < s.size(); ++b) {
        Word img = apply_power(s, Word(1, s.alphabet[b]), m);
        for (long long k = 0; k < t.count(); ++k)
            st.cols[b][k] = phi_cyl(img, t.factors[k], omega);
    }
    return st;
}

std::string expand_prefix(const SubstitutionSystem& s, char letter, int m, int len) {
    if (len <= 0) return "";
    if (m == 0) return std::string(1, letter);
    std::string out;
    for (char c : s.rule(letter)) {
        out += expand_prefix(s, c, m - 1, len - static_cast<int>(out.size()));
        if (static_cast<int>(out.size()) >= len) break;
    }
    return out.substr(0, std::min<size_t>(out.size(), len));
}

std::string expand_suffix(const SubstitutionSystem& s, char letter, int m, int len) {
    if (len <= 0) return "";
    if (m == 0) return std::string(1, letter);
    std::string out;
    const Word& img = s.rule(letter);
    for (auto it = img.rbegin(); it != img.rend(); ++it) {
        std::string piece = expand_suffix(s, *it, m - 1, len - static_cast<int>(out.size()));
        out = piece + out;
        if (static_cast<int>(out.size()) >= len) break;
    }
    if (static_cast<int>(out.size()) > len) out = out.substr(out.size() - len);
    return out;
}

PiState pi_recursive(const Language& lang, int m, int n, double omega) {
    const SubstitutionSystem& s = lang.subst;
    const int m0 = base_level(s, n);
    if (m < m0) raise(Errc::depth_too_shallow, "pi_recursive: m below base level");
    PiState st = pi_direct(lang, m0, n, omega);
    const FactorTable& t = lang.table(n);
    const int p = s.size();
    for (int lvl = m0 + 1; lvl <= m; ++lvl) {
        TwistedMatrix M = build_twisted_matrix(s, lvl, omega);
        std::vector<long long> lens = image_lengths(s, lvl - 1);
        std::vector<std::vector<cplx>> next(p, std::vector<cplx>(t.count(), {0.0, 0.0}));
        for (int b = 0; b < p; ++b) {
            // matrix part
            for (int c = 0; c < p; ++c) {
                cplx w = M.entries[b][c];
                if (w == cplx{0.0, 0.0}) continue;
                for (long long k = 0; k < t.count(); ++k) next[b][k] += w * st.cols[c][k];
            }
            // seam corrections between consecutive expanded letters
            const Word& img = s.rule(s.alphabet[b]);
            long long cum = lens[s.index_of(img[0])];
            for (size_t j = 0; j + 1 < img.size(); ++j) {
                char left = img[j], right = img[j + 1];
                std::string tail = expand_suffix(s, left, lvl - 1, n - 1);
                std::string head = expand_prefix(s, right, lvl - 1, n - 1);
                cplx pref = unit_phase(omega, cum);
                for (long long k = 0; k < t.count(); ++k) {
                    cplx h = seam_sum(tail, head, lens[s.index_of(left)],
                                      lens[s.index_of(right)], omega, n, t.factors[k]);
                    next[b][k] += pref * h;
                }
                cum += lens[s.index_of(right)];
            }
        }
        st.cols.swap(next);
        st.m = lvl;
    }
    return st;
}

XhatBound xhat_lattice_bound(const SubstitutionSystem& s, int k, double omega) {
    std::vector<long long> lens = image_lengths(s, k);
    XhatBound out;
    for (long long L : lens) out.xhat.push_back(omega * static_cast<double>(L));
    out.dist = int_dist(out.xhat);
    out.ok = out.dist >= int_dist(omega) / 3.0 - 1e-12;
    return out;
}

namespace {

std::vector<long long> st_pow_ones(const IntMatrix& S, int e) {
    const int p = static_cast<int>(S.size());
    std::vector<long long> v(p, 1);
    for (int step = 0; step < e; ++step) {
        std::vector<long long> w(p, 0);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) w[i] += S[j][i] * v[j]; // S^t row i
        v.swap(w);
    }
    return v;
}

} // namespace

VeechCheck veech_product_check(const SubstitutionSystem& s, int n, int m, double omega,
                               const std::vector<Word>& return_words) {
    if (m <= n) raise(Errc::config_invalid, "veech_product_check: need m > n");
    if (return_words.empty()) raise(Errc::no_return_words, "veech_product_check: empty word list");
    const int p = s.size();
    // product over levels j = n+1 .. m; the level-j factor uses |beta^j| lengths
    std::vector<std::vector<cplx>> prod(p, std::vector<cplx>(p, {0.0, 0.0}));
    for (int i = 0; i < p; ++i) prod[i][i] = 1.0;
    for (int j = n + 1; j <= m; ++j) {
        TwistedMatrix M = build_twisted_matrix(s, j + 1, omega);
        std::vector<std::vector<cplx>> nxt(p, std::vector<cplx>(p, {0.0, 0.0}));
        for (int a = 0; a < p; ++a)
            for (int c = 0; c < p; ++c)
                for (int b = 0; b < p; ++b) nxt[a][c] += M.entries[a][b] * prod[b][c];
        prod.swap(nxt);
    }
    VeechCheck out;
    for (int i = 0; i < p; ++i) {
        double row = 0;
        for (int c = 0; c < p; ++c) row += std::abs(prod[i][c]);
        out.lhs.push_back(row);
    }
    std::vector<long long> base = st_pow_ones(s.matrix, m - n);
    double dw = int_dist(omega);
    if (dw == 0.0) {
        out.c_fit = 1.0;
        for (int i = 0; i < p; ++i) out.rhs.push_back(static_cast<double>(base[i]));
    } else {
        double worst = 0;
        for (int i = 0; i < p; ++i)
            worst = std::max(worst, out.lhs[i] / static_cast<double>(base[i]));
        double per_step = std::pow(worst, 1.0 / static_cast<double>(m - n));
        out.c_fit = std::min(1.0, (1.0 - per_step) / (dw * dw));
        double shrink = std::pow(1.0 - out.c_fit * dw * dw, m - n);
        for (int i = 0; i < p; ++i) out.rhs.push_back(shrink * static_cast<double>(base[i]));
    }
    std::vector<PopulationVector> pops;
    for (const Word& w : return_words) pops.push_back(population_vector(s, w));
    out.lattice_span = lattice_span_check(pops);
    // greedy schedule: per step pick the word whose expanded length puts the
    // phase farthest from the integers
    for (int k = n + 1; k <= m; ++k) {
        std::vector<long long> lens = image_lengths(s, k);
        int best = 0;
        double best_d = -1;
        for (size_t w = 0; w < return_words.size(); ++w) {
            long long len = 0;
            for (char ch : return_words[w]) len += lens[s.index_of(ch)];
            double d = int_dist(omega * static_cast<double>(len));
            if (d > best_d) {
                best_d = d;
                best = static_cast<int>(w);
            }
        }
        out.schedule.push_back(best);
        out.step_dist.push_back(best_d);
    }
    return out;
}

GrowthFit corollary_growth_check(const Language& lang, double omega,
                                 const std::vector<long long>& N_list) {
    GrowthFit fit;
    fit.N_list = N_list;
    const double log3 = std::log(3.0);
    for (long long N : N_list) {
        double log3N = std::log(static_cast<double>(N)) / log3;
        int n = std::max(1, static_cast<int>(std::floor(0.5 * log3N + 1e-9)));
        n = std::min(n, lang.rank_max());
        int m = std::max(n + 1, static_cast<int>(std::floor(log3N + 1e-9)));
        PiState st = pi_recursive(lang, m, n, omega);
        double mx = 0;
        for (auto& col : st.cols)
            for (cplx v : col) mx = std::max(mx, std::abs(v));
        fit.max_entry.push_back(mx);
        fit.m_used.push_back(m);
        fit.n_used.push_back(n);
    }
    // slope of log(max_entry) against log N
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int cnt = static_cast<int>(N_list.size());
    for (int i = 0; i < cnt; ++i) {
        double x = std::log(static_cast<double>(N_list[i]));
        double y = std::log(std::max(fit.max_entry[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    double dw = int_dist(omega);
    fit.c_dd = dw > 0 ? (1.0 - slope) / (dw * dw) : 0.0;
    double cs_max = 0;
    for (int i = 0; i < cnt; ++i) {
        double denom = std::pow(static_cast<double>(N_list[i]), 1.0 - fit.c_dd * dw * dw) +
                       static_cast<double>(fit.m_used[i] * fit.n_used[i]);
        fit.C_S_per_N.push_back(fit.max_entry[i] / denom);
        cs_max = std::max(cs_max, fit.C_S_per_N.back());
    }
    fit.C_S = cs_max;
    std::vector<double> sorted = fit.C_S_per_N;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    fit.stable = true;
    for (double c : fit.C_S_per_N)
        if (c < 0.5 * median || c > 1.5 * median) fit.stable = false;
    return fit;
}

} // namespace weakmix
