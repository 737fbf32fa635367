// prefix_suffix.cpp

#include "weakmix/prefix_suffix.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace weakmix {

Word Decomposition::reconstruct(const SubstitutionSystem& s) const {
    Word out;
    for (int i = 0; i <= depth; ++i) out += apply_power(s, u_parts[i], i);
    for (int i = depth; i >= 0; --i) out += apply_power(s, v_parts[i], i);
    return out;
}

namespace {

bool proper_prefix_of_some_image(const SubstitutionSystem& s, const Word& w) {
    for (char b : s.alphabet) {
        const Word& img = s.rule(b);
        if (w.size() < img.size() && img.compare(0, w.size(), w) == 0) return true;
    }
    return false;
}

bool proper_suffix_of_some_image(const SubstitutionSystem& s, const Word& w) {
    for (char b : s.alphabet) {
        const Word& img = s.rule(b);
        if (w.size() < img.size() &&
            img.compare(img.size() - w.size(), w.size(), w) == 0)
            return true;
    }
    return false;
}

struct RawDecomp {
    std::vector<Word> us, vs; // level 0 first
    bool strict = true;
};

// minimal expansion level of the seed whose image contains w, with the
// leftmost occurrence position
std::pair<int, size_t> localize(const SubstitutionSystem& s, const Word& w) {
    char seed = s.alphabet[0];
    Word exp(1, seed);
    for (int m = 0; m <= 64; ++m) {
        if (exp.size() >= w.size()) {
            size_t pos = exp.find(w);
            if (pos != Word::npos) return {m, pos};
            if (exp.size() >= 100 * w.size() + 100)
                raise(Errc::not_a_factor, "decompose: not a factor: " + w);
        }
        Word next;
        next.reserve(exp.size() * s.L_max);
        for (char c : exp) next += s.rule(c);
        exp.swap(next);
    }
    raise(Errc::not_a_factor, "decompose: localization failed");
}

RawDecomp rec_decompose(const SubstitutionSystem& s, const Word& w) {
    auto [m, pos] = localize(s, w);
    if (m == 0) {
        // w is the seed letter itself
        RawDecomp d;
        d.us = {w};
        d.vs = {""};
        d.strict = proper_prefix_of_some_image(s, w) || proper_suffix_of_some_image(s, w);
        return d;
    }
    Word parent = apply_power(s, Word(1, s.alphabet[0]), m - 1);
    // image boundaries of beta(parent)
    std::vector<size_t> bounds = {0};
    for (char c : parent) bounds.push_back(bounds.back() + s.rule(c).size());
    const size_t end = pos + w.size();
    // image a holds position pos, image b holds position end-1
    size_t a = std::upper_bound(bounds.begin(), bounds.end(), pos) - bounds.begin() - 1;
    size_t b = std::lower_bound(bounds.begin(), bounds.end(), end) - bounds.begin() - 1;
    if (a == b) {
        const Word& img = s.rule(parent[a]);
        RawDecomp d;
        if (pos == bounds[a] && end == bounds[a + 1]) {
            // w equals a full image: push it one level down
            RawDecomp inner = rec_decompose(s, Word(1, parent[a]));
            d.us.push_back("");
            d.vs.push_back("");
            d.us.insert(d.us.end(), inner.us.begin(), inner.us.end());
            d.vs.insert(d.vs.end(), inner.vs.begin(), inner.vs.end());
            d.strict = inner.strict;
            return d;
        }
        if (pos == bounds[a]) { // proper prefix of the image
            d.us = {""};
            d.vs = {w};
        } else if (end == bounds[a + 1]) { // proper suffix
            d.us = {w};
            d.vs = {""};
        } else { // interior piece: realize it as a prefix/suffix elsewhere
            d.us = {""};
            d.vs = {w};
            if (proper_prefix_of_some_image(s, w)) {
                // keep as prefix role
            } else if (proper_suffix_of_some_image(s, w)) {
                d.us = {w};
                d.vs = {""};
            } else {
                d.strict = false; // inner piece of img only
                (void)img;
            }
        }
        return d;
    }
    Word suffix_part, prefix_part;
    size_t core_lo = a, core_hi = b; // inclusive letter range of the core
    if (pos > bounds[a]) {
        const Word& img = s.rule(parent[a]);
        suffix_part = img.substr(pos - bounds[a]);
        core_lo = a + 1;
    }
    if (end < bounds[b + 1]) {
        const Word& img = s.rule(parent[b]);
        prefix_part = img.substr(0, end - bounds[b]);
        core_hi = b - 1;
    }
    RawDecomp d;
    d.us.push_back(suffix_part);
    d.vs.push_back(prefix_part);
    if (core_lo <= core_hi) {
        Word core = parent.substr(core_lo, core_hi - core_lo + 1);
        RawDecomp inner = rec_decompose(s, core);
        d.us.insert(d.us.end(), inner.us.begin(), inner.us.end());
        d.vs.insert(d.vs.end(), inner.vs.begin(), inner.vs.end());
        d.strict = inner.strict;
    }
    return d;
}

} // namespace

Decomposition decompose(const SubstitutionSystem& s, const Word& w) {
    if (w.empty()) raise(Errc::not_a_factor, "decompose: empty word");
    RawDecomp raw = rec_decompose(s, w);
    // trim trailing levels where both parts are empty
    int depth = static_cast<int>(raw.us.size()) - 1;
    while (depth > 0 && raw.us[depth].empty() && raw.vs[depth].empty()) --depth;
    Decomposition d;
    d.depth = depth;
    d.u_parts.assign(raw.us.begin(), raw.us.begin() + depth + 1);
    d.v_parts.assign(raw.vs.begin(), raw.vs.begin() + depth + 1);
    d.strict = raw.strict;
    return d;
}

DepthBounds depth_bounds_check(const SubstitutionSystem& s, long long N, int m) {
    DepthBounds out;
    std::vector<long long> lens = image_lengths(s, m);
    std::vector<long long> lens1 = image_lengths(s, m + 1);
    out.min_piece = *std::min_element(lens.begin(), lens.end());
    out.max_next = *std::max_element(lens1.begin(), lens1.end());
    out.ok = out.min_piece <= N && N <= 2 * out.max_next;
    return out;
}

namespace {

std::string word_head(const SubstitutionSystem& s, const Word& w, int lvl, int len) {
    std::string out;
    for (char c : w) {
        out += expand_prefix(s, c, lvl, len - static_cast<int>(out.size()));
        if (static_cast<int>(out.size()) >= len) break;
    }
    return out;
}

std::string word_tail(const SubstitutionSystem& s, const Word& w, int lvl, int len) {
    std::string out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        out = expand_suffix(s, *it, lvl, len - static_cast<int>(out.size())) + out;
        if (static_cast<int>(out.size()) >= len) break;
    }
    return out;
}

cplx seam_f(const Language& lang, const CylFunction& f, const std::string& tail,
            const std::string& head, long long left_len, long long right_len, double omega) {
    const int n = f.n;
    const FactorTable& t = lang.table(n);
    cplx acc{0.0, 0.0};
    for (int tt = 1; tt <= n - 1; ++tt) {
        if (tt > left_len || n - tt > right_len) continue;
        if (tt > static_cast<int>(tail.size())) continue;
        std::string window = tail.substr(tail.size() - tt) + head.substr(0, n - tt);
        auto k = t.try_index_of(window);
        if (k && f.coeffs[*k] != 0.0)
            acc += f.coeffs[*k] * std::conj(unit_phase(omega, tt));
    }
    return acc;
}

} // namespace

AssembledPhi phi_via_decomposition(const Language& lang, const Word& x_factor, double omega,
                                   const CylFunction& f, double c_prime, double fit_constant) {
    const SubstitutionSystem& s = lang.subst;
    const int n = f.n;
    if (static_cast<int>(x_factor.size()) < n)
        raise(Errc::word_too_short, "phi_via_decomposition: |x| < n");
    Decomposition d = decompose(s, x_factor);

    // parts in concatenation order: (u_0,0) .. (u_m,m), (v_m,m) .. (v_0,0)
    std::vector<std::pair<Word, int>> parts;
    for (int i = 0; i <= d.depth; ++i)
        if (!d.u_parts[i].empty()) parts.push_back({d.u_parts[i], i});
    for (int i = d.depth; i >= 0; --i)
        if (!d.v_parts[i].empty()) parts.push_back({d.v_parts[i], i});

    const int m0 = base_level(s, n);
    constexpr long long RAW_CAP = 256;
    std::map<int, PiState> pi_cache;
    std::map<int, std::vector<long long>> len_cache;
    auto lens_at = [&](int lvl) -> const std::vector<long long>& {
        auto it = len_cache.find(lvl);
        if (it == len_cache.end()) it = len_cache.emplace(lvl, image_lengths(s, lvl)).first;
        return it->second;
    };

    cplx value{0.0, 0.0};
    long long length = 0;
    std::string tail; // last <= n-1 symbols of the assembled word

    for (auto& [pw, lvl] : parts) {
        const std::vector<long long>& lens = lens_at(lvl);
        long long wlen = 0;
        for (char c : pw) wlen += lens[s.index_of(c)];

        cplx phi_part;
        if (wlen <= RAW_CAP || lvl < m0) {
            Word expanded = apply_power(s, pw, lvl);
            phi_part = static_cast<long long>(expanded.size()) >= n
                           ? phi_f(expanded, omega, f, lang)
                           : cplx{0.0, 0.0};
        } else {
            auto it = pi_cache.find(lvl);
            if (it == pi_cache.end())
                it = pi_cache.emplace(lvl, pi_recursive(lang, lvl, n, omega)).first;
            const PiState& st = it->second;
            // glue the letter images of beta^lvl(pw) with the cocycle
            cplx acc{0.0, 0.0};
            long long cum = 0;
            for (size_t j = 0; j < pw.size(); ++j) {
                int c = s.index_of(pw[j]);
                cplx col{0.0, 0.0};
                for (long long k = 0; k < lang.table(n).count(); ++k)
                    if (f.coeffs[k] != 0.0) col += f.coeffs[k] * st.cols[c][k];
                acc += unit_phase(omega, cum) * col;
                cum += lens[c];
                if (j + 1 < pw.size()) {
                    int cr = s.index_of(pw[j + 1]);
                    std::string lt = expand_suffix(s, pw[j], lvl, n - 1);
                    std::string rh = expand_prefix(s, pw[j + 1], lvl, n - 1);
                    acc += unit_phase(omega, cum) *
                           seam_f(lang, f, lt, rh, lens[c], lens[cr], omega);
                }
            }
            phi_part = acc;
        }

        std::string head = word_head(s, pw, lvl, n - 1);
        cplx seam = length > 0 && n > 1
                        ? seam_f(lang, f, tail, head, length, wlen, omega)
                        : cplx{0.0, 0.0};
        value += unit_phase(omega, length) * (phi_part + seam);
        // update the running tail
        if (wlen >= n - 1) {
            tail = word_tail(s, pw, lvl, n - 1);
        } else {
            std::string piece = word_tail(s, pw, lvl, n - 1);
            tail += piece;
            if (static_cast<int>(tail.size()) > n - 1)
                tail = tail.substr(tail.size() - (n - 1));
        }
        length += wlen;
    }

    AssembledPhi out;
    out.value = value;
    double N = static_cast<double>(x_factor.size());
    double logN = std::log(N) / std::log(3.0);
    double dw = int_dist(omega);
    out.bound = fit_constant * n * f.norm_L *
                (std::pow(N, 1.0 - c_prime * dw * dw) + 6.0 * logN * logN + 2.0 * logN + 1.0);
    return out;
}

} // namespace weakmix
