// chacon_map.cpp

#include "weakmix/chacon_map.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "weakmix/errors.hpp"
#include "weakmix/substitution.hpp"

namespace weakmix {

long long ChaconMap::height(int k) {
    if (k < 0) raise(Errc::config_invalid, "height: k < 0");
    return (pow3(k + 1) - 1) / 2;
}

Rat ChaconMap::width(int k) { return triadic(2, k + 1); }

Rat ChaconMap::spacer_lo(int k) {
    if (k < 1) raise(Errc::config_invalid, "spacer_lo: k < 1");
    return Rat(1) - triadic(1, k);
}

Rat ChaconMap::stage_measure(int k) { return Rat(1) - triadic(1, k + 1); }

TowerStage ChaconMap::build_stage(int k) const {
    if (k < 0 || k > 14) raise(Errc::stage_cap_exceeded, "build_stage: k out of materializable range");
    std::vector<Rat> los = {Rat(0)};
    for (int m = 1; m <= k; ++m) {
        Rat w = width(m);
        std::vector<Rat> next;
        next.reserve(los.size() * 3 + 1);
        for (const Rat& lo : los) next.push_back(lo);
        for (const Rat& lo : los) next.push_back(lo + w);
        next.push_back(spacer_lo(m));
        for (const Rat& lo : los) next.push_back(lo + w + w);
        los.swap(next);
    }
    TowerStage t;
    t.k = k;
    t.width = width(k);
    t.height = height(k);
    t.levels.reserve(los.size());
    for (const Rat& lo : los) t.levels.push_back({lo, lo + t.width});
    return t;
}

PiecewiseTranslation ChaconMap::stage_map(int k) const {
    TowerStage t = build_stage(k);
    PiecewiseTranslation pt;
    pt.stage = k;
    for (size_t i = 0; i + 1 < t.levels.size(); ++i)
        pt.pieces.push_back({t.levels[i], t.levels[i + 1].lo - t.levels[i].lo});
    return pt;
}

std::optional<ChaconMap::Loc> ChaconMap::locate(const Rat& x, int k) const {
    if (x < Rat(0) || x >= Rat(1)) return std::nullopt;
    if (k == 0) {
        if (x < triadic(2, 1)) return Loc{0, x};
        return std::nullopt;
    }
    auto inner = locate(x, k - 1);
    Rat w = width(k);
    if (inner) {
        long long h1 = height(k - 1);
        int t = 0;
        Rat off = inner->offset;
        if (off >= w + w) { t = 2; off = off - w - w; }
        else if (off >= w) { t = 1; off = off - w; }
        long long level = t == 0 ? inner->level
                        : t == 1 ? h1 + inner->level
                                 : 2 * h1 + 1 + inner->level;
        return Loc{level, off};
    }
    Rat slo = spacer_lo(k);
    if (x >= slo && x < slo + w) return Loc{2 * height(k - 1), x - slo};
    return std::nullopt;
}

Rat ChaconMap::position(int k, long long level, const Rat& offset) const {
    if (k == 0) {
        if (level != 0) raise(Errc::config_invalid, "position: bad level at stage 0");
        return offset;
    }
    long long h1 = height(k - 1);
    if (level == 2 * h1) return spacer_lo(k) + offset;
    Rat w = width(k);
    if (level < h1) return position(k - 1, level, offset);
    if (level < 2 * h1) return position(k - 1, level - h1, offset + w);
    return position(k - 1, level - 2 * h1 - 1, offset + w + w);
}

Rat ChaconMap::apply(const Rat& x, MapDirection dir) const {
    if (x < Rat(0) || x >= Rat(1)) raise(Errc::undefined_point, "apply: x outside [0,1)");
    for (int k = 1; k <= max_stage_; ++k) {
        auto loc = locate(x, k);
        if (!loc) continue;
        if (dir == MapDirection::forward) {
            if (loc->level < height(k) - 1) return position(k, loc->level + 1, loc->offset);
        } else {
            if (loc->level > 0) return position(k, loc->level - 1, loc->offset);
        }
    }
    raise(Errc::undefined_point, "apply: image undefined below the stage cap");
}

std::string ChaconMap::code_orbit(const Rat& x, long long n) const {
    std::string out;
    out.reserve(n);
    Rat cur = x;
    Rat two_thirds = triadic(2, 1);
    for (long long i = 0; i < n; ++i) {
        if (cur < Rat(0) || cur >= Rat(1)) raise(Errc::undefined_point, "code_orbit: orbit left [0,1)");
        out.push_back(cur < two_thirds ? '0' : '1');
        if (i + 1 < n) cur = apply(cur, MapDirection::forward);
    }
    return out;
}

// --- interval sets ----------------------------------------------------------

Rat IntervalSet::total_measure() const {
    Rat acc(0);
    for (const auto& p : parts) acc = acc + p.length();
    return acc;
}

IntervalSet IntervalSet::of(std::vector<RationalInterval> raw) {
    std::vector<RationalInterval> keep;
    for (auto& p : raw)
        if (p.lo < p.hi) keep.push_back(p);
    std::sort(keep.begin(), keep.end(),
              [](const RationalInterval& a, const RationalInterval& b) { return a.lo < b.lo; });
    IntervalSet out;
    for (auto& p : keep) {
        if (!out.parts.empty() && p.lo <= out.parts.back().hi) {
            if (out.parts.back().hi < p.hi) out.parts.back().hi = p.hi;
        } else {
            out.parts.push_back(p);
        }
    }
    return out;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet out;
    size_t i = 0, j = 0;
    while (i < a.parts.size() && j < b.parts.size()) {
        Rat lo = a.parts[i].lo < b.parts[j].lo ? b.parts[j].lo : a.parts[i].lo;
        Rat hi = a.parts[i].hi < b.parts[j].hi ? a.parts[i].hi : b.parts[j].hi;
        if (lo < hi) out.parts.push_back({lo, hi});
        if (a.parts[i].hi < b.parts[j].hi) ++i; else ++j;
    }
    return out;
}

std::string IntervalSet::to_json_text() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : parts) {
        long long n_lo, n_hi;
        int e_lo, e_hi;
        if (!is_triadic(p.lo, &n_lo, &e_lo) || !is_triadic(p.hi, &n_hi, &e_hi))
            raise(Errc::config_invalid, "IntervalSet: endpoint is not triadic");
        j.push_back({n_lo, e_lo, n_hi, e_hi});
    }
    return j.dump();
}

IntervalSet IntervalSet::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<RationalInterval> raw;
    for (const auto& row : j)
        raw.push_back({triadic(row.at(0).get<long long>(), row.at(1).get<int>()),
                       triadic(row.at(2).get<long long>(), row.at(3).get<int>())});
    return IntervalSet::of(std::move(raw));
}

IntervalSet ChaconMap::base_interval(int k) {
    IntervalSet s;
    s.parts.push_back({Rat(0), width(k)});
    return s;
}

void ChaconMap::map_piece(std::vector<RationalInterval>& out, RationalInterval piece, int stage,
                          MapDirection dir) const {
    if (stage > max_stage_)
        raise(Errc::stage_cap_exceeded, "map_interval_set: piece not resolvable below the stage cap");
    Rat w = width(stage);
    long long h = height(stage);
    while (piece.lo < piece.hi) {
        auto loc = locate(piece.lo, stage);
        if (!loc) {
            // unused tail [1 - 3^-(stage+1), 1): only resolvable deeper
            map_piece(out, piece, stage + 1, dir);
            return;
        }
        Rat level_hi = piece.lo - loc->offset + w;
        RationalInterval chunk{piece.lo, piece.hi < level_hi ? piece.hi : level_hi};
        bool mapped = dir == MapDirection::forward ? loc->level < h - 1 : loc->level > 0;
        if (mapped) {
            long long tgt = dir == MapDirection::forward ? loc->level + 1 : loc->level - 1;
            Rat img_lo = position(stage, tgt, loc->offset);
            out.push_back({img_lo, img_lo + chunk.length()});
        } else {
            map_piece(out, chunk, stage + 1, dir);
        }
        piece.lo = chunk.hi;
    }
}

IntervalSet ChaconMap::map_interval_set(const IntervalSet& s, long long n) const {
    MapDirection dir = n >= 0 ? MapDirection::forward : MapDirection::inverse;
    long long steps = n >= 0 ? n : -n;
    IntervalSet cur = s;
    for (long long i = 0; i < steps; ++i) {
        std::vector<RationalInterval> imgs;
        for (const auto& p : cur.parts) map_piece(imgs, p, 1, dir);
        cur = IntervalSet::of(std::move(imgs));
    }
    return cur;
}

// --- empty intersection times -----------------------------------------------

namespace {

// heights of the base-level copies of A_k inside the stage-M tower
std::vector<long long> copy_heights(int k, int M) {
    std::vector<long long> P = {0};
    for (int m = k; m < M; ++m) {
        long long hm = ChaconMap::height(m);
        std::vector<long long> nxt;
        nxt.reserve(P.size() * 3);
        for (long long p : P) nxt.push_back(p);
        for (long long p : P) nxt.push_back(p + hm);
        for (long long p : P) nxt.push_back(p + 2 * hm + 1);
        std::sort(nxt.begin(), nxt.end());
        P.swap(nxt);
    }
    return P;
}

} // namespace

bool ChaconMap::intersection_time(int k, long long n) const {
    if (n < 0) n = -n;
    if (n == 0) return true;
    // levels k .. m_top with h_{m_top - 1} > n (one extra for stabilization)
    int m_top = k;
    while (height(m_top) <= n) ++m_top;
    ++m_top;
    // R[m] = sum_{j=k}^{m} (2 h_j + 1): reach of the levels up to m
    std::vector<long long> reach(m_top + 1, 0);
    long long acc = 0;
    for (int m = k; m <= m_top; ++m) {
        acc += 2 * height(m) + 1;
        reach[m] = acc;
    }
    std::vector<long long> targets = {n};
    for (int m = m_top; m >= k; --m) {
        long long hm = height(m);
        const long long eps[7] = {0, hm, -hm, hm + 1, -(hm + 1), 2 * hm + 1, -(2 * hm + 1)};
        long long below = m > k ? reach[m - 1] : 0;
        std::vector<long long> next;
        next.reserve(targets.size() * 3);
        for (long long t : targets)
            for (long long e : eps) {
                long long r = t - e;
                if (r <= below && r >= -below) next.push_back(r);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        targets.swap(next);
        if (targets.empty()) return false;
    }
    return std::binary_search(targets.begin(), targets.end(), 0LL);
}

std::vector<long long> ChaconMap::empty_intersection_times(int k, long long N) const {
    if (k < 0 || N < 1) raise(Errc::config_invalid, "empty_intersection_times: bad arguments");
    int m0 = k;
    while (height(m0) <= N) ++m0;
    int M = m0 + 2;
    std::vector<long long> out;
    double est_positions = std::pow(3.0, M - k);
    double density = est_positions / static_cast<double>(height(M));
    double est_ops = est_positions * static_cast<double>(N) * density;
    if (est_positions <= 2e7 && est_ops <= 4e8) {
        std::vector<long long> P = copy_heights(k, M);
        std::vector<uint8_t> hit(static_cast<size_t>(N) + 1, 0);
        for (size_t i = 0; i < P.size(); ++i)
            for (size_t j = i + 1; j < P.size(); ++j) {
                long long d = P[j] - P[i];
                if (d > N) break;
                hit[static_cast<size_t>(d)] = 1;
            }
        for (long long n = 1; n <= N; ++n)
            if (!hit[static_cast<size_t>(n)]) out.push_back(n);
    } else {
        for (long long n = 1; n <= N; ++n)
            if (!intersection_time(k, n)) out.push_back(n);
    }
    return out;
}

// --- coding cells ------------------------------------------------------------

std::string tower_word(int k) {
    return fixed_point_prefix(SubstitutionSystem::chacon_alpha(), '0', ChaconMap::height(k));
}

ChaconMap::CellResult ChaconMap::coding_cell(const std::string& w, int stage) const {
    if (w.empty()) raise(Errc::config_invalid, "coding_cell: empty word");
    const int n = static_cast<int>(w.size());
    int m = stage;
    if (m < 0) {
        m = 1;
        while (height(m) < std::max<long long>(8LL * n, 40)) ++m;
    }
    if (m > 14) raise(Errc::stage_cap_exceeded, "coding_cell: stage too deep to materialize");
    std::string word = tower_word(m);
    std::vector<RationalInterval> raw;
    Rat w_m = width(m);
    long long hits = 0;
    for (long long i = 0; i + n <= static_cast<long long>(word.size()); ++i) {
        if (word.compare(i, n, w) == 0) {
            Rat lo = position(m, i, Rat(0));
            raw.push_back({lo, lo + w_m});
            ++hits;
        }
    }
    if (hits == 0) raise(Errc::empty_cell, "coding_cell: word is not a factor: " + w);
    CellResult res;
    res.cell = IntervalSet::of(std::move(raw));
    res.undecided = Rat(n - 1) * w_m + triadic(1, m + 1);
    res.stage = m;
    return res;
}

ChaconMap::CellResult ChaconMap::beta_coding_cell(const std::string& w_beta, int stage) const {
    if (w_beta.empty()) raise(Errc::config_invalid, "beta_coding_cell: empty word");
    const int n = static_cast<int>(w_beta.size());
    int m = stage;
    if (m < 0) {
        m = 1;
        while (height(m) < std::max<long long>(8LL * n, 40)) ++m;
    }
    if (m > 14) raise(Errc::stage_cap_exceeded, "beta_coding_cell: stage too deep to materialize");
    std::string word = tower_word(m);
    // recode with the one-step predecessor available from height 1 upward
    std::string recoded = word;
    for (size_t i = 1; i < recoded.size(); ++i)
        if (word[i] == '0' && word[i - 1] == '1') recoded[i] = '2';
    std::vector<RationalInterval> raw;
    Rat w_m = width(m);
    long long hits = 0;
    for (long long i = 1; i + n <= static_cast<long long>(recoded.size()); ++i) {
        if (recoded.compare(i, n, w_beta) == 0) {
            Rat lo = position(m, i, Rat(0));
            raw.push_back({lo, lo + w_m});
            ++hits;
        }
    }
    if (hits == 0) raise(Errc::empty_cell, "beta_coding_cell: word is not a factor: " + w_beta);
    CellResult res;
    res.cell = IntervalSet::of(std::move(raw));
    res.undecided = Rat(n) * w_m + triadic(1, m + 1);
    res.stage = m;
    return res;
}

} // namespace weakmix
