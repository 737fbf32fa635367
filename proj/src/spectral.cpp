// spectral.cpp

#include "weakmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace weakmix {

namespace {

double log3(double x) { return std::log(x) / std::log(3.0); }

struct KahanD {
    double sum = 0, comp = 0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace

// --- OrbitEnsemble ------------------------------------------------------------

namespace {

std::vector<Rat> midpoint_grid(int q) {
    std::vector<Rat> pts;
    long long M = pow3(q);
    pts.reserve(M);
    for (long long i = 0; i < M; ++i) pts.push_back(Rat(2 * i + 1, 2 * M));
    return pts;
}

} // namespace

OrbitEnsemble::OrbitEnsemble(const ChaconMap& map, int q) : OrbitEnsemble(map, midpoint_grid(q)) {}

OrbitEnsemble::OrbitEnsemble(const ChaconMap& map, const std::vector<Rat>& points) : map_(map) {
    table_.push_back({0.0}); // stage 0
    states_.reserve(points.size());
    off_d_.reserve(points.size());
    for (const Rat& x : points) {
        bool placed = false;
        for (int m = 0; m <= 13 && !placed; ++m) {
            auto loc = map_.locate(x, m);
            if (loc) {
                ensure_stage(m);
                states_.push_back({m, loc->level, loc->offset});
                off_d_.push_back(loc->offset.to_double());
                placed = true;
            }
        }
        if (!placed) raise(Errc::undefined_point, "OrbitEnsemble: point not in any tower");
    }
}

void OrbitEnsemble::ensure_stage(int m) {
    if (m > 13) raise(Errc::stage_cap_exceeded, "OrbitEnsemble: stage table cap");
    while (static_cast<int>(table_.size()) <= m) {
        int k = static_cast<int>(table_.size());
        const std::vector<double>& prev = table_[k - 1];
        double w = ChaconMap::width(k).to_double();
        std::vector<double> cur;
        cur.reserve(prev.size() * 3 + 1);
        for (double lo : prev) cur.push_back(lo);
        for (double lo : prev) cur.push_back(lo + w);
        cur.push_back(ChaconMap::spacer_lo(k).to_double());
        for (double lo : prev) cur.push_back(lo + 2 * w);
        table_.push_back(std::move(cur));
    }
}

void OrbitEnsemble::escalate(State& st, size_t i) {
    // st is at the top level of its stage; rewrite it one stage deeper
    Rat w_next = ChaconMap::width(st.stage + 1);
    long long h = ChaconMap::height(st.stage);
    int t = 2;
    if (st.off < w_next) t = 0;
    else if (st.off < w_next + w_next) t = 1;
    if (t == 1) st.off = st.off - w_next;
    if (t == 2) st.off = st.off - w_next - w_next;
    st.level = t == 0 ? h - 1 : t == 1 ? 2 * h - 1 : 3 * h;
    st.stage += 1;
    ensure_stage(st.stage);
    off_d_[i] = st.off.to_double();
}

void OrbitEnsemble::step() {
    for (size_t i = 0; i < states_.size(); ++i) {
        State& st = states_[i];
        while (st.level == ChaconMap::height(st.stage) - 1) escalate(st, i);
        ++st.level;
    }
}

Rat OrbitEnsemble::exact_position(size_t i) const {
    return map_.position(states_[i].stage, states_[i].level, states_[i].off);
}

// --- discrepancy ---------------------------------------------------------------

ExperimentReport discrepancy(const Language& lang, const std::vector<long long>& N_list,
                             const DiscrepancyOptions& opt) {
    const SubstitutionSystem& s = lang.subst;
    long long maxN = *std::max_element(N_list.begin(), N_list.end());
    long long max_start = *std::max_element(opt.starts.begin(), opt.starts.end());
    Word prefix = fixed_point_prefix(s, s.alphabet[0], maxN + max_start + opt.n_max + 2);

    // occurrence counts are captured only at the window endpoints we need
    std::vector<long long> cuts;
    for (long long j : opt.starts)
        for (long long N : N_list) {
            cuts.push_back(j);
            cuts.push_back(j + N);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> D(N_list.size(), 0.0);
    for (int n = 1; n <= opt.n_max; ++n) {
        const FactorTable& t = lang.table(n);
        const std::vector<double>& mu = lang.freq(n);
        for (long long k = 0; k < t.count(); ++k) {
            const Word& w = t.factors[k];
            std::vector<long long> cnt_at(cuts.size(), 0);
            long long cnt = 0;
            size_t ci = 0;
            for (long long i = 0; i + n <= static_cast<long long>(prefix.size()); ++i) {
                while (ci < cuts.size() && cuts[ci] == i) cnt_at[ci++] = cnt;
                if (prefix.compare(i, n, w) == 0) ++cnt;
            }
            while (ci < cuts.size()) cnt_at[ci++] = cnt;
            auto at = [&](long long pos) {
                size_t idx = std::lower_bound(cuts.begin(), cuts.end(), pos) - cuts.begin();
                return cnt_at[idx];
            };
            for (size_t ni = 0; ni < N_list.size(); ++ni)
                for (long long j : opt.starts) {
                    double dev = std::abs(static_cast<double>(at(j + N_list[ni]) - at(j)) -
                                          static_cast<double>(N_list[ni]) * mu[k]);
                    D[ni] = std::max(D[ni], dev);
                }
        }
    }

    ExperimentReport rep;
    rep.name = "discrepancy";
    double fitted = 0;
    for (size_t i = 0; i < N_list.size(); ++i) {
        rep.series.push_back({static_cast<double>(N_list[i]), D[i], 0.0});
        double l = log3(static_cast<double>(N_list[i]));
        fitted = std::max(fitted, D[i] / (l * l));
    }
    rep.fitted["C_disc"] = {fitted, "N in [" + std::to_string(N_list.front()) + ", " +
                                        std::to_string(N_list.back()) + "]"};
    // envelope: the normalized ratio on the top half stays within twice the
    // bottom-half maximum
    double lo_max = 0, hi_max = 0;
    for (size_t i = 0; i < N_list.size(); ++i) {
        double l = log3(static_cast<double>(N_list[i]));
        double r = D[i] / (l * l);
        if (i < N_list.size() / 2) lo_max = std::max(lo_max, r);
        else hi_max = std::max(hi_max, r);
    }
    rep.flags["envelope_bounded"] = hi_max <= 2.0 * lo_max;
    rep.metadata["version"] = kLibraryVersion;
    return rep;
}

// --- twisted Birkhoff sums ------------------------------------------------------

cplx twisted_birkhoff(const Word& x_symbols, const CylFunction& f, const Language& lang,
                      long long N, double omega) {
    const int n = f.n;
    if (static_cast<long long>(x_symbols.size()) < N + n - 1)
        raise(Errc::word_too_short, "twisted_birkhoff: source too short");
    const FactorTable& t = lang.table(n);
    cplx acc{0.0, 0.0};
    for (long long k = 0; k < N; ++k) {
        int idx = t.index_of(x_symbols.substr(k, n));
        if (f.coeffs[idx] != 0.0)
            acc += f.coeffs[idx] * std::conj(unit_phase(omega, k)); // e^{+2 pi i k w}
    }
    return acc;
}

cplx twisted_birkhoff(const ChaconMap& map, const Rat& x0, const IntervalObservable& f,
                      long long N, double omega) {
    cplx acc{0.0, 0.0};
    Rat x = x0;
    for (long long k = 0; k < N; ++k) {
        acc += f.fn(x.to_double()) * std::conj(unit_phase(omega, k));
        if (k + 1 < N) x = map.apply(x);
    }
    return acc;
}

// --- spectral density ------------------------------------------------------------

double SpectralGrid::grid_mean() const {
    KahanD acc;
    for (double v : values) acc.add(v);
    return acc.sum / static_cast<double>(values.size());
}

SpectralGrid spectral_density(const Language& lang, const CylFunction& f, long long N, int M,
                              const SpectralOptions& opt) {
    if (M < 2 * N)
        raise(Errc::config_invalid, "spectral_density: grid must satisfy M >= 2N");
    const SubstitutionSystem& s = lang.subst;
    const int n = f.n;
    long long span = N + n + 2187LL * opt.sample_count;
    Word prefix = fixed_point_prefix(s, s.alphabet[0], span);
    const FactorTable& t = lang.table(n);
    // f along the fixed point
    std::vector<double> F(prefix.size() - n + 1);
    for (size_t i = 0; i + n <= prefix.size(); ++i)
        F[i] = f.coeffs[t.index_of(prefix.substr(i, n))];

    SpectralGrid grid;
    grid.N = N;
    grid.M = M;
    grid.values.assign(M, 0.0);
    for (int j = 0; j < M; ++j) {
        double omega = static_cast<double>(j) / M;
        KahanD mean;
        for (int sidx = 0; sidx < opt.sample_count; ++sidx) {
            long long start = 2187LL * sidx;
            cplx acc{0.0, 0.0};
            for (long long k = 0; k < N; ++k)
                if (F[start + k] != 0.0) acc += F[start + k] * std::conj(unit_phase(omega, k));
            mean.add(std::norm(acc));
        }
        grid.values[j] = mean.sum / (opt.sample_count * static_cast<double>(N));
    }
    return grid;
}

AutocorrDensity autocorr_density(const Language& lang, const CylFunction& f, long long N,
                                 const SpectralOptions& opt) {
    const SubstitutionSystem& s = lang.subst;
    const int n = f.n;
    long long W = opt.autocorr_window;
    Word prefix = fixed_point_prefix(s, s.alphabet[0], W + N + n + 1);
    const FactorTable& t = lang.table(n);
    std::vector<double> F(W + N);
    for (long long i = 0; i < W + N; ++i) F[i] = f.coeffs[t.index_of(prefix.substr(i, n))];
    AutocorrDensity ac;
    ac.R.assign(N, 0.0);
    for (long long d = 0; d < N; ++d) {
        KahanD acc;
        for (long long i = 0; i < W; ++i) acc.add(F[i] * F[i + d]);
        ac.R[d] = acc.sum / static_cast<double>(W);
    }
    return ac;
}

double AutocorrDensity::value(long long N, double omega) const {
    if (N > static_cast<long long>(R.size()))
        raise(Errc::config_invalid, "AutocorrDensity: N beyond the stored lags");
    KahanD acc;
    acc.add(R[0]);
    for (long long d = 1; d < N; ++d) {
        double weight = 1.0 - static_cast<double>(d) / static_cast<double>(N);
        acc.add(2.0 * weight * R[d] * std::conj(unit_phase(omega, d)).real());
    }
    return acc.sum;
}

BallBoundReport ball_bound_diagnostic(const Language& lang, const CylFunction& f, double omega,
                                      long long N, long long M_fine) {
    if (M_fine <= 0) M_fine = 32 * N;
    AutocorrDensity ac = autocorr_density(lang, f, M_fine);
    long long M_grid = 2 * M_fine;
    double radius = 1.0 / (2.0 * static_cast<double>(N));
    KahanD ball, total;
    for (long long j = 0; j < M_grid; ++j) {
        double oj = static_cast<double>(j) / static_cast<double>(M_grid);
        double v = ac.value(M_fine, oj);
        total.add(v);
        double dist = std::abs(oj - omega);
        dist = std::min(dist, 1.0 - dist);
        if (dist <= radius) ball.add(v);
    }
    BallBoundReport rep;
    rep.l2_sq = ac.l2_sq();
    rep.total_mass = total.sum / static_cast<double>(M_grid);
    rep.proxy_mass = ball.sum / static_cast<double>(M_grid);
    rep.bound = (M_PI * M_PI) / (4.0 * static_cast<double>(N)) * ac.value(N, omega);
    rep.ratio = rep.bound > 0 ? rep.proxy_mass / rep.bound : 0.0;
    return rep;
}

// --- correlations -----------------------------------------------------------------

namespace {

CorrelationValue correlation_subshift(const Language& lang, const CylFunction& f,
                                      const CylFunction& g, long long k, long long W) {
    const SubstitutionSystem& s = lang.subst;
    int span_n = std::max(f.n, g.n);
    Word prefix = fixed_point_prefix(s, s.alphabet[0], W + k + span_n + 1);
    const FactorTable& tf = lang.table(f.n);
    const FactorTable& tg = lang.table(g.n);
    KahanD prod, fm, gm;
    for (long long i = 0; i < W; ++i) {
        double fv = f.coeffs[tf.index_of(prefix.substr(i + k, f.n))];
        double gv = g.coeffs[tg.index_of(prefix.substr(i, g.n))];
        prod.add(fv * gv);
        fm.add(fv);
        gm.add(gv);
    }
    CorrelationValue out;
    double mean_f = fm.sum / W, mean_g = gm.sum / W;
    out.value = prod.sum / W - mean_f * mean_g;
    double l = log3(static_cast<double>(W));
    out.err_bar = 50.0 * l * l * f.sup_norm * g.sup_norm / static_cast<double>(W);
    return out;
}

CorrelationValue correlation_interval(const ChaconMap& map, const IntervalObservable& f,
                                      const IntervalObservable& g, long long k, int q) {
    OrbitEnsemble ens(map, q);
    const size_t M = ens.size();
    std::vector<double> g0(M);
    KahanD fm, gm;
    for (size_t i = 0; i < M; ++i) {
        double x = ens.position(i);
        g0[i] = g.fn(x);
        gm.add(g0[i]);
        fm.add(f.fn(x));
    }
    for (long long s = 0; s < k; ++s) ens.step();
    KahanD prod;
    for (size_t i = 0; i < M; ++i) prod.add(f.fn(ens.position(i)) * g0[i]);
    CorrelationValue out;
    double mean_f = fm.sum / M, mean_g = gm.sum / M;
    out.value = prod.sum / M - mean_f * mean_g;
    out.err_bar = (f.lip_const * g.sup_norm + g.lip_const * f.sup_norm) / M +
                  (4.0 * k + 40.0) * f.sup_norm * g.sup_norm / M;
    return out;
}

} // namespace

CorrelationValue correlation(const ChaconMap& map, const Language& lang, const Observable& f,
                             const Observable& g, long long k, const QuadratureSpec& quad) {
    if (f.kind != g.kind)
        raise(Errc::config_invalid, "correlation: observables live on different spaces");
    if (f.kind == Observable::Kind::cylindrical)
        return correlation_subshift(lang, *f.cyl, *g.cyl, k, quad.subshift_window);
    return correlation_interval(map, *f.interval, *g.interval, k, quad.grid_exponent);
}

// --- weak mixing average ------------------------------------------------------------

ExperimentReport weakmix_average(const ChaconMap& map, const IntervalObservable& f,
                                 const IntervalObservable& g, const std::vector<long long>& N_list,
                                 const WeakMixOptions& opt, std::vector<double>* series_out) {
    std::vector<long long> Ns = N_list;
    std::sort(Ns.begin(), Ns.end());
    long long N_max = Ns.back();

    OrbitEnsemble ens(map, opt.grid_exponent);
    const size_t M = ens.size();
    std::vector<double> g0(M);
    KahanD fm, gm, f2, g2;
    for (size_t i = 0; i < M; ++i) {
        double x = ens.position(i);
        g0[i] = g.fn(x);
        double fv = f.fn(x);
        fm.add(fv);
        f2.add(fv * fv);
        gm.add(g0[i]);
        g2.add(g0[i] * g0[i]);
    }
    const double mean_f = fm.sum / M, mean_g = gm.sum / M;
    const double norm2_f = std::sqrt(f2.sum / M), norm2_g = std::sqrt(g2.sum / M);

    ExperimentReport rep;
    rep.name = "weakmix_average";
    KahanD acc; // running sum of squared correlation deviations
    size_t next = 0;
    std::vector<double> values;
    for (long long k = 0; k < N_max; ++k) {
        if (k > 0) ens.step();
        KahanD prod;
        for (size_t i = 0; i < M; ++i) prod.add(f.fn(ens.position(i)) * g0[i]);
        double d = prod.sum / M - mean_f * mean_g;
        acc.add(d * d);
        if (series_out) series_out->push_back(d * d);
        while (next < Ns.size() && k + 1 == Ns[next]) {
            values.push_back(acc.sum / static_cast<double>(Ns[next]));
            rep.series.push_back({static_cast<double>(Ns[next]), values.back(), 0.0});
            ++next;
        }
    }

    double K_C = 0;
    double norms = f.norm_L() * norm2_f * norm2_g * norm2_g;
    if (norms > 0)
        for (size_t i = 0; i < Ns.size(); ++i)
            K_C = std::max(K_C, values[i] *
                                    std::pow(log3(static_cast<double>(Ns[i])), 1.0 / 6.0) / norms);
    rep.fitted["K_C"] = {K_C, "N in [" + std::to_string(Ns.front()) + ", " +
                                  std::to_string(Ns.back()) + "]"};
    rep.fitted["norm_L_f"] = {f.norm_L(), "exact"};
    rep.fitted["norm2_f"] = {norm2_f, "quadrature"};
    rep.fitted["norm2_g"] = {norm2_g, "quadrature"};
    rep.flags["endpoint_decay"] = values.back() < values.front();
    bool mono = true;
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[i - 1]) mono = false;
    rep.flags["monotone_nonincreasing"] = mono;
    rep.metadata["version"] = kLibraryVersion;
    rep.metadata["grid"] = "3^" + std::to_string(opt.grid_exponent) + " midpoints";
    return rep;
}

ExperimentReport weakmix_average(const ChaconMap& map, const Language& lang, const Observable& f,
                                 const Observable& g, const std::vector<long long>& N_list,
                                 const WeakMixOptions& opt, std::vector<double>* series_out) {
    if (f.kind != g.kind)
        raise(Errc::config_invalid, "weakmix_average: observables live on different spaces");
    if (f.kind == Observable::Kind::interval)
        return weakmix_average(map, *f.interval, *g.interval, N_list, opt, series_out);

    const CylFunction& fc = *f.cyl;
    const CylFunction& gc = *g.cyl;
    std::vector<long long> Ns = N_list;
    std::sort(Ns.begin(), Ns.end());
    const long long N_max = Ns.back();
    const long long W = opt.subshift_window;
    const SubstitutionSystem& s = lang.subst;
    int span_n = std::max(fc.n, gc.n);
    Word prefix = fixed_point_prefix(s, s.alphabet[0], W + N_max + span_n + 1);
    const FactorTable& tf = lang.table(fc.n);
    const FactorTable& tg = lang.table(gc.n);
    std::vector<double> F(W + N_max), G(W);
    for (long long i = 0; i < W + N_max; ++i)
        F[i] = fc.coeffs[tf.index_of(prefix.substr(i, fc.n))];
    KahanD fmean, gmean;
    for (long long i = 0; i < W; ++i) {
        G[i] = gc.coeffs[tg.index_of(prefix.substr(i, gc.n))];
        gmean.add(G[i]);
        fmean.add(F[i]);
    }
    const double mean_f = fmean.sum / W, mean_g = gmean.sum / W;

    ExperimentReport rep;
    rep.name = "weakmix_average_subshift";
    KahanD acc;
    size_t next = 0;
    std::vector<double> values;
    for (long long k = 0; k < N_max; ++k) {
        KahanD prod;
        for (long long i = 0; i < W; ++i) prod.add(F[i + k] * G[i]);
        double d = prod.sum / W - mean_f * mean_g;
        acc.add(d * d);
        if (series_out) series_out->push_back(d * d);
        while (next < Ns.size() && k + 1 == Ns[next]) {
            values.push_back(acc.sum / static_cast<double>(Ns[next]));
            rep.series.push_back({static_cast<double>(Ns[next]), values.back(), 0.0});
            ++next;
        }
    }
    double K_C = 0;
    double norms = fc.norm_L * std::sqrt(fc.norm2_sq) * gc.norm2_sq;
    if (norms > 0)
        for (size_t i = 0; i < Ns.size(); ++i)
            K_C = std::max(K_C, values[i] *
                                    std::pow(log3(static_cast<double>(Ns[i])), 1.0 / 6.0) / norms);
    rep.fitted["K_C"] = {K_C, "N in [" + std::to_string(Ns.front()) + ", " +
                                  std::to_string(Ns.back()) + "]"};
    rep.flags["endpoint_decay"] = values.back() < values.front();
    rep.metadata["version"] = kLibraryVersion;
    rep.metadata["window"] = std::to_string(W);
    return rep;
}

// --- cylindrical approximation -------------------------------------------------------

CylFunction cyl_approximation(const ChaconMap& map, const Language& lang,
                              const IntervalObservable& f, int n) {
    const FactorTable& t = lang.table(n);
    int stage = 1;
    while (ChaconMap::height(stage) < 120LL * n && stage < 11) ++stage;
    std::vector<double> coeffs(t.count(), 0.0);
    for (long long k = 0; k < t.count(); ++k) {
        auto cell = map.beta_coding_cell(t.factors[k], stage);
        KahanD integral;
        double covered = 0;
        for (const auto& part : cell.cell.parts) {
            double lo = part.lo.to_double(), len = part.length().to_double();
            // three-point rule per component
            integral.add(len * (f.fn(lo + len / 6.0) + f.fn(lo + len / 2.0) +
                                f.fn(lo + 5.0 * len / 6.0)) /
                         3.0);
            covered += len;
        }
        coeffs[k] = covered > 0 ? integral.sum / covered : 0.0;
    }
    return CylFunction::make(lang, n, std::move(coeffs));
}

// --- lower bound experiment ------------------------------------------------------------

ExperimentReport lower_bound_experiment(const ChaconMap& map, int k,
                                        const std::vector<long long>& N_list,
                                        const LowerBoundOptions& opt) {
    std::vector<long long> Ns = N_list;
    std::sort(Ns.begin(), Ns.end());
    const double w = ChaconMap::width(k).to_double();
    const double amp = opt.bump_amplitude;
    // raised cosine amp * sin^2(pi x / w) on A_k = [0, w)
    const double int_f = amp * w / 2.0;
    const double sup_f = amp;
    const double max_df = amp * M_PI / w;
    const double norm2_f = amp * std::sqrt(3.0 * w / 8.0);
    const double norm_L_f = amp * (1.0 + M_PI / w);
    const double mu_A = w;        // = int g = ||g||_2^2
    const double norm2_g = std::sqrt(w);

    std::vector<long long> E = map.empty_intersection_times(k, Ns.back() - 1);

    ExperimentReport rep;
    rep.name = "lower_bound";
    bool bump_all = true;
    double c_low = 0;
    for (long long N : Ns) {
        long long count = std::upper_bound(E.begin(), E.end(), N - 1) - E.begin();
        double sum = static_cast<double>(count) * int_f * mu_A; // each term exact
        double lg = std::log(static_cast<double>(N));
        double denom = (static_cast<double>(N) / (lg * lg)) * std::sqrt(norm_L_f) *
                       std::sqrt(norm2_f) * norm2_g;
        double ratio = sum / denom;
        rep.series.push_back({static_cast<double>(N), ratio, 0.0});
        c_low = std::max(c_low, ratio);
        bool bump_ok = lg * int_f >= (max_df + sup_f) / 100.0;
        bump_all = bump_all && bump_ok;
    }
    rep.fitted["C_lower"] = {c_low, "N in [" + std::to_string(Ns.front()) + ", " +
                                        std::to_string(Ns.back()) + "]"};
    rep.fitted["E_count_at_max_N"] = {static_cast<double>(E.size()), "exact"};
    rep.flags["bump_condition"] = bump_all;

    // exact disjointness cross-check through interval algebra where the image
    // stays a finite union (n below the climb height h_k)
    bool exact_zero = true;
    IntervalSet a = ChaconMap::base_interval(k);
    for (long long n : E) {
        if (n >= ChaconMap::height(k)) break;
        IntervalSet img = map.map_interval_set(a, n);
        if (!(intersect(img, a).total_measure() == Rat(0))) exact_zero = false;
    }
    rep.flags["exact_vanishing"] = exact_zero;
    rep.metadata["version"] = kLibraryVersion;
    rep.metadata["k"] = std::to_string(k);
    return rep;
}

// --- exceptional sets ---------------------------------------------------------------------

ExceptionalSet exceptional_set(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        raise(Errc::config_invalid, "exceptional_set: size mismatch");
    for (size_t i = 1; i < b.size(); ++i)
        if (b[i] > b[i - 1] + 1e-15)
            raise(Errc::config_invalid, "exceptional_set: b must be nonincreasing");
    KahanD run;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) raise(Errc::config_invalid, "exceptional_set: negative a");
        run.add(a[i]);
        if (run.sum / static_cast<double>(i + 1) > b[i] + 1e-12)
            raise(Errc::cesaro_bound_violated, "exceptional_set: Cesaro bound fails at N=" +
                                                   std::to_string(i + 1));
    }
    ExceptionalSet out;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > std::sqrt(b[i])) out.J.push_back(static_cast<long long>(i));

    out.report.name = "exceptional_set";
    bool markov = true;
    size_t ji = 0;
    for (size_t N = 1; N <= a.size(); ++N) {
        while (ji < out.J.size() && out.J[ji] < static_cast<long long>(N)) ++ji;
        double density = static_cast<double>(ji) / static_cast<double>(N);
        double guarantee = std::sqrt(b[N - 1]);
        if (density > guarantee + 1e-12) markov = false;
        // log-spaced checkpoints in the report
        if ((N & (N - 1)) == 0 || N == a.size())
            out.report.series.push_back({static_cast<double>(N), density, guarantee});
    }
    out.report.flags["markov_guarantee"] = markov;
    out.report.metadata["version"] = kLibraryVersion;
    return out;
}

} // namespace weakmix
