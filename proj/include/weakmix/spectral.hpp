// spectral.hpp — the measurement layer: discrepancy, twisted Birkhoff sums,
// spectral density G_N, correlation sweeps, weak-mixing averages, cylindrical
// approximation, lower-bound experiments and exceptional sets.
//
// Twisted sums use the sign convention S_N^x(f, w) = sum_k e^{+2 pi i k w}
// f(T^k x); on subshift factors |S_N| therefore equals |phi_f|.

#pragma once

#include <functional>
#include <optional>

#include "weakmix/chacon_map.hpp"
#include "weakmix/prefix_suffix.hpp"
#include "weakmix/report.hpp"
#include "weakmix/twisted.hpp"

namespace weakmix {

struct IntervalObservable {
    std::function<double(double)> fn;
    double sup_norm = 0;
    double lip_const = 0;
    bool zero_mean = false;
    double norm_L() const { return sup_norm + lip_const; }
};

// One of the two observable kinds of the toolkit.
struct Observable {
    enum class Kind { cylindrical, interval } kind;
    std::optional<CylFunction> cyl;
    std::optional<IntervalObservable> interval;
    static Observable cylindrical(CylFunction f) {
        return {Kind::cylindrical, std::move(f), std::nullopt};
    }
    static Observable on_interval(IntervalObservable f) {
        return {Kind::interval, std::nullopt, std::move(f)};
    }
};

// --- exact orbits of the midpoint quadrature grid ---------------------------
//
// Points are carried as (stage, level, exact offset); a step moves one level
// up, escalating the representation at tower tops.  Offsets never change
// except by exact subtraction at escalations, so positions carry no drift.
class OrbitEnsemble {
  public:
    // the grid x_i = (2i+1) / (2 * 3^q), i < 3^q
    OrbitEnsemble(const ChaconMap& map, int q);
    // arbitrary start points (must have defined forward orbits)
    OrbitEnsemble(const ChaconMap& map, const std::vector<Rat>& points);

    size_t size() const { return states_.size(); }
    void step(); // apply the map to every point
    double position(size_t i) const { return table_[states_[i].stage][states_[i].level] + off_d_[i]; }
    Rat exact_position(size_t i) const;

  private:
    struct State {
        int stage;
        long long level;
        Rat off;
    };
    const ChaconMap& map_;
    std::vector<State> states_;
    std::vector<double> off_d_;
    std::vector<std::vector<double>> table_; // level lo as double, per stage
    void ensure_stage(int m);
    void escalate(State& st, size_t i);
};

// --- operations --------------------------------------------------------------

struct DiscrepancyOptions {
    int n_max = 8;
    std::vector<long long> starts = {0, 2187, 6561, 19683};
};

// D_N = max over sampled orbit starts and factors of length <= n_max of
// |occurrences in the length-N window - N mu([w])|; fits D_N / log_3^2 N.
ExperimentReport discrepancy(const Language& lang, const std::vector<long long>& N_list,
                             const DiscrepancyOptions& opt = {});

// S_N^x(f, omega) on a symbol source (needs N + n - 1 symbols).
cplx twisted_birkhoff(const Word& x_symbols, const CylFunction& f, const Language& lang,
                      long long N, double omega);
// Interval side: exact orbit from a rational start.
cplx twisted_birkhoff(const ChaconMap& map, const Rat& x0, const IntervalObservable& f,
                      long long N, double omega);

struct SpectralGrid {
    long long N = 0;
    int M = 0;                  // grid size
    std::vector<double> values; // G_N(f, i/M), orbit-averaged, nonnegative
    double grid_mean() const;
};

struct SpectralOptions {
    int sample_count = 8;        // orbit-segment starts along the fixed point
    long long autocorr_window = 177147; // 3^11, pair-frequency horizon
};

// Orbit-averaged G_N on the uniform grid i/M.
SpectralGrid spectral_density(const Language& lang, const CylFunction& f, long long N, int M,
                              const SpectralOptions& opt = {});

// Exact-autocorrelation form: G_N(f, w) = sum_{|d|<N} (1-|d|/N) R(d) e^{2 pi i d w}
// with R(d) the empirical pair frequency; its grid mean over M >= 2N points
// equals R(0) identically.
struct AutocorrDensity {
    std::vector<double> R;    // R[d], 0 <= d < N
    double l2_sq() const { return R.empty() ? 0.0 : R[0]; }
    double value(long long N, double omega) const;
};
AutocorrDensity autocorr_density(const Language& lang, const CylFunction& f, long long N,
                                 const SpectralOptions& opt = {});

struct BallBoundReport {
    double proxy_mass = 0;  // integral of G_fine over B(omega, 1/(2N))
    double bound = 0;       // pi^2/(4N) G_N(f, omega)
    double ratio = 0;       // proxy_mass / bound
    double total_mass = 0;  // integral of G_fine over the whole circle
    double l2_sq = 0;
};

BallBoundReport ball_bound_diagnostic(const Language& lang, const CylFunction& f, double omega,
                                      long long N, long long M_fine = 0 /* default 32N */);

struct CorrelationValue {
    double value = 0;    // <f o T^k, g> - mean(f) mean(g)
    double err_bar = 0;
};

struct QuadratureSpec {
    int grid_exponent = 9; // interval grid 3^q midpoints
    long long subshift_window = 177147;
};

// Correlation of two observables of the same kind at lag k.
CorrelationValue correlation(const ChaconMap& map, const Language& lang, const Observable& f,
                             const Observable& g, long long k, const QuadratureSpec& quad = {});

struct WeakMixOptions {
    int grid_exponent = 9;          // interval quadrature grid 3^q midpoints
    long long subshift_window = 19683; // averaging window for cylindrical pairs
};

// (1/N) sum_{k<N} |<U^k f, g> - mean f mean g|^2 for each N in the list;
// fits K_C and flags the endpoint decay.  When series_out is given it
// receives the per-lag squared deviations |<U^k f, g> - mean f mean g|^2.
ExperimentReport weakmix_average(const ChaconMap& map, const IntervalObservable& f,
                                 const IntervalObservable& g, const std::vector<long long>& N_list,
                                 const WeakMixOptions& opt = {},
                                 std::vector<double>* series_out = nullptr);

// Same sweep for observables of either kind; cylindrical pairs average along
// the fixed point over opt.subshift_window positions.
ExperimentReport weakmix_average(const ChaconMap& map, const Language& lang, const Observable& f,
                                 const Observable& g, const std::vector<long long>& N_list,
                                 const WeakMixOptions& opt = {},
                                 std::vector<double>* series_out = nullptr);

// Rank-n cylindrical approximation of a weakly Lipschitz interval observable:
// r_k = cell average of f over the decided coding cell of the k-th cylinder.
CylFunction cyl_approximation(const ChaconMap& map, const Language& lang,
                              const IntervalObservable& f, int n);

struct LowerBoundOptions {
    double bump_amplitude = 1.0;
};

// Raised-cosine bump f_N on A_k against g = 1_{A_k}: every n in E_k
// contributes |int f_N  int g| exactly; reports the ratio of the E_k-restricted
// sum to (N / log^2 N) ||f||_L^(1/2) ||f||_2^(1/2) ||g||_2.
ExperimentReport lower_bound_experiment(const ChaconMap& map, int k,
                                        const std::vector<long long>& N_list,
                                        const LowerBoundOptions& opt = {});

struct ExceptionalSet {
    std::vector<long long> J;       // indices n with a_n > sqrt(b_n)
    ExperimentReport report;        // density series vs the Markov guarantee
};

// Threshold schedule tau_N = sqrt(b_N): density of J in [0,N) is at most
// sqrt(b_N) whenever the Cesaro bound (1/N) sum_{j<N} a_j <= b_N holds and b
// is nonincreasing; validates the bound and reports the density series.
ExceptionalSet exceptional_set(const std::vector<double>& a, const std::vector<double>& b);

} // namespace weakmix
