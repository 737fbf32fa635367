// weakmix_lab.cpp — batch experiment runner for the Chacon weak-mixing toolkit.
//
// Subcommands mirror the pipeline: fixed-point, factors, code-orbit,
// empty-times, twisted-sum, pi-check, veech-sweep, discrepancy,
// spectral-density, weakmix-upper, weakmix-lower, exceptional-set.
// Exit codes: 0 success, 1 compute error, 2 invalid configuration.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "weakmix/chacon_map.hpp"
#include "weakmix/prefix_suffix.hpp"
#include "weakmix/report.hpp"
#include "weakmix/spectral.hpp"

using namespace weakmix;

namespace {

SubstitutionSystem load_subst(const std::string& name, const std::string& file) {
    if (name == "beta") return SubstitutionSystem::chacon_beta();
    if (name == "alpha") return SubstitutionSystem::chacon_alpha();
    if (name == "file") {
        std::ifstream in(file);
        if (!in) raise(Errc::config_invalid, "cannot open substitution file: " + file);
        std::stringstream ss;
        ss << in.rdbuf();
        return SubstitutionSystem::from_json_text(ss.str());
    }
    raise(Errc::config_invalid, "unknown substitution: " + name);
}

Rat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(text));
    return Rat(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

std::vector<long long> parse_n_list(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    if (out.empty()) raise(Errc::config_invalid, "empty N list");
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) raise(Errc::config_invalid, "cannot write: " + path);
    out << content;
}

void emit_report(ExperimentReport& rep, const std::string& out_path,
                 const std::string& canonical_cfg, unsigned long long seed) {
    rep.metadata["config_hash"] = config_hash(canonical_cfg);
    rep.metadata["seed"] = std::to_string(seed);
    rep.metadata["version"] = kLibraryVersion;
    if (!out_path.empty()) {
        write_file(out_path, rep.to_csv_text());
        write_file(out_path + ".json", rep.to_json_text());
    }
    std::cout << rep.to_json_text() << "\n";
}

// Merge a JSON config file into the argument list: {"subcommand": "...",
// "flag": value, ...}.  Explicit command-line flags win over config values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string cfg_path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            cfg_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            cfg_path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (cfg_path.empty()) return args;
    std::ifstream in(cfg_path);
    if (!in) raise(Errc::config_invalid, "cannot open config: " + cfg_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        raise(Errc::config_invalid, std::string("config parse: ") + e.what());
    }
    bool has_sub = !args.empty() && args[0].rfind("--", 0) != 0;
    std::vector<std::string> merged;
    if (!has_sub) {
        if (!j.contains("subcommand"))
            raise(Errc::config_invalid, "config needs a subcommand");
        merged.push_back(j["subcommand"].get<std::string>());
    }
    merged.insert(merged.end(), args.begin(), args.end());
    auto given = [&](const std::string& flag) {
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (auto& [key, val] : j.items()) {
        if (key == "subcommand") continue;
        std::string flag = "--" + key;
        if (given(flag)) continue;
        merged.push_back(flag);
        if (val.is_array()) {
            std::string list;
            for (auto& x : val) {
                if (!list.empty()) list += ",";
                list += x.is_string() ? x.get<std::string>() : x.dump();
            }
            merged.push_back(list);
        } else {
            merged.push_back(val.is_string() ? val.get<std::string>() : val.dump());
        }
    }
    return merged;
}

// Named interval observables for the decay experiments.
IntervalObservable named_observable(const std::string& name) {
    IntervalObservable f;
    if (name == "cos") {
        f.fn = [](double x) { return std::cos(2.0 * M_PI * x); };
        f.sup_norm = 1.0;
        f.lip_const = 2.0 * M_PI;
        f.zero_mean = true;
    } else if (name == "cos2") {
        f.fn = [](double x) { return std::cos(4.0 * M_PI * x); };
        f.sup_norm = 1.0;
        f.lip_const = 4.0 * M_PI;
        f.zero_mean = true;
    } else if (name == "sinsq") {
        f.fn = [](double x) { return std::sin(2.0 * M_PI * x) * std::sin(2.0 * M_PI * x) - 0.5; };
        f.sup_norm = 0.5;
        f.lip_const = 2.0 * M_PI;
        f.zero_mean = true;
    } else {
        raise(Errc::config_invalid, "unknown observable: " + name);
    }
    return f;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakmix-lab: quantitative weak-mixing experiments for the Chacon map"};
    app.require_subcommand(1);

    std::string subst_name = "beta", subst_file, out_path, x_text = "0", series_csv;
    std::string cyl_word;
    int k = 1, rank = 2, m_level = 5, grid_exp = 9, max_stage = 20, grid_count = 64;
    long long N = 729, M = 0, len = 13;
    double omega = 0.3, b_const = 1.0, b_exp = -1.0 / 6.0;
    std::string n_list_text, observable_name = "cos", coeffs_text, side = "interval";
    unsigned long long seed = 0;

    app.add_option("--subst", subst_name, "alpha | beta | file");
    app.add_option("--subst-file", subst_file, "substitution JSON when --subst file");
    app.add_option("--out", out_path, "output path (CSV; reports also write .json)");
    app.add_option("--seed", seed, "seed recorded in report metadata");
    app.add_option("--max-stage", max_stage, "stage cap for the interval map");

    auto* fixed = app.add_subcommand("fixed-point", "print a fixed-point prefix");
    fixed->add_option("--len", len, "prefix length")->required();

    auto* factors = app.add_subcommand("factors", "enumerate factors of a rank");
    factors->add_option("--rank", rank, "factor length")->required();

    auto* orbit = app.add_subcommand("code-orbit", "itinerary of a rational point");
    orbit->add_option("--x", x_text, "start point as p/q");
    orbit->add_option("--len", len, "number of symbols")->required();

    auto* etimes = app.add_subcommand("empty-times", "E_k within [1, N]");
    etimes->add_option("--k", k, "tower stage of A_k")->required();
    etimes->add_option("--N", N, "horizon")->required();

    auto* tsum = app.add_subcommand("twisted-sum", "phi over a fixed-point window");
    tsum->add_option("--cyl", cyl_word, "cylinder word")->required();
    tsum->add_option("--omega", omega, "frequency in [0,1)");
    tsum->add_option("--len", len, "window length")->required();

    auto* picheck = app.add_subcommand("pi-check", "recursion vs direct Pi_m");
    picheck->add_option("--m", m_level, "level")->required();
    picheck->add_option("--n", rank, "cylinder rank")->required();
    picheck->add_option("--omega", omega, "frequency");

    auto* veech = app.add_subcommand("veech-sweep", "product contraction sweep");
    veech->add_option("--n", rank, "product start level");
    veech->add_option("--m", m_level, "product end level");
    veech->add_option("--omega-grid", grid_count, "number of omega grid points");

    auto* disc = app.add_subcommand("discrepancy", "cylinder-count discrepancy sweep");
    disc->add_option("--N-list", n_list_text, "comma-separated window lengths")->required();

    auto* sdens = app.add_subcommand("spectral-density", "orbit-averaged G_N on a grid");
    sdens->add_option("--rank", rank, "cylindrical rank of the observable");
    sdens->add_option("--N", N, "twisted-sum length")->required();
    sdens->add_option("--M", M, "omega grid size (default 2N)");
    sdens->add_option("--coeffs", coeffs_text, "cylinder coefficients r_0,r_1,...");

    auto* wupper = app.add_subcommand("weakmix-upper", "Cesaro correlation decay sweep");
    wupper->add_option("--N-list", n_list_text, "comma-separated N values")->required();
    wupper->add_option("--grid-exp", grid_exp, "quadrature grid 3^q midpoints");
    wupper->add_option("--observable", observable_name, "cos | cos2 | sinsq");
    wupper->add_option("--side", side, "interval | subshift");
    wupper->add_option("--rank", rank, "cylindrical rank for --side subshift");

    auto* wlower = app.add_subcommand("weakmix-lower", "E_k-restricted lower-bound sums");
    wlower->add_option("--k", k, "tower stage of A_k")->required();
    wlower->add_option("--N-list", n_list_text, "comma-separated N values")->required();

    auto* exc = app.add_subcommand("exceptional-set", "threshold set from a Cesaro bound");
    exc->add_option("--series-csv", series_csv, "input series (one value per line)")->required();
    exc->add_option("--b-const", b_const, "envelope constant");
    exc->add_option("--b-log-exp", b_exp, "envelope exponent of log3 N");

    app.add_option("--config", "JSON config file merged with the flags")->expected(1);
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(argc, argv);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    std::vector<const char*> ptrs = {argv[0]};
    for (const std::string& a : expanded) ptrs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::string canonical;
    for (const std::string& a : expanded) {
        canonical += a;
        canonical += ' ';
    }

    try {
        SubstitutionSystem subst = load_subst(subst_name, subst_file);
        ChaconMap map(max_stage);

        if (*fixed) {
            std::cout << fixed_point_prefix(subst, subst.alphabet[0], len) << "\n";
        } else if (*factors) {
            Language lg(subst, rank);
            const FactorTable& t = lg.table(rank);
            std::string csv = "k,word,freq\n";
            for (long long i = 0; i < t.count(); ++i) {
                csv += std::to_string(i) + "," + t.factors[i] + "," +
                       std::to_string(lg.freq(rank)[i]) + "\n";
                std::cout << i << " " << t.factors[i] << " " << lg.freq(rank)[i] << "\n";
            }
            if (!out_path.empty()) write_file(out_path, csv);
        } else if (*orbit) {
            std::cout << map.code_orbit(parse_rational(x_text), len) << "\n";
        } else if (*etimes) {
            auto e = map.empty_intersection_times(k, N);
            std::string csv = "k,n\n";
            for (long long n : e) {
                csv += std::to_string(k) + "," + std::to_string(n) + "\n";
                std::cout << n << "\n";
            }
            if (!out_path.empty()) write_file(out_path, csv);
        } else if (*tsum) {
            Language lg(subst, static_cast<int>(cyl_word.size()));
            Word window = fixed_point_prefix(subst, subst.alphabet[0], len);
            cplx direct = phi_cyl(window, cyl_word, omega);
            CylFunction f = CylFunction::indicator(lg, static_cast<int>(cyl_word.size()),
                                                   lg.table(cyl_word.size()).index_of(cyl_word));
            AssembledPhi assembled = phi_via_decomposition(lg, window, omega, f);
            std::printf("direct    %.12g + %.12gi\n", direct.real(), direct.imag());
            std::printf("assembled %.12g + %.12gi\n", assembled.value.real(),
                        assembled.value.imag());
            std::printf("difference %.3e, envelope %.6g\n", std::abs(direct - assembled.value),
                        assembled.bound);
        } else if (*picheck) {
            Language lg(subst, rank);
            PiState rec = pi_recursive(lg, m_level, rank, omega);
            PiState dir = pi_direct(lg, m_level, rank, omega);
            double worst = 0;
            for (size_t b = 0; b < rec.cols.size(); ++b)
                for (size_t i = 0; i < rec.cols[b].size(); ++i)
                    worst = std::max(worst, std::abs(rec.cols[b][i] - dir.cols[b][i]));
            std::printf("max_err %.3e\n", worst);
            if (worst > 1e-9) return 1;
        } else if (*veech) {
            Language lg(subst, std::max(rank, 2));
            std::vector<Word> words = find_return_words(subst, 3, 5);
            std::string csv = "omega,m,n,max_abs_entry,bound_value,c_fit\n";
            double cmin = 1.0;
            char line[160];
            for (int g = 1; g < grid_count; ++g) {
                double w = static_cast<double>(g) / grid_count;
                VeechCheck v = veech_product_check(subst, rank, m_level, w, words);
                double lhs_max = *std::max_element(v.lhs.begin(), v.lhs.end());
                double rhs_max = *std::max_element(v.rhs.begin(), v.rhs.end());
                std::snprintf(line, sizeof(line), "%.10g,%d,%d,%.10g,%.10g,%.10g\n", w, m_level,
                              rank, lhs_max, rhs_max, v.c_fit);
                csv += line;
                cmin = std::min(cmin, v.c_fit);
            }
            std::printf("min c_fit over the grid: %.6g\n", cmin);
            if (!out_path.empty()) write_file(out_path, csv);
            if (cmin <= 0) return 1;
        } else if (*disc) {
            Language lg(subst, 8);
            ExperimentReport rep = discrepancy(lg, parse_n_list(n_list_text), {});
            emit_report(rep, out_path, canonical, seed);
            if (!rep.all_flags_pass()) return 1;
        } else if (*sdens) {
            Language lg(subst, rank);
            std::vector<double> coeffs(lg.table(rank).count(), 0.0);
            if (coeffs_text.empty()) {
                const std::vector<double>& mu = lg.freq(rank);
                coeffs[0] = 1.0;
                coeffs[1] = -mu[0] / mu[1]; // zero-mean two-cylinder combination
            } else {
                std::stringstream cs(coeffs_text);
                std::string tok;
                size_t idx = 0;
                while (std::getline(cs, tok, ',') && idx < coeffs.size()) coeffs[idx++] = std::stod(tok);
            }
            CylFunction f = CylFunction::make(lg, rank, coeffs);
            if (M <= 0) M = 2 * N;
            SpectralGrid grid = spectral_density(lg, f, N, static_cast<int>(M));
            AutocorrDensity ac = autocorr_density(lg, f, N);
            double mean = 0;
            for (int j = 0; j < grid.M; ++j)
                mean += ac.value(N, static_cast<double>(j) / grid.M);
            mean /= grid.M;
            std::string csv = "omega,G_N\n";
            char line[80];
            for (int j = 0; j < grid.M; ++j) {
                std::snprintf(line, sizeof(line), "%.10g,%.12g\n",
                              static_cast<double>(j) / grid.M, grid.values[j]);
                csv += line;
            }
            if (!out_path.empty()) write_file(out_path, csv);
            std::printf("grid mean (orbit form) %.12g, autocorr grid mean %.12g, ||f||_2^2 %.12g\n",
                        grid.grid_mean(), mean, ac.l2_sq());
        } else if (*wupper) {
            ExperimentReport rep;
            if (side == "interval") {
                IntervalObservable f = named_observable(observable_name);
                rep = weakmix_average(map, f, f, parse_n_list(n_list_text), {grid_exp});
            } else if (side == "subshift") {
                Language lg(subst, rank);
                std::vector<double> coeffs(lg.table(rank).count(), 0.0);
                const std::vector<double>& mu = lg.freq(rank);
                coeffs[0] = 1.0;
                coeffs[1] = -mu[0] / mu[1];
                Observable f = Observable::cylindrical(CylFunction::make(lg, rank, coeffs));
                rep = weakmix_average(map, lg, f, f, parse_n_list(n_list_text), {grid_exp, 19683});
            } else {
                raise(Errc::config_invalid, "unknown side: " + side);
            }
            emit_report(rep, out_path, canonical, seed);
        } else if (*wlower) {
            ExperimentReport rep = lower_bound_experiment(map, k, parse_n_list(n_list_text));
            emit_report(rep, out_path, canonical, seed);
        } else if (*exc) {
            std::ifstream in(series_csv);
            if (!in) raise(Errc::config_invalid, "cannot open series: " + series_csv);
            std::vector<double> a;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
                // bare value per line, or (N, value, ...) rows: take the value
                auto c1 = line.find(',');
                if (c1 == std::string::npos) {
                    a.push_back(std::stod(line));
                } else {
                    auto c2 = line.find(',', c1 + 1);
                    a.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
                }
            }
            std::vector<double> b(a.size());
            for (size_t i = 0; i < a.size(); ++i) {
                double l = std::log(std::max<double>(i + 1, 3)) / std::log(3.0);
                b[i] = b_const * std::pow(l, b_exp);
            }
            ExceptionalSet e = exceptional_set(a, b);
            emit_report(e.report, out_path, canonical, seed);
            std::printf("|J| = %zu of %zu\n", e.J.size(), a.size());
        }
        return 0;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.code() == Errc::config_invalid ? 2 : 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
