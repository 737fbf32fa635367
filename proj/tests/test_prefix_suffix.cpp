// test_prefix_suffix.cpp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weakmix/prefix_suffix.hpp"

using namespace weakmix;

namespace {

const SubstitutionSystem& beta() {
    static SubstitutionSystem s = SubstitutionSystem::chacon_beta();
    return s;
}

const Language& lang() {
    static Language L(beta(), 6);
    return L;
}

Word random_factor(std::mt19937& rng, int lo, int hi) {
    static Word prefix = fixed_point_prefix(beta(), '0', 9000);
    std::uniform_int_distribution<int> len_d(lo, hi);
    int len = len_d(rng);
    std::uniform_int_distribution<size_t> pos_d(0, prefix.size() - len);
    return prefix.substr(pos_d(rng), len);
}

bool proper_piece(const SubstitutionSystem& s, const Word& w) {
    if (w.empty()) return true;
    for (char b : s.alphabet) {
        const Word& img = s.rule(b);
        if (w.size() < img.size() &&
            (img.compare(0, w.size(), w) == 0 ||
             img.compare(img.size() - w.size(), w.size(), w) == 0))
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("decomposition of named examples") {
    Decomposition d = decompose(beta(), "001200");
    CHECK(d.depth == 1);
    CHECK(d.reconstruct(beta()) == "001200");

    Decomposition single = decompose(beta(), "0");
    CHECK(single.depth == 0);
    CHECK(single.reconstruct(beta()) == "0");

    CHECK_THROWS_AS(decompose(beta(), "11"), Error);
    CHECK_THROWS_AS(decompose(beta(), "10"), Error);
}

TEST_CASE("reconstruction identity on random factors") {
    std::mt19937 rng(7291);
    for (int it = 0; it < 200; ++it) {
        Word w = random_factor(rng, 1, 729);
        Decomposition d = decompose(beta(), w);
        CHECK(d.reconstruct(beta()) == w);
        // at least one deepest part nonempty
        CHECK((!d.u_parts[d.depth].empty() || !d.v_parts[d.depth].empty()));
        // parts are proper pieces of images
        CHECK(d.strict);
        for (const Word& u : d.u_parts) CHECK(proper_piece(beta(), u));
        for (const Word& v : d.v_parts) CHECK(proper_piece(beta(), v));
    }
}

TEST_CASE("depth bounds") {
    DepthBounds b = depth_bounds_check(beta(), 6, 1);
    CHECK(b.min_piece == 2);
    CHECK(b.max_next == 13);
    CHECK(b.ok);
    CHECK(depth_bounds_check(beta(), 1, 0).ok);

    // exhaustive sweep: every factor length <= 3^5 against its own depth
    Word prefix = fixed_point_prefix(beta(), '0', 2000);
    std::mt19937 rng(551);
    for (int it = 0; it < 300; ++it) {
        std::uniform_int_distribution<int> len_d(1, 243);
        int len = len_d(rng);
        std::uniform_int_distribution<size_t> pos_d(0, prefix.size() - len);
        Word w = prefix.substr(pos_d(rng), len);
        Decomposition d = decompose(beta(), w);
        CHECK(depth_bounds_check(beta(), len, d.depth).ok);
    }
}

TEST_CASE("assembled twisted sum equals direct evaluation") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> om(0.0, 1.0);
    double worst = 0;
    for (int it = 0; it < 100; ++it) {
        int n = 1 + it % 4;
        Word w = random_factor(rng, std::max(n, 3), 729);
        double omega = om(rng);
        std::vector<double> coeffs(lang().table(n).count());
        for (auto& c : coeffs) c = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        CylFunction f = CylFunction::make(lang(), n, coeffs);
        AssembledPhi a = phi_via_decomposition(lang(), w, omega, f);
        cplx direct = phi_f(w, omega, f, lang());
        worst = std::max(worst, std::abs(a.value - direct));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("assembly exercises the matrix route on long factors") {
    std::mt19937 rng(1131);
    Word prefix = fixed_point_prefix(beta(), '0', 40000);
    for (int it = 0; it < 5; ++it) {
        std::uniform_int_distribution<size_t> pos_d(0, prefix.size() - 2187);
        Word w = prefix.substr(pos_d(rng), 2187);
        CylFunction f = CylFunction::indicator(lang(), 2, 2);
        double omega = 0.37;
        AssembledPhi a = phi_via_decomposition(lang(), w, omega, f);
        cplx direct = phi_f(w, omega, f, lang());
        CHECK(std::abs(a.value - direct) <= 1e-9);
    }
}

TEST_CASE("zero-mean assembly at omega 0 stays at discrepancy scale") {
    // the untwisted sum of a zero-mean cylindrical function over a prefix is a
    // Birkhoff deviation, so it grows like log^2 N, far below N
    const std::vector<double>& mu = lang().freq(2);
    std::vector<double> c(lang().table(2).count(), 0.0);
    c[0] = 1.0;
    c[1] = -mu[0] / mu[1];
    CylFunction f = CylFunction::make(lang(), 2, c);
    REQUIRE(f.zero_mean);
    for (int e = 4; e <= 7; ++e) {
        long long N = pow3(e);
        Word prefix = fixed_point_prefix(beta(), '0', N);
        AssembledPhi a = phi_via_decomposition(lang(), prefix, 0.0, f);
        double logN = std::log(static_cast<double>(N)) / std::log(3.0);
        CHECK(std::abs(a.value) <= 30.0 * f.n * f.sup_norm * logN * logN);
        CHECK(std::abs(a.value) <= 0.05 * static_cast<double>(N));
    }
}

TEST_CASE("zero function and envelope") {
    CylFunction z = CylFunction::make(lang(), 2, std::vector<double>(lang().table(2).count(), 0.0));
    AssembledPhi a = phi_via_decomposition(lang(), fixed_point_prefix(beta(), '0', 100), 0.3, z);
    CHECK(std::abs(a.value) == 0.0);
    CHECK(a.bound >= 0.0);

    // envelope holds on a sweep with the default fit constant
    std::mt19937 rng(42);
    std::vector<double> coeffs(lang().table(3).count());
    for (auto& c : coeffs) c = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    CylFunction f = CylFunction::make(lang(), 3, coeffs);
    for (int it = 0; it < 40; ++it) {
        Word w = random_factor(rng, 10, 700);
        double omega = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        AssembledPhi a2 = phi_via_decomposition(lang(), w, omega, f);
        CHECK(std::abs(a2.value) <= a2.bound);
    }
}
