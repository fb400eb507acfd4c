#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <thread>

#include "../support/oracles.hpp"
#include "patchdct/dct.hpp"
#include "patchdct/error.hpp"

using namespace patchdct;

namespace {

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

}  // namespace

TEST_CASE("basis is orthonormal") {
    for (int k : {1, 2, 3, 8, 17, 64, 128}) {
        const auto& b = basis_for(k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                double dot = 0.0;
                for (int x = 0; x < k; ++x) dot += b(i, x) * b(j, x);
                CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-9);
            }
    }
}

TEST_CASE("basis cache returns one object under concurrent first use") {
    std::vector<const CosineBasis*> seen(8);
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { seen[t] = &basis_for(97); });
    }
    for (auto* p : seen) CHECK(p == seen[0]);
}

TEST_CASE("dct2d examples") {
    SUBCASE("2x2 all-ones") {
        const auto f = dct2d(RealMatrix(2, 1.0));
        CHECK(f(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(f(0, 1)) < 1e-12);
        CHECK(std::abs(f(1, 0)) < 1e-12);
        CHECK(std::abs(f(1, 1)) < 1e-12);
    }
    SUBCASE("all zeros") {
        for (int k : {1, 5, 16}) CHECK(dct2d(RealMatrix(k)) == RealMatrix(k));
    }
    SUBCASE("random 4x4 against literal sum") {
        std::mt19937_64 rng(11);
        const auto m = oracle::random_matrix(rng, 4);
        const auto expect = oracle::dct_literal(oracle::rows_of(m));
        const auto got = dct2d(m);
        for (int u = 0; u < 4; ++u)
            for (int v = 0; v < 4; ++v) CHECK(std::abs(got(u, v) - expect[u][v]) < 1e-9);
    }
}

TEST_CASE("idct2d examples") {
    const RealMatrix f(2, {2.0, 0.0, 0.0, 0.0});
    const auto m = idct2d(f);
    for (double v : m.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(idct2d(RealMatrix(3)) == RealMatrix(3));
    std::mt19937_64 rng(5);
    const auto x = oracle::random_matrix(rng, 8);
    CHECK(max_abs_diff(idct2d(dct2d(x)), x) < 1e-9);
}

TEST_CASE("dct2d_naive") {
    CHECK(dct2d_naive(RealMatrix(1, 1.0))(0, 0) == doctest::Approx(1.0));
    SUBCASE("2x2 identity maps to identity") {
        const auto f = dct2d_naive(RealMatrix(2, {1.0, 0.0, 0.0, 1.0}));
        CHECK(f(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(f(0, 1)) < 1e-12);
        CHECK(std::abs(f(1, 0)) < 1e-12);
    }
    SUBCASE("agrees with separable path on 100 random 8x8") {
        std::mt19937_64 rng(99);
        for (int i = 0; i < 100; ++i) {
            const auto m = oracle::random_matrix(rng, 8);
            CHECK(max_abs_diff(dct2d_naive(m), dct2d(m)) < 1e-9);
        }
    }
    CHECK_THROWS_AS(dct2d_naive(RealMatrix(kNaiveDctMaxSize + 1)), ConfigError);
}

TEST_CASE("transform properties over sizes") {
    std::mt19937_64 rng(2);
    for (int k : {1, 2, 3, 7, 8, 16, 31, 64, 112, 128}) {
        CAPTURE(k);
        const auto a = oracle::random_matrix(rng, k);
        const auto b = oracle::random_matrix(rng, k);
        const auto fa = dct2d(a);
        CHECK(max_abs_diff(idct2d(fa), a) < 1e-9);

        double e_space = 0.0, e_freq = 0.0;
        for (double v : a.values()) e_space += v * v;
        for (double v : fa.values()) e_freq += v * v;
        CHECK(std::abs(e_space - e_freq) <= 1e-6 * e_space);

        const double alpha = 0.7, beta = -2.5;
        RealMatrix mix(k);
        for (std::size_t i = 0; i < mix.values().size(); ++i)
            mix.values()[i] = alpha * a.values()[i] + beta * b.values()[i];
        const auto fb = dct2d(b);
        const auto fmix = dct2d(mix);
        double worst = 0.0;
        for (std::size_t i = 0; i < fmix.values().size(); ++i)
            worst = std::max(worst, std::abs(fmix.values()[i] -
                                             (alpha * fa.values()[i] + beta * fb.values()[i])));
        CHECK(worst < 1e-9);

        if (k <= 16) CHECK(max_abs_diff(dct2d(a), dct2d_naive(a)) < 1e-9);
    }
}

TEST_CASE("zigzag order") {
    const std::vector<IndexPair> four{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {0, 3}, {1, 2},
                                      {2, 1}, {3, 0}, {3, 1}, {2, 2}, {1, 3}, {2, 3}, {3, 2}, {3, 3}};
    CHECK(zigzag_order(4) == four);

    for (int k : {1, 2, 3, 5, 8, 13, 112}) {
        CAPTURE(k);
        const auto& order = zigzag_order(k);
        const auto walk = oracle::zigzag_walk(k);
        REQUIRE(order.size() == walk.size());
        CHECK(std::equal(order.begin(), order.end(), walk.begin()));
        CHECK(std::set<IndexPair>(order.begin(), order.end()).size() == order.size());
        // Anti-diagonals are contiguous: r+c never decreases.
        for (std::size_t i = 1; i < order.size(); ++i)
            CHECK(order[i].first + order[i].second >= order[i - 1].first + order[i - 1].second);
    }
}

TEST_CASE("zigzag scan and unscan") {
    const RealMatrix f(2, {1.0, 2.0, 3.0, 4.0});
    CHECK(zigzag_scan(f, 4) == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(zigzag_scan(f, 1) == std::vector<double>{1.0});
    CHECK_THROWS_AS(zigzag_scan(f, 0), LengthError);
    CHECK_THROWS_AS(zigzag_scan(f, 5), LengthError);

    const std::vector<double> five{5.0};
    CHECK(zigzag_unscan(five, 2) == RealMatrix(2, {5.0, 0.0, 0.0, 0.0}));
    const std::vector<double> too_long(10, 1.0);
    CHECK_THROWS_AS(zigzag_unscan(too_long, 3), LengthError);

    std::mt19937_64 rng(8);
    for (int k : {1, 4, 9, 16}) {
        const auto m = oracle::random_matrix(rng, k);
        CHECK(zigzag_unscan(zigzag_scan(m, k * k), k) == m);
        std::uniform_int_distribution<int> len(1, k * k);
        const int n = len(rng);
        std::vector<double> v(n);
        for (auto& x : v) x = std::uniform_real_distribution<double>(-3, 3)(rng);
        CHECK(zigzag_scan(zigzag_unscan(v, k), n) == v);
        const auto placed = zigzag_unscan(v, k);
        const auto full = zigzag_scan(placed, k * k);
        for (int i = n; i < k * k; ++i) CHECK(full[i] == 0.0);
    }
}
