#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ewspec/haar_fisz.hpp"

using namespace ewspec;

namespace {

std::vector<double> random_nonneg(std::size_t n, std::uint64_t seed,
                                  double zero_fraction = 0.0) {
    std::mt19937_64 eng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = unif(eng) < zero_fraction ? 0.0 : expo(eng);
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Additive Haar pyramid of H: returns the implied per-level quotients, the
// quantities the inverse must solve for. Independent of the library's own
// decomposition code.
std::vector<std::vector<double>> implied_ratios(std::vector<double> h) {
    std::vector<std::vector<double>> out;
    while (h.size() > 1) {
        const std::size_t half = h.size() / 2;
        std::vector<double> next(half), f(half);
        for (std::size_t m = 0; m < half; ++m) {
            f[m] = 0.5 * (h[2 * m] - h[2 * m + 1]);
            next[m] = 0.5 * (h[2 * m] + h[2 * m + 1]);
        }
        out.push_back(std::move(f));
        h = std::move(next);
    }
    return out;
}

double sample_variance(const double* x, std::size_t n) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i];
    mean /= double(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
    return var / double(n - 1);
}

double excess_kurtosis(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= double(n);
    m4 /= double(n);
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace

TEST_CASE("hand-computed pair") {
    const std::vector<double> v = {4.0, 2.0};
    const std::vector<double> h = haar_fisz_forward(v);
    REQUIRE(h.size() == 2);
    CHECK(h[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(h[1] == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(max_abs_diff(haar_fisz_inverse(h), v) < 1e-12);
}

TEST_CASE("constant input is a fixed point") {
    for (std::size_t T : {8u, 64u, 1024u}) {
        const std::vector<double> v(T, 2.75);
        const std::vector<double> h = haar_fisz_forward(v);
        for (double x : h) CHECK(x == doctest::Approx(2.75).epsilon(1e-14));
        const std::vector<double> back = haar_fisz_inverse(h);
        for (double x : back) CHECK(x == doctest::Approx(2.75).epsilon(1e-14));
    }
}

TEST_CASE("round trip across lengths, including zeros") {
    for (std::size_t T = 8; T <= 4096; T *= 2) {
        for (int rep = 0; rep < 5; ++rep) {
            const std::vector<double> v =
                random_nonneg(T, 100 * T + std::uint64_t(rep), rep >= 3 ? 0.3 : 0.0);
            const std::vector<double> h = haar_fisz_forward(v);
            CAPTURE(T);
            CAPTURE(rep);
            CHECK(max_abs_diff(haar_fisz_inverse(h), v) < 1e-10);
        }
    }
}

TEST_CASE("forward of inverse is identity on valid input") {
    const std::vector<double> v = random_nonneg(256, 77);
    const std::vector<double> h = haar_fisz_forward(v);
    const std::vector<double> h2 = haar_fisz_forward(haar_fisz_inverse(h));
    CHECK(max_abs_diff(h, h2) < 1e-10);
}

TEST_CASE("zero pairs produce zero ratios and survive the round trip") {
    std::vector<double> v = random_nonneg(64, 5);
    v[10] = v[11] = 0.0;
    v[40] = v[41] = 0.0;
    const std::vector<double> h = haar_fisz_forward(v);
    const std::vector<double> back = haar_fisz_inverse(h);
    CHECK(max_abs_diff(back, v) < 1e-12);
    CHECK(back[10] == 0.0);
    CHECK(back[41] == 0.0);

    const std::vector<double> zeros(32, 0.0);
    const std::vector<double> hz = haar_fisz_forward(zeros);
    for (double x : hz) CHECK(x == 0.0);
    CHECK(max_abs_diff(haar_fisz_inverse(hz), zeros) == 0.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(haar_fisz_forward(std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(haar_fisz_forward(std::vector<double>{1.0, -0.5}),
                    std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(haar_fisz_forward(std::vector<double>{1.0, inf}),
                    std::invalid_argument);
    CHECK_THROWS_AS(haar_fisz_inverse(std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
}

TEST_CASE("strict inverse rejects out-of-range ratios, naming the level") {
    // H = (3, 1): implied f = 1, c = 2 -> valid (boundary). H = (3.5, 0.5):
    // f = 1.5 > 1 -> inconsistent.
    CHECK_NOTHROW(haar_fisz_inverse(std::vector<double>{3.0, 1.0}));
    try {
        haar_fisz_inverse(std::vector<double>{3.5, 0.5});
        FAIL("expected domain_error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("level") != std::string::npos);
    }

    std::vector<double> out;
    CHECK(try_haar_fisz_inverse(std::vector<double>{3.0, 1.0}, out));
    CHECK_FALSE(try_haar_fisz_inverse(std::vector<double>{3.5, 0.5}, out));
}

TEST_CASE("clamped inverse coincides with strict inverse on valid input") {
    for (int rep = 0; rep < 10; ++rep) {
        const std::vector<double> v = random_nonneg(128, 900 + std::uint64_t(rep), 0.1);
        const std::vector<double> h = haar_fisz_forward(v);
        const std::vector<double> strict = haar_fisz_inverse(h);
        const std::vector<double> clamped = haar_fisz_inverse_clamped(h);
        CHECK(max_abs_diff(strict, clamped) < 1e-12);
    }
}

TEST_CASE("clamped inverse is total and nonnegative on perturbed input") {
    std::mt19937_64 eng(31337);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int strict_failures = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<double> v = random_nonneg(256, 4000 + std::uint64_t(rep), 0.2);
        std::vector<double> h = haar_fisz_forward(v);
        for (double& x : h) x += 0.15 * gauss(eng);
        std::vector<double> out;
        if (!try_haar_fisz_inverse(h, out)) ++strict_failures;
        const std::vector<double> proj = haar_fisz_inverse_clamped(h);
        REQUIRE(proj.size() == h.size());
        for (double x : proj) {
            CHECK(std::isfinite(x));
            CHECK(x >= 0.0);
        }
    }
    // the perturbation actually exercises the projection path
    CHECK(strict_failures > 0);
}

TEST_CASE("clamped quotient maps the pair to a zero child") {
    // f clamped to 1 means the smaller child of the pair hits exactly zero.
    const std::vector<double> proj =
        haar_fisz_inverse_clamped(std::vector<double>{3.5, 0.5});
    REQUIRE(proj.size() == 2);
    CHECK(proj[1] == 0.0);
    CHECK(proj[0] > 0.0);
}

TEST_CASE("fisz ratios are scale invariant") {
    const std::vector<double> v = random_nonneg(512, 2024, 0.1);
    std::vector<double> scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = 7.5 * v[i];

    const auto r1 = implied_ratios(haar_fisz_forward(v));
    const auto r2 = implied_ratios(haar_fisz_forward(scaled));
    REQUIRE(r1.size() == r2.size());
    for (std::size_t l = 0; l < r1.size(); ++l)
        for (std::size_t m = 0; m < r1[l].size(); ++m) {
            CAPTURE(l);
            CAPTURE(m);
            CHECK(r1[l][m] == doctest::Approx(r2[l][m]).epsilon(1e-12));
        }
}

TEST_CASE("all implied ratios of a forward transform lie in [-1, 1]") {
    const std::vector<double> v = random_nonneg(1024, 55, 0.25);
    const auto ratios = implied_ratios(haar_fisz_forward(v));
    for (const auto& level : ratios)
        for (double f : level) {
            CHECK(f <= 1.0 + 1e-12);
            CHECK(f >= -1.0 - 1e-12);
        }
}

TEST_CASE("variance stabilization on multiplicative chi-squared noise") {
    // v_k = R(k/T) Z_k^2 with R ranging over [1, 4]: raw block variances span
    // a factor >= 10 while the transformed block variances stay within 2.
    const std::size_t T = 4096;
    const std::size_t n_blocks = 8;
    const std::size_t block = T / n_blocks;
    std::mt19937_64 eng(98765);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> v(T);
    for (std::size_t k = 0; k < T; ++k) {
        const double z = gauss(eng);
        const double r =
            2.5 + 1.5 * std::sin(2.0 * M_PI * double(k) / double(T));  // [1, 4]
        v[k] = r * z * z;
    }
    const std::vector<double> h = haar_fisz_forward(v);

    double raw_min = 1e300, raw_max = 0.0, hf_min = 1e300, hf_max = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const double rv = sample_variance(v.data() + b * block, block);
        const double hv = sample_variance(h.data() + b * block, block);
        raw_min = std::min(raw_min, rv);
        raw_max = std::max(raw_max, rv);
        hf_min = std::min(hf_min, hv);
        hf_max = std::max(hf_max, hv);
    }
    CHECK(raw_max / raw_min >= 10.0);
    CHECK(hf_max / hf_min < 2.0);
}

TEST_CASE("gaussianization on multiplicative chi-squared noise") {
    const std::size_t T = 4096;
    std::mt19937_64 eng(424242);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> v(T);
    for (std::size_t k = 0; k < T; ++k) {
        const double z = gauss(eng);
        const double r = 2.0 + std::cos(2.0 * M_PI * double(k) / double(T));
        v[k] = r * z * z;
    }
    const std::vector<double> h = haar_fisz_forward(v);

    // subtract a smooth running mean before measuring shape
    const std::size_t w = 64;
    auto detrend = [&](const std::vector<double>& x) {
        std::vector<double> out(T);
        for (std::size_t k = 0; k < T; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < w; ++i) s += x[(k + T - w / 2 + i) % T];
            out[k] = x[k] - s / double(w);
        }
        return out;
    };
    const double raw_kurt = excess_kurtosis(detrend(v));
    const double hf_kurt = excess_kurtosis(detrend(h));
    CHECK(raw_kurt > 3.0);  // chi-squared(1) is strongly leptokurtic
    CHECK(hf_kurt < 0.5 * raw_kurt);
}

TEST_CASE("negative forward outputs are preserved, not clipped") {
    // forward output may dip negative on noisy input; inverse must still
    // round-trip it. Construct a case with a strongly negative fine ratio.
    std::vector<double> v = {0.1, 3.9, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
    const std::vector<double> h = haar_fisz_forward(v);
    CHECK(*std::min_element(h.begin(), h.end()) < 0.0);
    CHECK(max_abs_diff(haar_fisz_inverse(h), v) < 1e-12);
}
