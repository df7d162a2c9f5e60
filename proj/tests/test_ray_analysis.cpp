#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hvalence/ray_analysis.hpp"
#include "hvalence/valence_formula.hpp"
#include "oracles.hpp"

using namespace hvalence;

namespace {

constexpr double pi = std::numbers::pi;

TEST(RayCounts, PolesAndCriticalCounts) {
    EXPECT_EQ(k_poles(12, 1), 1);
    EXPECT_EQ(k_poles(12, 3), 3);
    EXPECT_EQ(k_poles(12, 11), 10);
    EXPECT_EQ(k_crit(12, 1), 1);
    EXPECT_EQ(k_crit(12, 6), 5);
    EXPECT_THROW(k_poles(12, 0), precondition_error);
    EXPECT_THROW(k_poles(12, 12), precondition_error);
    for (int n = 4; n <= 60; ++n)
        for (int k = 1; k < n; ++k) {
            const int kp = k_poles(n, k), kc = k_crit(n, k);
            EXPECT_LT((kp - 0.5) / (n - 1), static_cast<double>(k) / n);
            EXPECT_GE((kp + 0.5) / (n - 1), static_cast<double>(k) / n);
            EXPECT_LT((kc - 0.5) / (n - 2), static_cast<double>(k) / n);
            EXPECT_GE((kc + 0.5) / (n - 2), static_cast<double>(k) / n);
        }
}

TEST(RayFunction, WorkedValues) {
    EXPECT_NEAR(boundary_value(12, 3), -2.0, 1e-14);
    EXPECT_TRUE(std::isinf(boundary_value(12, 6)));
    EXPECT_NEAR(ray_function(pi / 20.0, 12, 1), 18.3529054559239035, 1e-11);
    EXPECT_THROW(ray_function(0.0, 12, 1), precondition_error);
    EXPECT_THROW(ray_function(pi / 12.0, 12, 1), precondition_error);
}

TEST(RayFunction, DerivativeMatchesFiniteDifference) {
    std::mt19937_64 rng(23);
    for (int n : {5, 12, 31}) {
        for (int k = 1; k < n; ++k) {
            std::uniform_real_distribution<double> u(0.01, 0.99);
            const double theta = u(rng) * pi * k / n;
            const double h = 1e-7;
            const double fd = (ray_function(theta + h, n, k) - ray_function(theta - h, n, k)) / (2 * h);
            const double d = ray_function_derivative(theta, n, k);
            // Near a pole the difference quotient is meaningless.
            if (std::abs(d) < 1e6) EXPECT_NEAR(d, fd, 1e-4 * (1.0 + std::abs(d))) << n << " " << k;
        }
    }
}

TEST(RayFunction, BoundarySampleNearAlpha) {
    constexpr double delta = 1e-8;
    for (int n = 4; n <= 60; ++n)
        for (int k = 1; k < n; ++k) {
            if (2 * k == n) continue;
            const double alpha = pi * k / n;
            const double sampled = ray_function(alpha - delta, n, k);
            const double slope = (n - 1) * (1.0 / std::pow(std::cos((n - 1) * alpha), 2) - 1.0 / std::pow(std::sin(alpha), 2));
            EXPECT_NEAR(sampled + slope * delta, -2.0 / std::sin(2.0 * alpha), 1e-5) << "n=" << n << " k=" << k;
            if (n <= 12) EXPECT_NEAR(sampled, boundary_value(n, k), 1e-5) << "n=" << n << " k=" << k;
        }
}

TEST(RayFunction, HalfTurnRayDivergesAtAlpha) {
    for (int n = 4; n <= 60; n += 2) EXPECT_GT(ray_function(pi / 2 - 1e-8, n, n / 2), 1e6) << n;
}

TEST(ThetaToR, MonotoneAndRoundTrips) {
    for (int n : {4, 12, 40}) {
        for (int k = 1; k < n; ++k) {
            const double alpha = pi * k / n;
            double prev = 0.0;
            for (int i = 1; i < 200; ++i) {
                const double theta = alpha * i / 200.0;
                const double r = theta_to_r(theta, n, k);
                EXPECT_GT(r, prev);
                prev = r;
                EXPECT_NEAR(std::arg(std::polar(r, alpha) + 1.0), theta, 1e-12);
            }
        }
    }
    EXPECT_NEAR(theta_to_r(1e-12, 12, 3), 1e-12 / std::sin(pi / 4), 1e-20);
    EXPECT_THROW(theta_to_r(pi / 4, 12, 3), precondition_error);
}

TEST(Structure, SegmentCountsUpToSixty) {
    for (int n = 4; n <= 60; ++n) {
        for (int k = 1; k < n; ++k) {
            RayProfile prof;
            ASSERT_NO_THROW(prof = count_ray(n, k, {true, 10000})) << "n=" << n << " k=" << k;
            ASSERT_EQ(prof.roots_per_segment.size(), prof.poles.size() + 1);
            EXPECT_EQ(prof.roots_per_segment.front(), 0) << "n=" << n << " k=" << k;
            for (std::size_t s = 1; s + 1 < prof.roots_per_segment.size(); ++s)
                EXPECT_EQ(prof.roots_per_segment[s], 1) << "n=" << n << " k=" << k << " s=" << s;
            const int extra = (4 * k < n && kmax_margin(n, k) > 0) ? 2 : 0;
            const int tail = 2 * k >= n ? 1 : extra;
            EXPECT_EQ(prof.roots_per_segment.back(), tail) << "n=" << n << " k=" << k;
            EXPECT_EQ(prof.N_k, static_cast<int>(prof.roots_theta.size()));
        }
    }
}

TEST(Structure, PerRayCountsMatchBruteForce) {
    for (const auto& [n, leading] : oracle::brute_force_leading_rays()) {
        const auto profiles = ray_profiles(n);
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            const int k = static_cast<int>(i) + 1;
            const int expected = i < leading.size() ? leading[i] : k - 1;
            EXPECT_EQ(profiles[i].N_k, expected) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Structure, RootsAreSortedAndInsideRay) {
    for (int n : {7, 12, 30}) {
        for (const auto& prof : ray_profiles(n)) {
            for (std::size_t i = 0; i < prof.roots_theta.size(); ++i) {
                EXPECT_GT(prof.roots_theta[i], 0.0);
                EXPECT_LT(prof.roots_theta[i], prof.alpha);
                if (i) EXPECT_GT(prof.roots_theta[i], prof.roots_theta[i - 1]);
            }
        }
    }
}

TEST(Structure, RootsAreZerosOfImT) {
    for (int n : {4, 7, 12, 22, 40}) {
        const HarmonicMap f = build_standard(n);
        for (const auto& prof : ray_profiles(n)) {
            for (double r : prof.roots_r) {
                const complex z = std::polar(r, prof.alpha);
                const double scale = std::pow(1.0 + r, n) * n;
                EXPECT_LE(std::abs(f.split->T(z).imag()), 1e-11 * scale) << "n=" << n << " k=" << prof.k;
                EXPECT_LE(std::abs(eval(f, z)), 1e-11 * 2 * scale);
            }
        }
    }
}

TEST(Structure, ConjugateRayHasSameImT) {
    std::mt19937_64 rng(29);
    for (int n : {4, 9, 12, 25, 60}) {
        const HarmonicMap f = build_standard(n);
        std::uniform_real_distribution<double> u(0.0, 2.0 * n);
        for (int k = 1; k < n; ++k) {
            const complex dir = std::polar(1.0, pi * k / n);
            for (int i = 0; i < 100; ++i) {
                const double r = u(rng);
                const double up = f.split->T(r * dir).imag();
                const double down = f.split->T(r * std::conj(dir)).imag();
                EXPECT_NEAR(up, down, 1e-12 * std::pow(1.0 + r, n) * n);
            }
        }
    }
}

TEST(Totals, FormulaEqualsRaySumUpToSixty) {
    for (int n = 4; n <= 60; ++n) EXPECT_EQ(total_from_rays(n), predict_count(n).predicted) << "n=" << n;
}

TEST(Totals, SpecialRays) {
    for (int n = 4; n <= 20; ++n) {
        const auto [pos, neg] = special_ray_counts(n);
        EXPECT_EQ(pos, 1);
        EXPECT_EQ(neg, n - 1);
        const HarmonicMap f = build_standard(n);
        // Im T(-(1+h)) = -(-h)^(n-1) (n+h) vanishes to order n-1 at h = 0.
        for (double h : {1e-2, -1e-2}) {
            const double v = f.split->T(complex{-(1.0 + h), 0.0}).imag();
            EXPECT_NEAR(v / std::pow(-h, n - 1), -(n + h), 1e-6 * n) << "n=" << n;
        }
    }
}

TEST(Locations, CountsAndSymmetry) {
    for (int n : {4, 12}) {
        const auto zeros = ray_zero_locations(n);
        long long total = 0;
        for (const auto& z : zeros) total += z.multiplicity;
        EXPECT_EQ(total, predict_count(n).predicted);
        EXPECT_EQ(zeros.size(), static_cast<std::size_t>(total - (n - 2)));
        for (const auto& z : zeros) {
            if (z.location.imag() == 0.0) continue;
            const auto it = std::find_if(zeros.begin(), zeros.end(),
                                         [&](const Zero& w) { return w.location == std::conj(z.location); });
            ASSERT_NE(it, zeros.end());
            EXPECT_EQ(it->index, z.index);
        }
    }
    EXPECT_EQ(ray_zero_locations(4).size(), 8u);
    EXPECT_EQ(ray_zero_locations(12).size(), 116u);
}

TEST(Locations, MinusOneCarriesMultiplicity) {
    const auto zeros = ray_zero_locations(9);
    const auto it = std::find_if(zeros.begin(), zeros.end(), [](const Zero& z) { return z.location == complex{-1.0, 0.0}; });
    ASSERT_NE(it, zeros.end());
    EXPECT_EQ(it->multiplicity, 8);
    EXPECT_EQ(it->index, 0);
}

TEST(CriticalValues, CriticalMarginPositive) {
    for (int n = 4; n <= 60; ++n)
        for (int k = 2; k < n; ++k) EXPECT_GT(lemma2_margin(n, k), 0.0) << "n=" << n << " k=" << k;
    // k' = min(k_crit, k-1) = 4: 10 cot(7 pi/20) - 12 cot(5 pi/12)
    EXPECT_NEAR(lemma2_margin(12, 5), 1.87986418577081562746642521058, 1e-12);
    // k' = 1 for k = 2: 10 cot(pi/20) - 12 cot(pi/6)
    EXPECT_NEAR(lemma2_margin(12, 2), 10.0 / std::tan(pi / 20) - 12.0 / std::tan(pi / 6), 1e-12);
    EXPECT_THROW(lemma2_margin(12, 1), precondition_error);
}

TEST(CriticalValues, SineFormsCarryTheMarginSign) {
    for (int n = 4; n <= 60; ++n)
        for (int k = 2; k < n; ++k) {
            const double f = 4 * k < 3 * n ? lemma2_F1(n, k) : lemma2_F2(n, k);
            EXPECT_EQ(lemma2_margin(n, k) > 0, f > 0) << "n=" << n << " k=" << k;
        }
}

TEST(CriticalValues, FamilyOneCriticalValuesPositive) {
    for (int n = 4; n <= 60; ++n)
        for (int k = 1; k < n; ++k)
            for (double c : critical_points(n, k).first)
                if (c < pi * k / n) EXPECT_GT(ray_function(c, n, k), 0.0) << "n=" << n << " k=" << k;
}

TEST(CriticalValues, CotangentIdentity) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(0.05, pi - 0.05);
    std::uniform_int_distribution<int> degree(4, 60);
    for (int i = 0; i < 1000; ++i) {
        const double t1 = angle(rng), t2 = angle(rng);
        EXPECT_LT(std::abs(cot_identity_residual(t1, t2, degree(rng))), 1e-10);
    }
    EXPECT_THROW(cot_identity_residual(0.0, 1.0, 5), precondition_error);
}

TEST(CriticalValues, CnConstant) { EXPECT_NEAR(lemma2_Cn(12), 69.0 / 11.0, 1e-14); }

}  // namespace
