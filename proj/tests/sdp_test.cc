// Copyright 2026 The qhedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qhedge/sdp.h"

#include <array>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle.h"
#include "qhedge/analysis.h"

using namespace qhedge;

namespace {

PartialTraceSdp hedging_sdp(const std::string &label, Sense sense) {
    InteractiveMeasurement im = build_hedging_test();
    return {effective_operator(im, label), 2, 2, sense};
}

PartialTraceSdp pair_sdp(const std::string &label, Sense sense) {
    InteractiveMeasurement t = build_hedging_test();
    InteractiveMeasurement pair = product_compose(t, t);
    return {effective_operator(pair, label), 4, 4, sense};
}

void expect_certified(const PartialTraceSdp &p, const SdpSolution &s) {
    ASSERT_TRUE(s.converged);
    auto c = certify(p, s);
    EXPECT_TRUE(c.passed) << (c.failures.empty() ? "" : c.failures.front());
    EXPECT_TRUE(c.weak_duality);
    EXPECT_LE(s.gap, 1e-8);
}

/// Weak duality along the whole iterate path.
void expect_weak_duality_history(const PartialTraceSdp &p, const SdpSolution &s) {
    ASSERT_FALSE(s.history.empty());
    for (const auto &it : s.history) {
        if (p.sense == Sense::Max) {
            EXPECT_LE(it.primal, it.dual + 1e-9);
        } else {
            EXPECT_LE(it.dual, it.primal + 1e-9);
        }
    }
}

ComplexMatrix random_sdp_q(std::size_t dx, std::size_t dy, std::mt19937_64 &rng) {
    ComplexMatrix q = oracle::random_psd(dx * dy, rng, 1 + rng() % (dx * dy));
    return (1.0 / q.trace().real()) * q;
}

}  // namespace

TEST(solve, single_test_optimum) {
    auto p = hedging_sdp("1", Sense::Max);
    auto s = solve(p);
    EXPECT_NEAR(s.primal_value, 0.8535533906, 1e-6);
    EXPECT_NEAR(s.primal_value, oracle::kCos2, 1e-6);
    expect_certified(p, s);
    expect_weak_duality_history(p, s);
}

TEST(solve, single_test_failure_floor) {
    auto p = hedging_sdp("0", Sense::Min);
    auto s = solve(p);
    EXPECT_NEAR(s.primal_value, 0.1464466094, 1e-6);
    expect_certified(p, s);
    expect_weak_duality_history(p, s);
}

TEST(solve, pair_joint_fail_is_zero) {
    auto p = pair_sdp("(0,0)", Sense::Min);
    auto s = solve(p);
    EXPECT_LE(s.primal_value, 1e-6);
    EXPECT_GE(s.primal_value, -1e-8);
    expect_certified(p, s);
    expect_weak_duality_history(p, s);
}

TEST(solve, pair_joint_pass_is_product) {
    auto p = pair_sdp("(1,1)", Sense::Max);
    auto s = solve(p);
    EXPECT_NEAR(s.primal_value, 0.7285533906, 1e-6);
    EXPECT_NEAR(s.primal_value, oracle::kCos2 * oracle::kCos2, 1e-6);
    expect_certified(p, s);
}

TEST(solve, primal_is_a_channel_and_dual_is_feasible) {
    for (Sense sense : {Sense::Max, Sense::Min}) {
        auto p = hedging_sdp("1", sense);
        auto s = solve(p);
        auto v = validate(s.strategy(p), 1e-7);
        EXPECT_TRUE(v.completely_positive && v.trace_preserving);
        ComplexMatrix lifted = tensor(ComplexMatrix::identity(2), s.dual_y);
        ComplexMatrix slack = sense == Sense::Max ? lifted - p.q : p.q - lifted;
        EXPECT_TRUE(is_psd(slack.hermitian_part(), 1e-8));
        // Primal value re-evaluated from scratch.
        EXPECT_NEAR(oracle::inner(p.q, s.primal_x).real(), s.primal_value, 1e-12);
    }
}

TEST(solve, tighter_tolerance_takes_more_iterations) {
    auto p = pair_sdp("(0,0)", Sense::Min);
    auto loose = solve(p, {1e-6, 200});
    auto tight = solve(p, {1e-10, 200});
    ASSERT_TRUE(loose.converged && tight.converged);
    EXPECT_LE(loose.iterations, tight.iterations);
    EXPECT_LE(tight.gap, 1e-10);
    EXPECT_LE(tight.primal_value, 1e-9);
}

TEST(solve, deterministic) {
    auto p = pair_sdp("(0,0)", Sense::Min);
    auto a = solve(p), b = solve(p);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.primal_value, b.primal_value);
    EXPECT_EQ(a.dual_value, b.dual_value);
    EXPECT_EQ(a.primal_x, b.primal_x);
    EXPECT_EQ(a.dual_y, b.dual_y);
}

TEST(solve, iteration_limit_returns_flagged_iterate) {
    auto p = pair_sdp("(0,0)", Sense::Min);
    auto s = solve(p, {1e-8, 1});
    EXPECT_FALSE(s.converged);
    EXPECT_EQ(s.iterations, 1);
    // Still a feasible pair, so still a valid bound.
    EXPECT_LE(s.dual_value, s.primal_value + 1e-9);
    EXPECT_LT(s.primal_residual, 1e-7);
}

TEST(solve, input_errors) {
    auto p = hedging_sdp("1", Sense::Max);
    EXPECT_THROW(solve(p, {1e-13, 200}), std::invalid_argument);
    EXPECT_THROW(solve(p, {0.1, 200}), std::invalid_argument);
    PartialTraceSdp bad = p;
    bad.q(0, 1) += 1e-3;
    EXPECT_THROW(solve(bad), NotHermitianError);
    PartialTraceSdp wrong = p;
    wrong.dim_x = 3;
    EXPECT_THROW(solve(wrong), DimensionError);
}

TEST(solve, trivial_output_space) {
    std::mt19937_64 rng(1);
    ComplexMatrix q = oracle::random_hermitian(3, rng);
    for (Sense sense : {Sense::Max, Sense::Min}) {
        PartialTraceSdp p{q, 3, 1, sense};
        auto s = solve(p);
        EXPECT_NEAR(s.primal_value, q.trace().real(), 1e-12);
        expect_certified(p, s);
    }
}

TEST(solve, indefinite_objective) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; trial++) {
        PartialTraceSdp p{oracle::random_hermitian(6, rng), 3, 2, trial % 2 ? Sense::Min : Sense::Max};
        auto s = solve(p);
        expect_certified(p, s);
        expect_weak_duality_history(p, s);
    }
}

TEST(solve, strict_feasibility_of_scalar_points) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; trial++) {
        std::size_t dx = 1 + trial % 3, dy = 1 + (trial / 3) % 3;
        ComplexMatrix q = random_sdp_q(dx, dy, rng);
        ComplexMatrix x0 = (1.0 / static_cast<double>(dy)) * ComplexMatrix::identity(dx * dy);
        EXPECT_GT(min_eigenvalue(x0), 0);
        EXPECT_LT(max_abs_diff(partial_trace(x0, {dy, dx}, 0), ComplexMatrix::identity(dx)), 1e-15);
        double lambda = 0;
        for (std::size_t i = 0; i < q.rows(); i++) {
            double row = 0;
            for (std::size_t j = 0; j < q.cols(); j++) {
                row += std::abs(q(i, j));
            }
            lambda = std::max(lambda, row);
        }
        ComplexMatrix lifted = (lambda + 1) * ComplexMatrix::identity(dx * dy);
        EXPECT_GT(min_eigenvalue((lifted - q).hermitian_part()), 0);
        EXPECT_GT(min_eigenvalue((q + lifted).hermitian_part()), 0);
    }
}

TEST(solve, max_is_multiplicative) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 6; trial++) {
        std::size_t dx1 = 1 + trial % 2, dy1 = 2, dx2 = 2, dy2 = 1 + (trial / 2) % 2;
        ComplexMatrix q1 = random_sdp_q(dx1, dy1, rng), q2 = random_sdp_q(dx2, dy2, rng);
        ComplexMatrix q12 = permute_systems(tensor(q1, q2), {dy1, dx1, dy2, dx2}, kInterleavedToGrouped);
        double m1 = solve({q1, dx1, dy1, Sense::Max}).primal_value;
        double m2 = solve({q2, dx2, dy2, Sense::Max}).primal_value;
        PartialTraceSdp p{q12, dx1 * dx2, dy1 * dy2, Sense::Max};
        auto s = solve(p);
        EXPECT_NEAR(s.primal_value, m1 * m2, 1e-6);
        expect_certified(p, s);
    }
}

TEST(solve, min_is_submultiplicative) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; trial++) {
        ComplexMatrix q1 = random_sdp_q(2, 2, rng), q2 = random_sdp_q(2, 2, rng);
        ComplexMatrix q12 = permute_systems(tensor(q1, q2), {2, 2, 2, 2}, kInterleavedToGrouped);
        double m1 = solve({q1, 2, 2, Sense::Min}).primal_value;
        double m2 = solve({q2, 2, 2, Sense::Min}).primal_value;
        PartialTraceSdp p{q12, 4, 4, Sense::Min};
        auto s = solve(p);
        EXPECT_LE(s.primal_value, m1 * m2 + 1e-7);
        expect_certified(p, s);
    }
}

TEST(solve, random_instances_certify) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; trial++) {
        std::size_t dx = 1 + trial % 3, dy = 1 + (trial / 3) % 3;
        PartialTraceSdp p{random_sdp_q(dx, dy, rng), dx, dy, trial % 2 ? Sense::Min : Sense::Max};
        auto s = solve(p);
        expect_certified(p, s);
        expect_weak_duality_history(p, s);
    }
}

TEST(solve, min_sense_dual_can_be_indefinite) {
    // The min-sense dual Y only needs 1 (x) Y <= Q, so nothing forces Y >= 0.
    // Search small random instances for an optimal Y with a negative eigenvalue
    // and record what was found; existence is not asserted.
    std::mt19937_64 rng(7);
    int found = 0, tried = 0;
    double most_negative = 0;
    for (int trial = 0; trial < 40; trial++) {
        std::size_t dx = 2, dy = 2;
        ComplexMatrix q = random_sdp_q(dx, dy, rng);
        PartialTraceSdp p{q, dx, dy, Sense::Min};
        auto s = solve(p);
        if (!s.converged) {
            continue;
        }
        tried++;
        double lo = min_eigenvalue(s.dual_y);
        most_negative = std::min(most_negative, lo);
        if (lo < -1e-6) {
            found++;
        }
    }
    RecordProperty("instances", tried);
    RecordProperty("indefinite_duals", found);
    RecordProperty("most_negative_dual_eigenvalue", std::to_string(most_negative));
    std::cout << "min-sense duals with a negative eigenvalue: " << found << " of " << tried
              << " (most negative " << most_negative << ")\n";
    EXPECT_GT(tried, 0);
}

TEST(certify, rejects_zero_primal) {
    auto p = hedging_sdp("1", Sense::Max);
    auto s = solve(p);
    s.primal_x = ComplexMatrix(4, 4);
    auto c = certify(p, s);
    EXPECT_FALSE(c.passed);
    EXPECT_NEAR(c.primal_residual, 1, 1e-12);
}

TEST(certify, rejects_claims_that_do_not_recompute) {
    auto p = hedging_sdp("1", Sense::Max);
    auto s = solve(p);
    SdpSolution lie = s;
    lie.primal_value += 1e-3;
    EXPECT_FALSE(certify(p, lie).passed);
    lie = s;
    lie.dual_y = 0.5 * s.dual_y;
    EXPECT_FALSE(certify(p, lie).passed);
    lie = s;
    lie.primal_x = -1.0 * s.primal_x + 2.0 / 2 * ComplexMatrix::identity(4);
    EXPECT_FALSE(certify(p, lie).passed);
}

TEST(certify, hand_built_diagonal_pair) {
    // For diagonal Q the optimal dual is Y = diag(max_y Q[(y,i),(y,i)]) and the
    // optimal primal is the deterministic map picking that y.
    const std::array<double, 6> d{0.3, 0.9, 0.1, 0.7, 0.2, 0.4};  // (y, i) with dy = 2, dx = 3
    PartialTraceSdp p{ComplexMatrix::diagonal(d), 3, 2, Sense::Max};
    SdpSolution s;
    s.primal_x = ComplexMatrix(6, 6);
    s.dual_y = ComplexMatrix(3, 3);
    for (std::size_t i = 0; i < 3; i++) {
        std::size_t y = d[i] >= d[3 + i] ? 0 : 1;
        s.primal_x(y * 3 + i, y * 3 + i) = 1;
        s.dual_y(i, i) = d[y * 3 + i];
    }
    s.primal_value = s.dual_value = 0.7 + 0.9 + 0.4;
    s.converged = true;
    auto c = certify(p, s);
    EXPECT_TRUE(c.passed);
    EXPECT_NEAR(c.gap, 0, 1e-15);
    EXPECT_NEAR(classical_exact(p).value, 2.0, 1e-15);
}

TEST(random_strategy_bound, hedging_sampling) {
    auto p = hedging_sdp("1", Sense::Max);
    double b = random_strategy_bound(p, 1000, 0);
    EXPECT_LE(b, 0.8535533906 + 1e-9);
    EXPECT_GE(b, 0.84);
    EXPECT_EQ(b, random_strategy_bound(p, 1000, 0));
    auto q = hedging_sdp("0", Sense::Min);
    EXPECT_GE(random_strategy_bound(q, 1000, 1), 0.1464466094 - 1e-9);
}

TEST(random_strategy_bound, unique_channel_for_one_dimensional_problem) {
    PartialTraceSdp p{ComplexMatrix{{0.37}}, 1, 1, Sense::Max};
    EXPECT_EQ(random_strategy_bound(p, 5, 3), 0.37);
    p.sense = Sense::Min;
    EXPECT_EQ(random_strategy_bound(p, 5, 3), 0.37);
}

TEST(random_strategy_bound, never_beats_solver) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; trial++) {
        std::size_t dx = 1 + trial % 3, dy = 1 + (trial / 3) % 3;
        PartialTraceSdp p{random_sdp_q(dx, dy, rng), dx, dy, trial % 2 ? Sense::Min : Sense::Max};
        auto s = solve(p);
        double b = random_strategy_bound(p, 200, trial);
        if (p.sense == Sense::Max) {
            EXPECT_LE(b, s.dual_value + 1e-9);
        } else {
            EXPECT_GE(b, s.dual_value - 1e-9);
        }
    }
}

TEST(random_channel, is_a_channel) {
    for (std::uint64_t seed = 0; seed < 10; seed++) {
        auto v = validate(random_channel(1 + seed % 3, 1 + (seed / 3) % 3, seed, seed % 3));
        EXPECT_TRUE(v.completely_positive && v.trace_preserving) << seed;
    }
}

TEST(classical_exact, dephased_hedging) {
    InteractiveMeasurement im = dephase_im(build_hedging_test());
    PartialTraceSdp p{effective_operator(im, "1"), 2, 2, Sense::Max};
    auto c = classical_exact(p);
    EXPECT_NEAR(c.value, 0.5 * (oracle::kCos2 + oracle::kSin2), 1e-15);
    EXPECT_NEAR(c.value, 0.5, 1e-15);
    EXPECT_EQ(c.function, (std::vector<std::size_t>{0, 1}));
    EXPECT_NEAR(solve(p).primal_value, c.value, 1e-7);
}

TEST(classical_exact, echo) {
    InteractiveMeasurement im = build_echo_test();
    PartialTraceSdp p{effective_operator(im, "1"), 2, 2, Sense::Max};
    auto best = classical_exact(p);
    EXPECT_NEAR(best.value, 1, 1e-15);
    EXPECT_EQ(best.function, (std::vector<std::size_t>{0, 1}));
    EXPECT_LT(max_abs_diff(best.strategy.matrix(), choi_identity(2).matrix().diagonal_part()), 1e-15);
    p.sense = Sense::Min;
    auto worst = classical_exact(p);
    EXPECT_NEAR(worst.value, 0, 1e-15);
    EXPECT_EQ(worst.function, (std::vector<std::size_t>{1, 0}));
}

TEST(classical_exact, uncorrelated_test_ties_break_lexicographically) {
    // Alice keeps a uniform bit she never sends; Bob is accepted iff his output
    // equals it. Every deterministic strategy succeeds with probability 1/2.
    InteractiveMeasurement im;
    im.dims = {2, 2, 2};
    im.rho = 0.25 * ComplexMatrix::identity(4);
    const std::array<double, 4> same{1, 0, 0, 1};
    im.outcomes.emplace("1", ComplexMatrix::diagonal(same));
    im.outcomes.emplace("0", ComplexMatrix::identity(4) - ComplexMatrix::diagonal(same));
    ASSERT_TRUE(validate_im(im).valid);
    for (Sense sense : {Sense::Max, Sense::Min}) {
        PartialTraceSdp p{effective_operator(im, "1"), 2, 2, sense};
        auto c = classical_exact(p);
        EXPECT_NEAR(c.value, 0.5, 1e-15);
        EXPECT_EQ(c.function, (std::vector<std::size_t>{0, 0}));
    }
}

TEST(classical_exact, errors) {
    auto p = hedging_sdp("1", Sense::Max);
    EXPECT_THROW(classical_exact(p), std::invalid_argument);
    PartialTraceSdp big{ComplexMatrix::identity(21 * 2), 21, 2, Sense::Max};
    EXPECT_THROW(classical_exact(big), std::invalid_argument);
}

TEST(classical_exact, matches_solver_on_random_diagonal_instances) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; trial++) {
        std::size_t dx = 1 + trial % 3, dy = 1 + (trial / 3) % 3;
        ComplexMatrix q = oracle::random_diagonal_psd(dx * dy, rng);
        for (Sense sense : {Sense::Max, Sense::Min}) {
            PartialTraceSdp p{q, dx, dy, sense};
            double exact = classical_exact(p).value;
            EXPECT_NEAR(exact, oracle::classical_optimum(q, dx, dy, sense == Sense::Max), 1e-15);
            auto s = solve(p);
            EXPECT_NEAR(s.primal_value, exact, 1e-7);
            expect_certified(p, s);
        }
    }
}
