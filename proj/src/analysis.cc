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

#include "qhedge/analysis.h"

#include <array>
#include <cmath>
#include <future>
#include <numbers>

namespace qhedge {

namespace {

constexpr double kEighthTurn = std::numbers::pi / 8;
constexpr unsigned kMaxBinomialN = 60;

void check_query(const ThresholdQuery &q) {
    if (q.t < 1 || q.t > q.k) {
        throw std::invalid_argument("threshold query needs 1 <= t <= k");
    }
    if (!(q.p >= 0 && q.p <= 1)) {
        throw std::invalid_argument("threshold query needs 0 <= p <= 1");
    }
    if (q.k > kMaxBinomialN) {
        throw std::invalid_argument("threshold query supports k <= 60");
    }
}

}  // namespace

std::vector<Complex> hedging_pass_vector() {
    return {std::cos(kEighthTurn), 0, 0, std::sin(kEighthTurn)};
}

std::vector<Complex> hedging_fail_vector() {
    return {-std::sin(kEighthTurn), 0, 0, std::cos(kEighthTurn)};
}

InteractiveMeasurement build_hedging_test() {
    const double h = 1 / std::sqrt(2.0);
    std::vector<Complex> u{h, 0, 0, h};
    ComplexMatrix pass = ComplexMatrix::projector(hedging_pass_vector());

    InteractiveMeasurement im;
    im.dims = {2, 2, 2};
    im.rho = ComplexMatrix::projector(u);
    im.outcomes.emplace("1", pass);
    im.outcomes.emplace("0", ComplexMatrix::identity(4) - pass);
    return im;
}

InteractiveMeasurement build_echo_test() {
    const std::array<double, 4> same{1, 0, 0, 1};
    ComplexMatrix pass = ComplexMatrix::diagonal(same);

    InteractiveMeasurement im;
    im.dims = {2, 2, 2};
    im.rho = 0.5 * pass;
    im.outcomes.emplace("1", pass);
    im.outcomes.emplace("0", ComplexMatrix::identity(4) - pass);
    return im;
}

ChoiOperator hedging_strategy() {
    const std::array<double, 4> flip{-1, 1, 1, 1};
    return choi_from_unitary(ComplexMatrix::diagonal(flip));
}

bool HedgingReport::all_checks_passed() const {
    for (const auto &[name, ok] : checks) {
        if (!ok) {
            return false;
        }
    }
    return true;
}

HedgingReport verify_hedging(double tol, int max_iter) {
    const InteractiveMeasurement test = build_hedging_test();
    const InteractiveMeasurement pair = product_compose(test, test);
    const SolveOptions options{tol, max_iter};

    auto launch = [&](const InteractiveMeasurement &im, const std::string &label, Sense sense) {
        PartialTraceSdp p{effective_operator(im, label), im.dims.x, im.dims.y, sense};
        return std::async(std::launch::async, [p, options] {
            return solve(p, options);
        });
    };
    auto single_max = launch(test, "1", Sense::Max);
    auto single_min = launch(test, "0", Sense::Min);
    auto joint_fail = launch(pair, product_label("0", "0"), Sense::Min);
    auto joint_pass = launch(pair, product_label("1", "1"), Sense::Max);

    HedgingReport r;
    r.single_max_solution = single_max.get();
    r.single_min_solution = single_min.get();
    r.joint_fail_solution = joint_fail.get();
    r.joint_pass_solution = joint_pass.get();
    for (const auto *s : {&r.single_max_solution, &r.single_min_solution, &r.joint_fail_solution,
                          &r.joint_pass_solution}) {
        if (!s->converged) {
            throw SdpError("verify_hedging: solver did not converge within " + std::to_string(max_iter) +
                           " iterations");
        }
    }
    r.single_max = r.single_max_solution.primal_value;
    r.single_min_fail = r.single_min_solution.primal_value;
    r.joint_fail_min = r.joint_fail_solution.primal_value;
    r.joint_pass_max = r.joint_pass_solution.primal_value;

    double total = 0;
    for (const auto &[label, e] : outcome_distribution(pair, hedging_strategy())) {
        r.strategy_distribution[label] = e.direct;
        total += e.direct;
    }
    r.strategy_joint_fail = r.strategy_distribution.at(product_label("0", "0"));
    r.strategy_pass_any = 1 - r.strategy_joint_fail;
    r.classical_bound = classical_threshold_bound({2, 1, r.single_max});
    r.classical_bound_violated = r.strategy_pass_any > r.classical_bound;

    const double half_1_0 = r.strategy_distribution.at(product_label("1", "0"));
    const double half_0_1 = r.strategy_distribution.at(product_label("0", "1"));
    r.checks = {
        {"joint_fail_min <= 1e-6", r.joint_fail_min <= 1e-6},
        {"strategy_joint_fail <= tol", std::abs(r.strategy_joint_fail) <= tol},
        {"strategy_distribution sums to 1", std::abs(total - 1) <= 1e-9},
        {"strategy passes exactly one test", std::abs(half_1_0 - 0.5) <= 1e-9 && std::abs(half_0_1 - 0.5) <= 1e-9},
        {"single_min_fail = 1 - single_max", std::abs(r.single_min_fail - (1 - r.single_max)) <= 1e-8},
        {"joint_fail_min <= single_min_fail^2", r.joint_fail_min <= r.single_min_fail * r.single_min_fail + 1e-7},
        {"joint_pass_max = single_max^2", std::abs(r.joint_pass_max - r.single_max * r.single_max) <= 1e-6},
        {"classical bound violated", r.classical_bound_violated},
    };
    return r;
}

FidelityChain fidelity_bound_chain() {
    const double h = 1 / std::sqrt(2.0);
    std::vector<Complex> u{h, 0, 0, h};
    FidelityChain chain;
    chain.reduced_pass = partial_trace(ComplexMatrix::projector(hedging_pass_vector()), {2, 2}, 0);
    chain.reduced_state = partial_trace(ComplexMatrix::projector(u), {2, 2}, 0);
    chain.trace_norm = trace_norm(sqrt_psd(chain.reduced_pass) * sqrt_psd(chain.reduced_state));
    chain.value = chain.trace_norm * chain.trace_norm;
    return chain;
}

std::uint64_t binomial(unsigned n, unsigned r) {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kMaxBinomialN + 1>, kMaxBinomialN + 1> t{};
        for (unsigned i = 0; i <= kMaxBinomialN; i++) {
            t[i][0] = 1;
            for (unsigned j = 1; j <= i; j++) {
                t[i][j] = t[i - 1][j - 1] + (j < i ? t[i - 1][j] : 0);
            }
        }
        return t;
    }();
    if (n > kMaxBinomialN) {
        throw std::invalid_argument("binomial: n must be <= 60");
    }
    return r > n ? 0 : table[n][r];
}

double classical_threshold_bound(const ThresholdQuery &q) {
    check_query(q);
    double total = 0;
    for (unsigned j = q.t; j <= q.k; j++) {
        total += static_cast<double>(binomial(q.k, j)) * std::pow(q.p, j) * std::pow(1 - q.p, q.k - j);
    }
    return total;
}

double quantum_threshold_bound(const ThresholdQuery &q) {
    check_query(q);
    double total = 0;
    for (unsigned j = q.t; j <= q.k; j++) {
        total += static_cast<double>(binomial(q.k, j)) * std::pow(q.p, j);
    }
    return total;
}

}  // namespace qhedge
