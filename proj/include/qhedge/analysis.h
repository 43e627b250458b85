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

#ifndef QHEDGE_ANALYSIS_H
#define QHEDGE_ANALYSIS_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qhedge/channel.h"
#include "qhedge/interactive.h"
#include "qhedge/sdp.h"

namespace qhedge {

/// The two-qubit test: rho = u u^* with u = (|00> + |11>)/sqrt(2), pass ("1") is
/// v v^* with v = cos(pi/8)|00> + sin(pi/8)|11>, fail ("0") is its complement.
InteractiveMeasurement build_hedging_test();

/// Classical echo: rho = (|00><00| + |11><11|)/2 on X (x) Z, pass ("1") projects
/// onto y = z. The identity channel always passes and the bit flip always fails.
InteractiveMeasurement build_echo_test();

/// Conjugation by diag(-1, 1, 1, 1) on the two qubits sent out by a pair of hedging tests.
ChoiOperator hedging_strategy();

/// v and w = -sin(pi/8)|00> + cos(pi/8)|11>, the pass/fail vectors of one hedging test.
std::vector<Complex> hedging_pass_vector();
std::vector<Complex> hedging_fail_vector();

struct HedgingReport {
    /// max probability of passing one test
    double single_max = 0;
    /// min probability of failing one test
    double single_min_fail = 0;
    /// min probability of failing both tests of a pair
    double joint_fail_min = 0;
    /// max probability of passing both tests of a pair
    double joint_pass_max = 0;
    /// outcome distribution of the pair under the phase-flip strategy
    std::map<std::string, double> strategy_distribution;
    double strategy_joint_fail = 0;
    /// probability the strategy passes at least one of the two tests
    double strategy_pass_any = 0;
    /// classical bound on passing at least one of two tests at single-test value single_max
    double classical_bound = 0;
    bool classical_bound_violated = false;

    SdpSolution single_max_solution;
    SdpSolution single_min_solution;
    SdpSolution joint_fail_solution;
    SdpSolution joint_pass_solution;

    /// Named checks (e.g. "joint_fail_min <= tol") with their outcome.
    std::vector<std::pair<std::string, bool>> checks;
    bool all_checks_passed() const;
};

/// Solves the single-test and pair SDPs, evaluates the phase-flip strategy on the
/// pair and checks the perfect-hedging claims. Throws SdpError if a solve does not converge.
HedgingReport verify_hedging(double tol = 1e-8, int max_iter = 200);

/// Upper bound on the pass probability of one hedging test via fidelity monotonicity
/// under Tr_Y.
struct FidelityChain {
    /// Tr_Y(v v^*)
    ComplexMatrix reduced_pass;
    /// Tr_Y(sigma) = Tr_X(u u^*)
    ComplexMatrix reduced_state;
    /// ||sqrt(reduced_pass) sqrt(reduced_state)||_1
    double trace_norm = 0;
    /// trace_norm squared
    double value = 0;
};

FidelityChain fidelity_bound_chain();

/// k repetitions, at least t of which must pass, each with probability p.
struct ThresholdQuery {
    unsigned k = 1;
    unsigned t = 1;
    double p = 0;
};

/// Exact C(n, r) for n <= 60.
std::uint64_t binomial(unsigned n, unsigned r);

/// sum_{j=t}^{k} C(k,j) p^j (1-p)^(k-j)
double classical_threshold_bound(const ThresholdQuery &q);

/// sum_{j=t}^{k} C(k,j) p^j; not capped at 1.
double quantum_threshold_bound(const ThresholdQuery &q);

}  // namespace qhedge

#endif
