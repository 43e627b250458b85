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

#ifndef QHEDGE_SDP_H
#define QHEDGE_SDP_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhedge/channel.h"
#include "qhedge/linalg.h"

namespace qhedge {

enum class Sense { Max, Min };

std::string to_string(Sense sense);
/// Accepts "max" or "min".
Sense parse_sense(const std::string &text);

/// Optimize <Q, X> over X >= 0 on Y (x) X with Tr_Y(X) = 1_X, i.e. over the Choi
/// operators of all channels X -> Y.
///
/// Dual (max form): minimize Tr(Y) subject to 1_Y (x) Y >= Q.
/// Dual (min form): maximize Tr(Y) subject to 1_Y (x) Y <= Q.
struct PartialTraceSdp {
    ComplexMatrix q;
    std::size_t dim_x = 1;
    std::size_t dim_y = 1;
    Sense sense = Sense::Max;

    SystemDims dims() const { return {dim_y, dim_x}; }
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 200;
};

/// Objective values of the primal and dual iterates after one interior-point step,
/// in the caller's sense.
struct IterateRecord {
    double primal = 0;
    double dual = 0;
};

struct SdpSolution {
    /// A feasible Choi operator on Y (x) X.
    ComplexMatrix primal_x;
    /// Hermitian on X, after repair.
    ComplexMatrix dual_y;
    double primal_value = 0;
    /// Tr(dual_y), after repair.
    double dual_value = 0;
    /// Dual value before the repair shift.
    double raw_dual_value = 0;
    /// Multiple of 1_X added to (max) or subtracted from (min) the raw dual point.
    double dual_shift = 0;
    double gap = 0;
    /// max-entry norm of Tr_Y(X) - 1_X.
    double primal_residual = 0;
    /// -min eigenvalue of the dual slack (1 (x) Y - Q for max, Q - 1 (x) Y for min), clamped at 0.
    double dual_residual = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<IterateRecord> history;

    ChoiOperator strategy(const PartialTraceSdp &p) const { return ChoiOperator(p.dim_x, p.dim_y, primal_x); }
};

struct SdpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Primal-dual interior-point method on the real symmetric embedding of the problem.
/// Returns the best iterate with converged = false when max_iter runs out.
/// Throws NotHermitianError for a non-Hermitian Q and DimensionError for bad shapes.
SdpSolution solve(const PartialTraceSdp &p, const SolveOptions &options = {});

struct CertifyTolerances {
    double psd = 1e-8;
    double residual = 1e-7;
    double gap = 1e-7;
};

/// Independent recomputation of every quantity a solution claims.
struct CertificateReport {
    double primal_value = 0;
    double dual_value = 0;
    double gap = 0;
    double primal_residual = 0;
    /// -min eigenvalue of primal_x, clamped at 0.
    double primal_psd_residual = 0;
    double dual_residual = 0;
    bool weak_duality = false;
    bool values_match = false;
    bool passed = false;
    std::vector<std::string> failures;
};

CertificateReport certify(const PartialTraceSdp &p, const SdpSolution &s, const CertifyTolerances &tol = {});

/// Best objective over random channels (whitened random PSD Choi matrices,
/// unitary channels when dim_x == dim_y, and the identity channel when it fits).
/// A lower bound on the max and an upper bound on the min. Deterministic per seed.
double random_strategy_bound(const PartialTraceSdp &p, std::size_t samples, std::uint64_t seed);

/// Choi operator of a random channel X -> Y drawn by whitening a random PSD matrix
/// of the given rank (0 means full). Ranks below ceil(dim_x / dim_y) are raised to it.
ChoiOperator random_channel(std::size_t dim_x, std::size_t dim_y, std::uint64_t seed, std::size_t rank = 0);

struct ClassicalOptimum {
    double value = 0;
    /// f(i) for each input basis state i.
    std::vector<std::size_t> function;
    ChoiOperator strategy;
};

/// Exact optimum for diagonal Q, by enumerating the dim_y^dim_x deterministic
/// maps |i><i| -> |f(i)><f(i)|. Ties go to the lexicographically first f.
ClassicalOptimum classical_exact(const PartialTraceSdp &p);

inline constexpr std::size_t kClassicalEnumerationCap = 1000000;

}  // namespace qhedge

#endif
