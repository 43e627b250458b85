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

#ifndef QHEDGE_INTERACTIVE_H
#define QHEDGE_INTERACTIVE_H

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhedge/channel.h"
#include "qhedge/linalg.h"

namespace qhedge {

inline constexpr double kMeasurementTol = 1e-8;

/// Thrown when the two ways of computing an outcome probability disagree.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A one-question test: a state rho on X (x) Z is prepared, X is handed to a
/// channel X -> Y, and {P_a} is measured on Y (x) Z.
struct InteractiveMeasurement {
    SpaceDims dims;
    ComplexMatrix rho;
    std::map<std::string, ComplexMatrix> outcomes;

    SystemDims state_dims() const { return {dims.x, dims.z}; }
    SystemDims measurement_dims() const { return {dims.y, dims.z}; }

    friend bool operator==(const InteractiveMeasurement &, const InteractiveMeasurement &) = default;
};

struct MeasurementDiagnostics {
    bool valid = false;
    bool shapes_ok = false;
    /// |Tr(rho) - 1|
    double trace_residual = 0;
    /// -min eigenvalue of rho (clamped at 0), or of any P_a.
    double state_psd_residual = 0;
    double outcome_psd_residual = 0;
    /// max-entry norm of sum_a P_a - 1.
    double completeness_residual = 0;
    std::vector<std::string> problems;
};

MeasurementDiagnostics validate_im(const InteractiveMeasurement &im, double tol = kMeasurementTol);

/// Q_a with <Q_a, J(Phi)> equal to the probability of outcome a under Phi.
struct EffectiveOperator {
    std::string outcome;
    ComplexMatrix q;
};

std::vector<EffectiveOperator> effective_operators(const InteractiveMeasurement &im);

/// Q_a for a single label. Throws std::out_of_range for unknown labels.
ComplexMatrix effective_operator(const InteractiveMeasurement &im, const std::string &outcome);

/// Both evaluations of one outcome probability.
struct OutcomeEvaluation {
    /// <P_a, (Phi (x) 1)(rho)>
    double direct = 0;
    /// <Q_a, J(Phi)>
    double via_choi = 0;
    double discrepancy() const { return std::abs(direct - via_choi); }
};

/// Evaluates every outcome along both paths. The strategy must be a channel
/// X -> Y; a disagreement above 1e-6 throws ConsistencyError.
std::map<std::string, OutcomeEvaluation> outcome_distribution(
    const InteractiveMeasurement &im, const ChoiOperator &strategy);

double outcome_probability(const InteractiveMeasurement &im, const ChoiOperator &strategy, const std::string &outcome);

/// "(a1,a2)"
std::string product_label(const std::string &a1, const std::string &a2);

/// Two tests run independently. Registers are grouped as (X1 X2)(Z1 Z2) for the state
/// and (Y1 Y2)(Z1 Z2) for the measurement.
InteractiveMeasurement product_compose(const InteractiveMeasurement &im1, const InteractiveMeasurement &im2);

/// Permutation taking (a1, b1, a2, b2) to (a1, a2, b1, b2); used for states,
/// measurements and effective operators of product tests.
inline constexpr std::size_t kInterleavedToGrouped[4] = {0, 2, 1, 3};

InteractiveMeasurement dephase_im(const InteractiveMeasurement &im);

bool is_classical(const InteractiveMeasurement &im, double tol = kHermitianTol);

}  // namespace qhedge

#endif
