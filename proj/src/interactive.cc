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

#include "qhedge/interactive.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qhedge {

namespace {

double psd_violation(const ComplexMatrix &m) {
    if (!check_hermitian(m).is_hermitian) {
        return INFINITY;
    }
    return std::max(0.0, -min_eigenvalue(m));
}

ComplexMatrix compose_operator(const ComplexMatrix &a, const SystemDims &da, const ComplexMatrix &b,
                               const SystemDims &db) {
    SystemDims interleaved{da[0], da[1], db[0], db[1]};
    return permute_systems(tensor(a, b), interleaved, kInterleavedToGrouped);
}

}  // namespace

MeasurementDiagnostics validate_im(const InteractiveMeasurement &im, double tol) {
    MeasurementDiagnostics d;
    const std::size_t nxz = im.dims.x * im.dims.z;
    const std::size_t nyz = im.dims.y * im.dims.z;
    d.shapes_ok = im.dims.x > 0 && im.dims.y > 0 && im.dims.z > 0 && im.rho.rows() == nxz && im.rho.cols() == nxz;
    for (const auto &[label, p] : im.outcomes) {
        if (p.rows() != nyz || p.cols() != nyz) {
            d.shapes_ok = false;
            d.problems.push_back("measurement operator '" + label + "' is not an operator on Y (x) Z");
        }
    }
    if (im.outcomes.empty()) {
        d.problems.push_back("no measurement outcomes");
    }
    if (!d.shapes_ok) {
        if (im.rho.rows() != nxz || im.rho.cols() != nxz) {
            d.problems.push_back("state is not an operator on X (x) Z");
        }
        return d;
    }

    d.trace_residual = std::abs(im.rho.trace() - Complex(1));
    d.state_psd_residual = psd_violation(im.rho);
    ComplexMatrix total(nyz, nyz);
    for (const auto &[label, p] : im.outcomes) {
        d.outcome_psd_residual = std::max(d.outcome_psd_residual, psd_violation(p));
        total += p;
    }
    d.completeness_residual = max_abs_diff(total, ComplexMatrix::identity(nyz));

    auto flag = [&](double residual, const char *what) {
        if (!(residual <= tol)) {
            std::stringstream ss;
            ss << what << " residual " << residual << " exceeds " << tol;
            d.problems.push_back(ss.str());
        }
    };
    flag(d.trace_residual, "state trace");
    flag(d.state_psd_residual, "state positivity");
    flag(d.outcome_psd_residual, "measurement positivity");
    flag(d.completeness_residual, "measurement completeness");
    d.valid = d.problems.empty();
    return d;
}

ComplexMatrix effective_operator(const InteractiveMeasurement &im, const std::string &outcome) {
    return psi_apply(im.rho, im.outcomes.at(outcome), im.dims);
}

std::vector<EffectiveOperator> effective_operators(const InteractiveMeasurement &im) {
    std::vector<EffectiveOperator> out;
    out.reserve(im.outcomes.size());
    for (const auto &[label, p] : im.outcomes) {
        out.push_back({label, psi_apply(im.rho, p, im.dims)});
    }
    return out;
}

std::map<std::string, OutcomeEvaluation> outcome_distribution(
    const InteractiveMeasurement &im, const ChoiOperator &strategy) {
    if (strategy.dim_in() != im.dims.x || strategy.dim_out() != im.dims.y) {
        throw DimensionError(
            "strategy maps dimension " + std::to_string(strategy.dim_in()) + " to " +
            std::to_string(strategy.dim_out()) + " but the test needs " + std::to_string(im.dims.x) + " to " +
            std::to_string(im.dims.y));
    }
    auto validity = validate(strategy);
    if (!validity.is_channel()) {
        std::stringstream ss;
        ss << "strategy is not a channel (cp residual " << validity.cp_residual << ", tp residual "
           << validity.tp_residual << ")";
        throw ChannelError(ss.str());
    }

    ComplexMatrix sigma = apply_extended(strategy, im.rho, im.state_dims());
    std::map<std::string, OutcomeEvaluation> out;
    for (const auto &[label, p] : im.outcomes) {
        OutcomeEvaluation e;
        e.direct = inner(p, sigma).real();
        e.via_choi = inner(psi_apply(im.rho, p, im.dims), strategy.matrix()).real();
        if (e.discrepancy() > 1e-6) {
            std::stringstream ss;
            ss << "outcome '" << label << "': direct probability " << e.direct << " disagrees with Choi route "
               << e.via_choi;
            throw ConsistencyError(ss.str());
        }
        out.emplace(label, e);
    }
    return out;
}

double outcome_probability(const InteractiveMeasurement &im, const ChoiOperator &strategy, const std::string &outcome) {
    if (!im.outcomes.contains(outcome)) {
        throw std::out_of_range("unknown outcome label '" + outcome + "'");
    }
    return outcome_distribution(im, strategy).at(outcome).direct;
}

std::string product_label(const std::string &a1, const std::string &a2) {
    return "(" + a1 + "," + a2 + ")";
}

InteractiveMeasurement product_compose(const InteractiveMeasurement &im1, const InteractiveMeasurement &im2) {
    InteractiveMeasurement out;
    out.dims = {im1.dims.x * im2.dims.x, im1.dims.y * im2.dims.y, im1.dims.z * im2.dims.z};
    out.rho = compose_operator(im1.rho, im1.state_dims(), im2.rho, im2.state_dims());
    for (const auto &[a1, p1] : im1.outcomes) {
        for (const auto &[a2, p2] : im2.outcomes) {
            out.outcomes.emplace(
                product_label(a1, a2), compose_operator(p1, im1.measurement_dims(), p2, im2.measurement_dims()));
        }
    }
    return out;
}

InteractiveMeasurement dephase_im(const InteractiveMeasurement &im) {
    InteractiveMeasurement out;
    out.dims = im.dims;
    out.rho = im.rho.diagonal_part();
    for (const auto &[label, p] : im.outcomes) {
        out.outcomes.emplace(label, p.diagonal_part());
    }
    return out;
}

bool is_classical(const InteractiveMeasurement &im, double tol) {
    auto diagonal = [tol](const ComplexMatrix &m) {
        for (std::size_t i = 0; i < m.rows(); i++) {
            for (std::size_t j = 0; j < m.cols(); j++) {
                if (i != j && std::abs(m(i, j)) > tol) {
                    return false;
                }
            }
        }
        return true;
    };
    return diagonal(im.rho) && std::all_of(im.outcomes.begin(), im.outcomes.end(), [&](const auto &kv) {
               return diagonal(kv.second);
           });
}

}  // namespace qhedge
