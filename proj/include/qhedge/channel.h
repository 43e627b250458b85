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

#ifndef QHEDGE_CHANNEL_H
#define QHEDGE_CHANNEL_H

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qhedge/linalg.h"

namespace qhedge {

/// Tolerance used when deciding whether a Choi operator is a channel.
inline constexpr double kChannelTol = 1e-8;

struct ChannelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Choi-Jamiolkowski operator J(Phi) = sum_ij Phi(|i><j|) (x) |i><j| of a linear map
/// L(X) -> L(Y). The matrix lives on Y (x) X, output factor first.
class ChoiOperator {
   public:
    ChoiOperator() = default;
    ChoiOperator(std::size_t dim_in, std::size_t dim_out, ComplexMatrix matrix);

    std::size_t dim_in() const noexcept { return dim_in_; }
    std::size_t dim_out() const noexcept { return dim_out_; }
    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    /// {dim_out, dim_in}
    SystemDims dims() const { return {dim_out_, dim_in_}; }

    friend bool operator==(const ChoiOperator &, const ChoiOperator &) = default;

   private:
    std::size_t dim_in_ = 0;
    std::size_t dim_out_ = 0;
    ComplexMatrix matrix_;
};

struct ChannelValidity {
    bool completely_positive = false;
    bool trace_preserving = false;
    /// -min eigenvalue of J, clamped at 0.
    double cp_residual = 0;
    /// max-entry norm of Tr_Y(J) - 1_X.
    double tp_residual = 0;

    bool is_channel() const noexcept { return completely_positive && trace_preserving; }
};

ChoiOperator choi_identity(std::size_t dim);

/// Choi operator of X -> u X u^*. Requires u unitary within 1e-9.
ChoiOperator choi_from_unitary(const ComplexMatrix &u);

/// Choi operator of the map described by the Kraus operators (each dim_out x dim_in).
ChoiOperator choi_from_kraus(std::span<const ComplexMatrix> kraus);

ChannelValidity validate(const ChoiOperator &j, double tol = kChannelTol);

/// Kraus operators from the spectral decomposition of J. Eigenvalues in
/// [-clamp_tol, 0) count as zero; anything more negative throws ChannelError.
std::vector<ComplexMatrix> kraus_from_choi(const ChoiOperator &j, double clamp_tol = kPsdTol);

/// (Phi (x) 1_Z)(rho) for rho on X (x) Z, with dims = {dim_in, dim_z}.
ComplexMatrix apply_extended(const ChoiOperator &j, const ComplexMatrix &rho, const SystemDims &dims);

/// Register sizes for the operator triple X, Y, Z.
struct SpaceDims {
    std::size_t x = 1;
    std::size_t y = 1;
    std::size_t z = 1;

    friend bool operator==(const SpaceDims &, const SpaceDims &) = default;
};

/// (1_L(Y) (x) Psi_A)(B) for A on X (x) Z and B on Y (x) Z; the result is on Y (x) X.
///
/// Psi_A : L(Z) -> L(X) is the map with J(Psi_A) = conj(A). For A = |i><j| (x) |k><l|
/// it sends Z to |i><k| Z |l><j|, and it is extended over the standard basis with
/// conjugated coefficients, which makes
///     <B, (Phi (x) 1)(A)> = <(1 (x) Psi_A)(B), J(Phi)>
/// hold for every map Phi.
ComplexMatrix psi_apply(const ComplexMatrix &a, const ComplexMatrix &b, const SpaceDims &dims);

/// Choi operator of Phi_1 (x) Phi_2 on (Y1 (x) Y2) (x) (X1 (x) X2).
ChoiOperator choi_tensor(const ChoiOperator &j1, const ChoiOperator &j2);

}  // namespace qhedge

#endif
