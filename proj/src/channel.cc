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

#include "qhedge/channel.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace qhedge {

ChoiOperator::ChoiOperator(std::size_t dim_in, std::size_t dim_out, ComplexMatrix matrix)
    : dim_in_(dim_in), dim_out_(dim_out), matrix_(std::move(matrix)) {
    if (dim_in == 0 || dim_out == 0) {
        throw DimensionError("ChoiOperator: dimensions must be >= 1");
    }
    std::size_t n = dim_in * dim_out;
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw DimensionError(
            "ChoiOperator: expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix for dims (in=" +
            std::to_string(dim_in) + ", out=" + std::to_string(dim_out) + ")");
    }
}

ChoiOperator choi_identity(std::size_t dim) {
    ComplexMatrix j(dim * dim, dim * dim);
    for (std::size_t i = 0; i < dim; i++) {
        for (std::size_t k = 0; k < dim; k++) {
            j(i * dim + i, k * dim + k) = 1;
        }
    }
    return ChoiOperator(dim, dim, std::move(j));
}

ChoiOperator choi_from_unitary(const ComplexMatrix &u) {
    if (!u.is_square()) {
        throw DimensionError("choi_from_unitary: matrix must be square");
    }
    double err = max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
    if (err > 1e-9) {
        throw ChannelError("choi_from_unitary: matrix is not unitary (residual " + std::to_string(err) + ")");
    }
    std::array<ComplexMatrix, 1> kraus{u};
    return choi_from_kraus(kraus);
}

ChoiOperator choi_from_kraus(std::span<const ComplexMatrix> kraus) {
    if (kraus.empty()) {
        throw std::invalid_argument("choi_from_kraus: need at least one operator");
    }
    std::size_t dout = kraus.front().rows();
    std::size_t din = kraus.front().cols();
    ComplexMatrix j(dout * din, dout * din);
    for (const auto &k : kraus) {
        if (k.rows() != dout || k.cols() != din) {
            throw DimensionError("choi_from_kraus: Kraus operators differ in shape");
        }
        // vec(K)[(y, x)] = K[y, x]; J = sum vec(K) vec(K)^*.
        std::span<const Complex> v = k.entries();
        for (std::size_t a = 0; a < v.size(); a++) {
            for (std::size_t b = 0; b < v.size(); b++) {
                j(a, b) += v[a] * std::conj(v[b]);
            }
        }
    }
    return ChoiOperator(din, dout, std::move(j));
}

ChannelValidity validate(const ChoiOperator &j, double tol) {
    ChannelValidity out;
    auto herm = check_hermitian(j.matrix());
    double min_eig = herm.is_hermitian ? min_eigenvalue(j.matrix()) : -INFINITY;
    out.cp_residual = std::max(0.0, -min_eig);
    out.completely_positive = herm.is_hermitian && out.cp_residual <= tol;

    ComplexMatrix reduced = partial_trace(j.matrix(), j.dims(), 0);
    out.tp_residual = max_abs_diff(reduced, ComplexMatrix::identity(j.dim_in()));
    out.trace_preserving = out.tp_residual <= tol;
    return out;
}

std::vector<ComplexMatrix> kraus_from_choi(const ChoiOperator &j, double clamp_tol) {
    auto eig = eig_hermitian(j.matrix());
    double top = std::max(1.0, std::abs(eig.values.back()));
    std::vector<ComplexMatrix> kraus;
    for (std::size_t r = eig.values.size(); r-- > 0;) {
        double lambda = eig.values[r];
        if (lambda < -clamp_tol) {
            throw ChannelError("kraus_from_choi: Choi operator has eigenvalue " + std::to_string(lambda));
        }
        // Drop numerically-zero weight so rank-one operators give one Kraus operator.
        if (lambda <= 1e-13 * top) {
            continue;
        }
        double w = std::sqrt(lambda);
        ComplexMatrix k(j.dim_out(), j.dim_in());
        for (std::size_t a = 0; a < k.entries().size(); a++) {
            k.entries()[a] = w * eig.vectors(a, r);
        }
        kraus.push_back(std::move(k));
    }
    return kraus;
}

ComplexMatrix apply_extended(const ChoiOperator &j, const ComplexMatrix &rho, const SystemDims &dims) {
    if (dims.size() != 2 || dims[0] != j.dim_in() || dims.total() != rho.rows() || !rho.is_square()) {
        throw DimensionError("apply_extended: state must live on X (x) Z with X matching the channel input");
    }
    if (!check_hermitian(rho).is_hermitian) {
        throw NotHermitianError("apply_extended: state is not Hermitian");
    }
    const std::size_t dz = dims[1];
    const std::size_t dx = j.dim_in();
    const std::size_t dy = j.dim_out();
    ComplexMatrix sigma(dy * dz, dy * dz);
    for (const auto &k : kraus_from_choi(j)) {
        // (K (x) 1_Z) rho (K (x) 1_Z)^*, written out blockwise.
        ComplexMatrix left(dy * dz, dx * dz);
        for (std::size_t y = 0; y < dy; y++) {
            for (std::size_t x = 0; x < dx; x++) {
                Complex kyx = k(y, x);
                if (kyx == Complex(0)) {
                    continue;
                }
                for (std::size_t z = 0; z < dz; z++) {
                    for (std::size_t c = 0; c < dx * dz; c++) {
                        left(y * dz + z, c) += kyx * rho(x * dz + z, c);
                    }
                }
            }
        }
        for (std::size_t r = 0; r < dy * dz; r++) {
            for (std::size_t y = 0; y < dy; y++) {
                for (std::size_t x = 0; x < dx; x++) {
                    Complex kc = std::conj(k(y, x));
                    if (kc == Complex(0)) {
                        continue;
                    }
                    for (std::size_t z = 0; z < dz; z++) {
                        sigma(r, y * dz + z) += left(r, x * dz + z) * kc;
                    }
                }
            }
        }
    }
    return sigma;
}

ComplexMatrix psi_apply(const ComplexMatrix &a, const ComplexMatrix &b, const SpaceDims &dims) {
    const std::size_t dx = dims.x;
    const std::size_t dy = dims.y;
    const std::size_t dz = dims.z;
    if (a.rows() != dx * dz || a.cols() != dx * dz) {
        throw DimensionError("psi_apply: A must be an operator on X (x) Z");
    }
    if (b.rows() != dy * dz || b.cols() != dy * dz) {
        throw DimensionError("psi_apply: B must be an operator on Y (x) Z");
    }
    ComplexMatrix out(dy * dx, dy * dx);
    // A = sum a[(i,k),(j,l)] |i><j| (x) |k><l|; each term sends B's (k,l) block
    // (over Z) to the (i,j) block (over X) with coefficient conj(a).
    for (std::size_t i = 0; i < dx; i++) {
        for (std::size_t k = 0; k < dz; k++) {
            for (std::size_t j = 0; j < dx; j++) {
                for (std::size_t l = 0; l < dz; l++) {
                    Complex coef = std::conj(a(i * dz + k, j * dz + l));
                    if (coef == Complex(0)) {
                        continue;
                    }
                    for (std::size_t y1 = 0; y1 < dy; y1++) {
                        for (std::size_t y2 = 0; y2 < dy; y2++) {
                            out(y1 * dx + i, y2 * dx + j) += coef * b(y1 * dz + k, y2 * dz + l);
                        }
                    }
                }
            }
        }
    }
    return out;
}

ChoiOperator choi_tensor(const ChoiOperator &j1, const ChoiOperator &j2) {
    SystemDims dims{j1.dim_out(), j1.dim_in(), j2.dim_out(), j2.dim_in()};
    constexpr std::array<std::size_t, 4> kGroupOutputs{0, 2, 1, 3};
    return ChoiOperator(
        j1.dim_in() * j2.dim_in(),
        j1.dim_out() * j2.dim_out(),
        permute_systems(tensor(j1.matrix(), j2.matrix()), dims, kGroupOutputs));
}

}  // namespace qhedge
