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

#ifndef QHEDGE_LINALG_H
#define QHEDGE_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhedge {

using Complex = std::complex<double>;

/// Absolute tolerance on max |M[i,j] - conj(M[j,i])| for a matrix to count as Hermitian.
inline constexpr double kHermitianTol = 1e-9;
/// A Hermitian matrix is PSD when its smallest eigenvalue is at least -kPsdTol.
inline constexpr double kPsdTol = 1e-9;

/// Thrown when operand shapes or subsystem dimensions do not fit together.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation needs a Hermitian (or PSD) input and did not get one.
struct NotHermitianError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotPsdError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense complex matrix stored row-major.
///
/// Every matrix built from external data is checked for finite entries. Arithmetic
/// results are not re-checked.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
    static ComplexMatrix diagonal(std::span<const double> diag);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    /// u v^*
    static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
    /// u u^*
    static ComplexMatrix projector(std::span<const Complex> u);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    Complex operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

    std::span<const Complex> entries() const noexcept { return entries_; }
    std::span<Complex> entries() noexcept { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;
    double max_abs() const noexcept;
    bool all_finite() const noexcept;
    ComplexMatrix diagonal_part() const;
    /// (M + M^*) / 2
    ComplexMatrix hermitian_part() const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend bool operator==(const ComplexMatrix &a, const ComplexMatrix &b) = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

std::ostream &operator<<(std::ostream &out, const ComplexMatrix &m);

/// Max-entry distance between two same-shaped matrices.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Dimensions of the tensor factors of a composite space, leftmost factor most significant.
class SystemDims {
   public:
    SystemDims() = default;
    SystemDims(std::initializer_list<std::size_t> factors);
    explicit SystemDims(std::vector<std::size_t> factors);

    std::size_t size() const noexcept { return factors_.size(); }
    std::size_t operator[](std::size_t k) const { return factors_.at(k); }
    std::span<const std::size_t> factors() const noexcept { return factors_; }
    std::size_t total() const noexcept;

   private:
    std::vector<std::size_t> factors_;
};

struct HermitianCheck {
    bool is_hermitian = false;
    double max_asymmetry = 0;
};

HermitianCheck check_hermitian(const ComplexMatrix &m, double tol = kHermitianTol);

/// Eigenvalues ascending; column k of `vectors` is the eigenvector for `values[k]`.
struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Cyclic complex Jacobi. Throws NotHermitianError on non-Hermitian input.
HermitianEigen eig_hermitian(const ComplexMatrix &h);

double min_eigenvalue(const ComplexMatrix &h);

bool is_psd(const ComplexMatrix &h, double tol = kPsdTol);

/// Applies f to the spectrum of a Hermitian matrix: V f(diag) V^*.
template <typename F>
ComplexMatrix spectral_map(const HermitianEigen &eig, F &&f) {
    const std::size_t n = eig.values.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; k++) {
        double w = f(eig.values[k]);
        if (w == 0) {
            continue;
        }
        for (std::size_t i = 0; i < n; i++) {
            Complex vi = eig.vectors(i, k) * w;
            for (std::size_t j = 0; j < n; j++) {
                out(i, j) += vi * std::conj(eig.vectors(j, k));
            }
        }
    }
    return out;
}

/// PSD square root. Eigenvalues in [-kPsdTol, 0) and those at rounding level
/// (below n * eps * max(1, lambda_max)) are treated as zero.
ComplexMatrix sqrt_psd(const ComplexMatrix &p);

/// Sum of singular values, via the spectrum of the Hermitian dilation of M.
double trace_norm(const ComplexMatrix &m);

/// ||sqrt(p) sqrt(r)||_1^2
double fidelity_squared(const ComplexMatrix &p, const ComplexMatrix &r);

/// Tr(a^* b)
Complex inner(const ComplexMatrix &a, const ComplexMatrix &b);

/// Kronecker product, left factor most significant.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);

ComplexMatrix partial_trace(const ComplexMatrix &m, const SystemDims &dims, std::size_t traced_factor);

/// Reorders tensor factors. Output factor k is input factor perm[k], so
/// perm = {1, 0} maps A (x) B to B (x) A.
ComplexMatrix permute_systems(const ComplexMatrix &m, const SystemDims &dims, std::span<const std::size_t> perm);

/// Inverse of a factor permutation in the convention of permute_systems.
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Dimensions after applying permute_systems with `perm`.
SystemDims permuted_dims(const SystemDims &dims, std::span<const std::size_t> perm);

ComplexMatrix entrywise_conjugate(const ComplexMatrix &a);

}  // namespace qhedge

#endif
