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

#include "qhedge/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qhedge {

namespace {

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::stringstream ss;
        ss << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw DimensionError(ss.str());
    }
}

void require_square(const ComplexMatrix &m, const char *what) {
    if (!m.is_square()) {
        std::stringstream ss;
        ss << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(ss.str());
    }
}

void require_dims(const ComplexMatrix &m, const SystemDims &dims, const char *what) {
    require_square(m, what);
    if (dims.size() == 0 || dims.total() != m.rows()) {
        std::stringstream ss;
        ss << what << ": subsystem dimensions multiply to " << dims.total() << " but matrix is " << m.rows()
           << "x" << m.cols();
        throw DimensionError(ss.str());
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw DimensionError(
            "ComplexMatrix: got " + std::to_string(entries_.size()) + " entries for a " + std::to_string(rows) +
            "x" + std::to_string(cols) + " matrix");
    }
    if (!all_finite()) {
        throw std::invalid_argument("ComplexMatrix: entries must be finite");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("ComplexMatrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (!all_finite()) {
        throw std::invalid_argument("ComplexMatrix: entries must be finite");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; k++) {
        m(k, k) = 1;
    }
    return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); k++) {
        m(k, k) = diag[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); k++) {
        m(k, k) = diag[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); i++) {
        for (std::size_t j = 0; j < v.size(); j++) {
            m(i, j) = u[i] * std::conj(v[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> u) {
    return outer(u, u);
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; i++) {
        for (std::size_t j = 0; j < cols_; j++) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; i++) {
        for (std::size_t j = 0; j < cols_; j++) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    require_square(*this, "trace");
    Complex t = 0;
    for (std::size_t k = 0; k < rows_; k++) {
        t += (*this)(k, k);
    }
    return t;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0;
    for (const auto &z : entries_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex &z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix ComplexMatrix::diagonal_part() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < std::min(rows_, cols_); k++) {
        out(k, k) = (*this)(k, k);
    }
    return out;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
    require_square(*this, "hermitian_part");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; i++) {
        for (std::size_t j = 0; j < cols_; j++) {
            out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        }
    }
    return out;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "operator+");
    for (std::size_t k = 0; k < entries_.size(); k++) {
        entries_[k] += other.entries_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "operator-");
    for (std::size_t k = 0; k < entries_.size(); k++) {
        entries_[k] -= other.entries_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError(
            "operator*: inner dimensions differ (" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
            ")");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            Complex aik = a(i, k);
            if (aik == Complex(0)) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); j++) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

std::ostream &operator<<(std::ostream &out, const ComplexMatrix &m) {
    out << "[";
    for (std::size_t i = 0; i < m.rows(); i++) {
        out << (i ? ",\n [" : "[");
        for (std::size_t j = 0; j < m.cols(); j++) {
            out << (j ? ", " : "") << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+") << std::abs(m(i, j).imag())
                << "i";
        }
        out << "]";
    }
    return out << "]";
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0;
    for (std::size_t k = 0; k < a.entries().size(); k++) {
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return m;
}

SystemDims::SystemDims(std::initializer_list<std::size_t> factors) : SystemDims(std::vector<std::size_t>(factors)) {
}

SystemDims::SystemDims(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
    for (auto d : factors_) {
        if (d == 0) {
            throw DimensionError("SystemDims: every factor must have dimension >= 1");
        }
    }
}

std::size_t SystemDims::total() const noexcept {
    return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1}, std::multiplies<>());
}

HermitianCheck check_hermitian(const ComplexMatrix &m, double tol) {
    if (!m.is_square()) {
        return {false, INFINITY};
    }
    double asym = 0;
    for (std::size_t i = 0; i < m.rows(); i++) {
        for (std::size_t j = i; j < m.cols(); j++) {
            asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return {asym <= tol, asym};
}

HermitianEigen eig_hermitian(const ComplexMatrix &h) {
    require_square(h, "eig_hermitian");
    auto check = check_hermitian(h);
    if (!check.is_hermitian) {
        throw NotHermitianError("eig_hermitian: max asymmetry " + std::to_string(check.max_asymmetry));
    }
    const std::size_t n = h.rows();
    ComplexMatrix a = h.hermitian_part();
    ComplexMatrix v = ComplexMatrix::identity(n);

    double scale = a.max_abs();
    for (int sweep = 0; sweep < 100 && scale > 0; sweep++) {
        double off = 0;
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                off = std::max(off, std::abs(a(p, q)));
            }
        }
        if (off <= 1e-17 * scale) {
            break;
        }
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double mag = std::abs(a(p, q));
                if (mag <= 1e-300) {
                    continue;
                }
                // Rotate a phase out of a(p,q), then apply the real Jacobi rotation.
                Complex phase = std::conj(a(p, q)) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2 * mag);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                Complex gpp = c;
                Complex gpq = s;
                Complex gqp = -s * phase;
                Complex gqq = c * phase;

                for (std::size_t k = 0; k < n; k++) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; k++) {
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });
    HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; k++) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; i++) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

double min_eigenvalue(const ComplexMatrix &h) {
    if (h.rows() == 0) {
        return 0;
    }
    return eig_hermitian(h).values.front();
}

bool is_psd(const ComplexMatrix &h, double tol) {
    return min_eigenvalue(h) >= -tol;
}

ComplexMatrix sqrt_psd(const ComplexMatrix &p) {
    auto eig = eig_hermitian(p);
    if (eig.values.empty()) {
        return p;
    }
    if (eig.values.front() < -kPsdTol) {
        throw NotPsdError("sqrt_psd: min eigenvalue " + std::to_string(eig.values.front()));
    }
    // Eigenvalues at rounding level are zeros that picked up noise; their square
    // roots would be ~1e-8 and pollute everything downstream.
    const double floor = static_cast<double>(p.rows()) * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, eig.values.back());
    return spectral_map(eig, [floor](double x) {
        return x > floor ? std::sqrt(x) : 0.0;
    });
}

double trace_norm(const ComplexMatrix &m) {
    // The Hermitian dilation [[0, M], [M^*, 0]] has eigenvalues +-sigma_k, so no
    // squaring of M is needed and small singular values keep full accuracy.
    const std::size_t r = m.rows(), c = m.cols();
    if (r == 0 || c == 0) {
        return 0;
    }
    ComplexMatrix h(r + c, r + c);
    for (std::size_t i = 0; i < r; i++) {
        for (std::size_t j = 0; j < c; j++) {
            h(i, r + j) = m(i, j);
            h(r + j, i) = std::conj(m(i, j));
        }
    }
    double total = 0;
    for (double x : eig_hermitian(h).values) {
        total += std::abs(x);
    }
    return 0.5 * total;
}

double fidelity_squared(const ComplexMatrix &p, const ComplexMatrix &r) {
    require_same_shape(p, r, "fidelity_squared");
    double f = trace_norm(sqrt_psd(p) * sqrt_psd(r));
    return f * f;
}

Complex inner(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "inner");
    Complex total = 0;
    for (std::size_t k = 0; k < a.entries().size(); k++) {
        total += std::conj(a.entries()[k]) * b.entries()[k];
    }
    return total;
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); i1++) {
        for (std::size_t j1 = 0; j1 < a.cols(); j1++) {
            Complex x = a(i1, j1);
            if (x == Complex(0)) {
                continue;
            }
            for (std::size_t i2 = 0; i2 < b.rows(); i2++) {
                for (std::size_t j2 = 0; j2 < b.cols(); j2++) {
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = x * b(i2, j2);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const SystemDims &dims, std::size_t traced_factor) {
    require_dims(m, dims, "partial_trace");
    if (traced_factor >= dims.size()) {
        throw DimensionError("partial_trace: factor index out of range");
    }
    // Split the index into (outer, traced, inner) blocks.
    std::size_t outer = 1;
    for (std::size_t k = 0; k < traced_factor; k++) {
        outer *= dims[k];
    }
    std::size_t d = dims[traced_factor];
    std::size_t inner_dim = dims.total() / (outer * d);
    std::size_t out_dim = outer * inner_dim;

    ComplexMatrix out(out_dim, out_dim);
    for (std::size_t a1 = 0; a1 < outer; a1++) {
        for (std::size_t b1 = 0; b1 < inner_dim; b1++) {
            for (std::size_t a2 = 0; a2 < outer; a2++) {
                for (std::size_t b2 = 0; b2 < inner_dim; b2++) {
                    Complex total = 0;
                    for (std::size_t t = 0; t < d; t++) {
                        total += m((a1 * d + t) * inner_dim + b1, (a2 * d + t) * inner_dim + b2);
                    }
                    out(a1 * inner_dim + b1, a2 * inner_dim + b2) = total;
                }
            }
        }
    }
    return out;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t k = 0; k < perm.size(); k++) {
        inv.at(perm[k]) = k;
    }
    return inv;
}

SystemDims permuted_dims(const SystemDims &dims, std::span<const std::size_t> perm) {
    std::vector<std::size_t> out;
    out.reserve(perm.size());
    for (auto p : perm) {
        out.push_back(dims[p]);
    }
    return SystemDims(std::move(out));
}

ComplexMatrix permute_systems(const ComplexMatrix &m, const SystemDims &dims, std::span<const std::size_t> perm) {
    require_dims(m, dims, "permute_systems");
    const std::size_t nf = dims.size();
    if (perm.size() != nf) {
        throw DimensionError("permute_systems: permutation length differs from factor count");
    }
    std::vector<bool> seen(nf, false);
    for (auto p : perm) {
        if (p >= nf || seen[p]) {
            throw std::invalid_argument("permute_systems: not a permutation of factor indices");
        }
        seen[p] = true;
    }

    // Map each output basis index to the input basis index it reads from.
    const std::size_t n = dims.total();
    std::vector<std::size_t> in_stride(nf);
    std::size_t stride = 1;
    for (std::size_t k = nf; k-- > 0;) {
        in_stride[k] = stride;
        stride *= dims[k];
    }
    std::vector<std::size_t> source(n);
    std::vector<std::size_t> digits(nf, 0);
    for (std::size_t out_index = 0; out_index < n; out_index++) {
        std::size_t in_index = 0;
        for (std::size_t k = 0; k < nf; k++) {
            in_index += digits[k] * in_stride[perm[k]];
        }
        source[out_index] = in_index;
        for (std::size_t k = nf; k-- > 0;) {
            if (++digits[k] < dims[perm[k]]) {
                break;
            }
            digits[k] = 0;
        }
    }

    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            out(i, j) = m(source[i], source[j]);
        }
    }
    return out;
}

ComplexMatrix entrywise_conjugate(const ComplexMatrix &a) {
    ComplexMatrix out = a;
    for (auto &z : out.entries()) {
        z = std::conj(z);
    }
    return out;
}

}  // namespace qhedge
