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

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qhedge {

std::string to_string(Sense sense) {
    return sense == Sense::Max ? "max" : "min";
}

Sense parse_sense(const std::string &text) {
    if (text == "max") {
        return Sense::Max;
    }
    if (text == "min") {
        return Sense::Min;
    }
    throw std::invalid_argument("sense must be 'max' or 'min', got '" + text + "'");
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStepFraction = 0.98;

void check_problem(const PartialTraceSdp &p) {
    if (p.dim_x == 0 || p.dim_y == 0) {
        throw DimensionError("PartialTraceSdp: dimensions must be >= 1");
    }
    const std::size_t n = p.dim_x * p.dim_y;
    if (p.q.rows() != n || p.q.cols() != n) {
        throw DimensionError(
            "PartialTraceSdp: objective must be " + std::to_string(n) + "x" + std::to_string(n) + " for dims (x=" +
            std::to_string(p.dim_x) + ", y=" + std::to_string(p.dim_y) + ")");
    }
    auto herm = check_hermitian(p.q);
    if (!herm.is_hermitian) {
        throw NotHermitianError("PartialTraceSdp: objective is not Hermitian (asymmetry " +
                                std::to_string(herm.max_asymmetry) + ")");
    }
}

/// H -> [[Re H, -Im H], [Im H, Re H]]
MatrixXd embed(const ComplexMatrix &h) {
    const Eigen::Index n = static_cast<Eigen::Index>(h.rows());
    MatrixXd out(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; i++) {
        for (Eigen::Index j = 0; j < n; j++) {
            Complex z = h(i, j);
            out(i, j) = z.real();
            out(n + i, n + j) = z.real();
            out(i, n + j) = -z.imag();
            out(n + i, j) = z.imag();
        }
    }
    return out;
}

/// Inverse of embed on the structured subspace; averages the two copies.
ComplexMatrix unembed(const MatrixXd &m) {
    const Eigen::Index n = m.rows() / 2;
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; i++) {
        for (Eigen::Index j = 0; j < n; j++) {
            double re = 0.5 * (m(i, j) + m(n + i, n + j));
            double im = 0.5 * (m(n + i, j) - m(i, n + j));
            out(i, j) = Complex(re, im);
        }
    }
    return out.hermitian_part();
}

struct Triplet {
    Eigen::Index row;
    Eigen::Index col;
    double value;
};

/// The embedded constraint family <S(1_Y (x) E_k), X> = 2 Tr(E_k), with E_k running
/// over a real basis of the Hermitian operators on X.
struct ConstraintSystem {
    std::size_t dim_x = 0;
    std::size_t dim_y = 0;
    /// For each basis element: (a, b, kind) with kind 0 = |a><a|, 1 = symmetric, 2 = antisymmetric.
    struct Basis {
        std::size_t a;
        std::size_t b;
        int kind;
    };
    std::vector<Basis> basis;
    std::vector<std::vector<Triplet>> a;
    VectorXd b;

    ConstraintSystem(std::size_t dx, std::size_t dy) : dim_x(dx), dim_y(dy) {
        for (std::size_t i = 0; i < dx; i++) {
            basis.push_back({i, i, 0});
        }
        for (std::size_t i = 0; i < dx; i++) {
            for (std::size_t j = i + 1; j < dx; j++) {
                basis.push_back({i, j, 1});
                basis.push_back({i, j, 2});
            }
        }
        const Eigen::Index n = static_cast<Eigen::Index>(dx * dy);
        b = VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
        for (std::size_t k = 0; k < basis.size(); k++) {
            const auto &e = basis[k];
            std::vector<Triplet> t;
            auto put = [&](std::size_t r0, std::size_t c0, Complex v) {
                for (std::size_t y = 0; y < dy; y++) {
                    Eigen::Index r = static_cast<Eigen::Index>(y * dx + r0);
                    Eigen::Index c = static_cast<Eigen::Index>(y * dx + c0);
                    if (v.real() != 0) {
                        t.push_back({r, c, v.real()});
                        t.push_back({n + r, n + c, v.real()});
                    }
                    if (v.imag() != 0) {
                        t.push_back({r, n + c, -v.imag()});
                        t.push_back({n + r, c, v.imag()});
                    }
                }
            };
            if (e.kind == 0) {
                put(e.a, e.a, 1.0);
                b[static_cast<Eigen::Index>(k)] = 2.0;
            } else if (e.kind == 1) {
                put(e.a, e.b, 1.0);
                put(e.b, e.a, 1.0);
            } else {
                put(e.a, e.b, Complex(0, 1));
                put(e.b, e.a, Complex(0, -1));
            }
            a.push_back(std::move(t));
        }
    }

    Eigen::Index size() const { return static_cast<Eigen::Index>(a.size()); }

    VectorXd apply(const MatrixXd &x) const {
        VectorXd out(size());
        for (Eigen::Index k = 0; k < size(); k++) {
            double s = 0;
            for (const auto &t : a[static_cast<std::size_t>(k)]) {
                s += t.value * x(t.row, t.col);
            }
            out[k] = s;
        }
        return out;
    }

    MatrixXd adjoint(const VectorXd &y, Eigen::Index dim) const {
        MatrixXd out = MatrixXd::Zero(dim, dim);
        for (Eigen::Index k = 0; k < size(); k++) {
            for (const auto &t : a[static_cast<std::size_t>(k)]) {
                out(t.row, t.col) += y[k] * t.value;
            }
        }
        return out;
    }

    /// M_ij = Tr(A_i X A_j W)
    MatrixXd schur(const MatrixXd &x, const MatrixXd &w) const {
        const Eigen::Index m = size();
        MatrixXd out(m, m);
        for (Eigen::Index i = 0; i < m; i++) {
            for (Eigen::Index j = i; j < m; j++) {
                double s = 0;
                for (const auto &ti : a[static_cast<std::size_t>(i)]) {
                    for (const auto &tj : a[static_cast<std::size_t>(j)]) {
                        s += ti.value * tj.value * x(ti.col, tj.row) * w(tj.col, ti.row);
                    }
                }
                out(i, j) = s;
                out(j, i) = s;
            }
        }
        return out;
    }

    ComplexMatrix dual_operator(const VectorXd &y) const {
        ComplexMatrix out(dim_x, dim_x);
        for (std::size_t k = 0; k < basis.size(); k++) {
            const auto &e = basis[k];
            double c = y[static_cast<Eigen::Index>(k)];
            if (e.kind == 0) {
                out(e.a, e.a) += c;
            } else if (e.kind == 1) {
                out(e.a, e.b) += c;
                out(e.b, e.a) += c;
            } else {
                out(e.a, e.b) += Complex(0, c);
                out(e.b, e.a) += Complex(0, -c);
            }
        }
        return out;
    }
};

/// Largest step in [0, inf) keeping m + step * dm positive semidefinite, given chol(m).
double max_step(const Eigen::LLT<MatrixXd> &chol, const MatrixXd &dm) {
    MatrixXd l_inv_dm = chol.matrixL().solve(dm);
    MatrixXd scaled = chol.matrixL().solve(l_inv_dm.transpose()).transpose();
    scaled = (0.5 * (scaled + scaled.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    return lo < 0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
}

ComplexMatrix identity_lift(std::size_t dy, const ComplexMatrix &y) {
    return tensor(ComplexMatrix::identity(dy), y);
}

/// Fills in values, residuals and the dual repair for a (primal X, dual Y) pair in the caller's sense.
void finish(const PartialTraceSdp &p, SdpSolution &s) {
    const double sign = p.sense == Sense::Max ? 1.0 : -1.0;
    s.primal_value = inner(p.q, s.primal_x).real();
    s.raw_dual_value = s.dual_y.trace().real();
    ComplexMatrix slack = (identity_lift(p.dim_y, s.dual_y) - p.q) * sign;
    s.dual_shift = std::max(0.0, -min_eigenvalue(slack));
    if (s.dual_shift > 0) {
        s.dual_y += ComplexMatrix::identity(p.dim_x) * (sign * s.dual_shift);
        slack = (identity_lift(p.dim_y, s.dual_y) - p.q) * sign;
    }
    s.dual_value = s.dual_y.trace().real();
    s.dual_residual = std::max(0.0, -min_eigenvalue(slack));
    s.primal_residual = max_abs_diff(partial_trace(s.primal_x, p.dims(), 0), ComplexMatrix::identity(p.dim_x));
    s.gap = std::abs(s.primal_value - s.dual_value);
}

}  // namespace

SdpSolution solve(const PartialTraceSdp &p, const SolveOptions &options) {
    check_problem(p);
    if (!(options.tol >= 1e-12 && options.tol <= 1e-2)) {
        throw std::invalid_argument("solve: tol must lie in [1e-12, 1e-2]");
    }
    const double sign = p.sense == Sense::Max ? 1.0 : -1.0;

    SdpSolution s;
    if (p.dim_y == 1) {
        // Tr_Y is the identity here, so X = 1_X is the only feasible point and Y = Q is tight.
        s.primal_x = ComplexMatrix::identity(p.dim_x);
        s.dual_y = p.q.hermitian_part();
        s.converged = true;
        finish(p, s);
        s.history.push_back({s.primal_value, s.dual_value});
        return s;
    }

    const ConstraintSystem cons(p.dim_x, p.dim_y);
    const Eigen::Index dim = static_cast<Eigen::Index>(2 * p.dim_x * p.dim_y);
    const MatrixXd c = embed(p.q.hermitian_part() * sign);

    // Strictly feasible start: X = 1/dim_y, Y = lambda 1 with lambda above ||Q||.
    MatrixXd x = MatrixXd::Identity(dim, dim) / static_cast<double>(p.dim_y);
    double row_norm = 0;
    for (std::size_t i = 0; i < p.q.rows(); i++) {
        double r = 0;
        for (std::size_t j = 0; j < p.q.cols(); j++) {
            r += std::abs(p.q(i, j));
        }
        row_norm = std::max(row_norm, r);
    }
    VectorXd y = VectorXd::Zero(cons.size());
    for (std::size_t k = 0; k < p.dim_x; k++) {
        y[static_cast<Eigen::Index>(k)] = row_norm + 1;
    }

    MatrixXd best_x = x;
    VectorXd best_y = y;
    double best_gap = std::numeric_limits<double>::infinity();

    for (int iter = 0;; iter++) {
        MatrixXd z = cons.adjoint(y, dim) - c;
        z = (0.5 * (z + z.transpose())).eval();
        Eigen::LLT<MatrixXd> zchol(z);
        Eigen::LLT<MatrixXd> xchol(x);
        if (zchol.info() != Eigen::Success || xchol.info() != Eigen::Success) {
            break;
        }

        const double primal = 0.5 * (c.cwiseProduct(x)).sum();
        const double dual = 0.5 * cons.b.dot(y);
        s.history.push_back({sign * primal, sign * dual});
        s.iterations = iter;

        VectorXd rp = cons.b - cons.apply(x);
        double gap = dual - primal;
        double presid = 0.5 * rp.cwiseAbs().maxCoeff();
        if (std::abs(gap) < best_gap) {
            best_gap = std::abs(gap);
            best_x = x;
            best_y = y;
        }
        if (std::abs(gap) <= options.tol && presid <= options.tol) {
            s.converged = true;
            best_x = x;
            best_y = y;
            break;
        }
        if (iter >= options.max_iter) {
            break;
        }

        const MatrixXd w = zchol.solve(MatrixXd::Identity(dim, dim));
        const double mu = x.cwiseProduct(z).sum() / static_cast<double>(dim);
        Eigen::LDLT<MatrixXd> schur(cons.schur(x, w));
        if (schur.info() != Eigen::Success) {
            break;
        }

        // Solves for the HKM direction with X dZ + dX Z = r, given g = r Z^{-1}.
        auto direction = [&](const MatrixXd &g, MatrixXd &dx, VectorXd &dy, MatrixXd &dz) {
            dy = schur.solve(cons.apply(g) - rp);
            dz = cons.adjoint(dy, dim);
            dx = g - x * dz * w;
            dx = (0.5 * (dx + dx.transpose())).eval();
        };

        MatrixXd dx_aff, dz_aff, dx, dz;
        VectorXd dy_aff, dy;
        direction(-x, dx_aff, dy_aff, dz_aff);
        double ap = std::min(1.0, kStepFraction * max_step(xchol, dx_aff));
        double ad = std::min(1.0, kStepFraction * max_step(zchol, dz_aff));
        double mu_aff = (x + ap * dx_aff).cwiseProduct(z + ad * dz_aff).sum() / static_cast<double>(dim);
        double sigma = std::clamp(std::pow(mu_aff / mu, 3), 0.0, 1.0);

        direction(sigma * mu * w - x - dx_aff * dz_aff * w, dx, dy, dz);
        ap = std::min(1.0, kStepFraction * max_step(xchol, dx));
        ad = std::min(1.0, kStepFraction * max_step(zchol, dz));
        if (ap < 1e-12 && ad < 1e-12) {
            break;
        }
        x += ap * dx;
        x = (0.5 * (x + x.transpose())).eval();
        y += ad * dy;
    }

    s.primal_x = unembed(best_x);
    s.dual_y = cons.dual_operator(best_y) * sign;
    finish(p, s);
    return s;
}

CertificateReport certify(const PartialTraceSdp &p, const SdpSolution &s, const CertifyTolerances &tol) {
    CertificateReport r;
    const std::size_t n = p.dim_x * p.dim_y;
    if (s.primal_x.rows() != n || s.primal_x.cols() != n || s.dual_y.rows() != p.dim_x ||
        s.dual_y.cols() != p.dim_x) {
        r.failures.push_back("solution shapes do not match the problem");
        return r;
    }
    const double sign = p.sense == Sense::Max ? 1.0 : -1.0;

    r.primal_value = inner(p.q, s.primal_x).real();
    r.dual_value = s.dual_y.trace().real();
    r.gap = std::abs(r.primal_value - r.dual_value);
    r.primal_residual =
        max_abs_diff(partial_trace(s.primal_x, {p.dim_y, p.dim_x}, 0), ComplexMatrix::identity(p.dim_x));

    auto psd_violation = [](const ComplexMatrix &m) {
        auto h = check_hermitian(m, 1e-9);
        return h.is_hermitian ? std::max(0.0, -min_eigenvalue(m)) : INFINITY;
    };
    r.primal_psd_residual = psd_violation(s.primal_x);
    ComplexMatrix slack = (tensor(ComplexMatrix::identity(p.dim_y), s.dual_y) - p.q) * sign;
    r.dual_residual = psd_violation(slack);

    // Max form: primal <= dual. Min form: dual <= primal.
    r.weak_duality = sign * (r.primal_value - r.dual_value) <= tol.gap;
    r.values_match = std::abs(r.primal_value - s.primal_value) <= 1e-9 && std::abs(r.dual_value - s.dual_value) <= 1e-9;

    auto require = [&](bool ok, const std::string &what, double value) {
        if (!ok) {
            std::stringstream ss;
            ss << what << " (" << value << ")";
            r.failures.push_back(ss.str());
        }
    };
    require(r.primal_residual <= tol.residual, "primal partial-trace residual too large", r.primal_residual);
    require(r.primal_psd_residual <= tol.psd, "primal point not PSD", r.primal_psd_residual);
    require(r.dual_residual <= tol.psd, "dual slack not PSD", r.dual_residual);
    require(r.gap <= tol.gap, "duality gap too large", r.gap);
    require(r.weak_duality, "weak duality violated", r.primal_value - r.dual_value);
    require(r.values_match, "reported values differ from recomputation",
            std::max(std::abs(r.primal_value - s.primal_value), std::abs(r.dual_value - s.dual_value)));
    r.passed = r.failures.empty();
    return r;
}

namespace {

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    ComplexMatrix g(rows, cols);
    for (auto &z : g.entries()) {
        z = Complex(normal(rng), normal(rng));
    }
    return g;
}

ChoiOperator whitened_channel(std::size_t dx, std::size_t dy, std::size_t rank, std::mt19937_64 &rng) {
    // Tr_Y of a rank-r operator has rank at most r * dy; below dx it cannot be whitened.
    rank = std::max(rank, (dx + dy - 1) / dy);
    ComplexMatrix g = random_gaussian(dx * dy, rank, rng);
    ComplexMatrix psd = g * g.adjoint();
    ComplexMatrix t = partial_trace(psd, {dy, dx}, 0);
    ComplexMatrix t_inv_sqrt = spectral_map(eig_hermitian(t.hermitian_part()), [](double v) {
        return v > 0 ? 1 / std::sqrt(v) : 0.0;
    });
    ComplexMatrix white = tensor(ComplexMatrix::identity(dy), t_inv_sqrt);
    return ChoiOperator(dx, dy, (white * psd * white).hermitian_part());
}

ComplexMatrix random_unitary(std::size_t d, std::mt19937_64 &rng) {
    ComplexMatrix g = random_gaussian(d, d, rng);
    return eig_hermitian((g + g.adjoint()) * 0.5).vectors;
}

}  // namespace

ChoiOperator random_channel(std::size_t dim_x, std::size_t dim_y, std::uint64_t seed, std::size_t rank) {
    std::mt19937_64 rng(seed);
    return whitened_channel(dim_x, dim_y, rank == 0 ? dim_x * dim_y : rank, rng);
}

double random_strategy_bound(const PartialTraceSdp &p, std::size_t samples, std::uint64_t seed) {
    check_problem(p);
    if (samples == 0) {
        throw std::invalid_argument("random_strategy_bound: need at least one sample");
    }
    if (p.dim_y == 1) {
        return p.q.trace().real();
    }
    const double sign = p.sense == Sense::Max ? 1.0 : -1.0;
    std::mt19937_64 rng(seed);
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](const ChoiOperator &j) {
        best = std::max(best, sign * inner(p.q, j.matrix()).real());
    };

    const bool square = p.dim_x == p.dim_y;
    std::uniform_int_distribution<std::size_t> rank_dist(1, p.dim_x * p.dim_y);
    for (std::size_t k = 0; k < samples; k++) {
        if (k == 0 && square) {
            consider(choi_identity(p.dim_x));
        } else if (square && k % 2 == 1) {
            consider(choi_from_unitary(random_unitary(p.dim_x, rng)));
        } else {
            consider(whitened_channel(p.dim_x, p.dim_y, rank_dist(rng), rng));
        }
    }
    return sign * best;
}

ClassicalOptimum classical_exact(const PartialTraceSdp &p) {
    check_problem(p);
    for (std::size_t i = 0; i < p.q.rows(); i++) {
        for (std::size_t j = 0; j < p.q.cols(); j++) {
            if (i != j && std::abs(p.q(i, j)) > 1e-9) {
                throw std::invalid_argument("classical_exact: objective is not diagonal");
            }
        }
    }
    std::size_t count = 1;
    for (std::size_t k = 0; k < p.dim_x; k++) {
        if (count > kClassicalEnumerationCap / p.dim_y) {
            throw std::invalid_argument("classical_exact: more than 10^6 deterministic strategies");
        }
        count *= p.dim_y;
    }

    const double sign = p.sense == Sense::Max ? 1.0 : -1.0;
    std::vector<std::size_t> f(p.dim_x, 0);
    std::vector<std::size_t> best_f = f;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < count; n++) {
        double v = 0;
        for (std::size_t i = 0; i < p.dim_x; i++) {
            std::size_t idx = f[i] * p.dim_x + i;
            v += p.q(idx, idx).real();
        }
        if (sign * v > best) {
            best = sign * v;
            best_f = f;
        }
        for (std::size_t i = p.dim_x; i-- > 0;) {
            if (++f[i] < p.dim_y) {
                break;
            }
            f[i] = 0;
        }
    }

    ComplexMatrix j(p.dim_x * p.dim_y, p.dim_x * p.dim_y);
    for (std::size_t i = 0; i < p.dim_x; i++) {
        std::size_t idx = best_f[i] * p.dim_x + i;
        j(idx, idx) = 1;
    }
    return {sign * best, best_f, ChoiOperator(p.dim_x, p.dim_y, std::move(j))};
}

}  // namespace qhedge
