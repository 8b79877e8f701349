#include "deq/sparse.hpp"

#include "deq/error.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace deq {

namespace {

using ColMajor = Eigen::SparseMatrix<double>;

double relative_residual(const ColMajor& a, const Eigen::MatrixXd& x, const Eigen::MatrixXd& b)
{
    double worst = 0.0;
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        const double bn = b.col(c).norm();
        const double rn = (a * x.col(c) - b.col(c)).norm();
        worst = std::max(worst, bn > 0.0 ? rn / bn : rn);
    }
    return worst;
}

void check_dims(const SparseMatrix& a, const Eigen::MatrixXd& b)
{
    if (a.rows() != a.cols()) throw SolverError("matrix is not square");
    if (b.rows() != a.rows()) throw SolverError("right-hand side has wrong length");
}

// Polishes a direct solution with a couple of refinement sweeps.
template <class Factor>
void refine(const Factor& factor, const ColMajor& a, const Eigen::MatrixXd& b, Eigen::MatrixXd& x, double tol)
{
    for (int sweep = 0; sweep < 3 && relative_residual(a, x, b) > tol; ++sweep) {
        const Eigen::MatrixXd r = b - a * x;
        x += factor.solve(r);
    }
}

template <class Iterative>
bool iterate(Iterative& solver, const Eigen::MatrixXd& b, Eigen::MatrixXd& x, SolveReport& report)
{
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        Eigen::VectorXd col = solver.solveWithGuess(b.col(c), Eigen::VectorXd(x.col(c)));
        if (!col.allFinite()) return false;
        x.col(c) = col;
        report.iterations = std::max(report.iterations, static_cast<int>(solver.iterations()));
    }
    return true;
}

} // namespace

Eigen::VectorXd SparseMatrix::row_sums() const
{
    Eigen::VectorXd s = Eigen::VectorXd::Zero(rows());
    for (int r = 0; r < m_.outerSize(); ++r)
        for (Storage::InnerIterator it(m_, r); it; ++it) s[r] += it.value();
    return s;
}

SparseMatrix SparseMatrix::transpose() const { return SparseMatrix(Storage(m_.transpose())); }

double SparseMatrix::asymmetry() const
{
    if (rows() != cols()) return std::numeric_limits<double>::infinity();
    const Storage diff = m_ - Storage(m_.transpose());
    double worst = 0.0;
    for (int r = 0; r < diff.outerSize(); ++r)
        for (Storage::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

SparseMatrix assemble(std::span<const Triplet> triplets, int rows, int cols)
{
    if (rows < 0 || cols < 0) throw GeometryError("negative matrix dimensions");
    std::vector<Eigen::Triplet<double>> list;
    list.reserve(triplets.size());
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw GeometryError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                ") out of range for " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " matrix");
        }
        if (!std::isfinite(t.value)) throw SolverError("non-finite matrix entry");
        list.emplace_back(t.row, t.col, t.value);
    }
    SparseMatrix::Storage m(rows, cols);
    m.setFromTriplets(list.begin(), list.end()); // sums duplicates, sorts inner indices
    return SparseMatrix(std::move(m));
}

std::string to_string(SolveMethod m)
{
    switch (m) {
    case SolveMethod::cholesky: return "cholesky";
    case SolveMethod::cg: return "cg";
    case SolveMethod::lu: return "lu";
    case SolveMethod::bicgstab: return "bicgstab";
    }
    return "unknown";
}

SolveResult solve_spd(const SparseMatrix& a, const Eigen::MatrixXd& b, const SolveOptions& opts)
{
    check_dims(a, b);
    const int n = a.rows();
    SolveResult out;
    if (n == 0) {
        out.x = Eigen::MatrixXd(0, b.cols());
        return out;
    }
    double scale = 0.0;
    for (int r = 0; r < n; ++r)
        for (SparseMatrix::Storage::InnerIterator it(a.storage(), r); it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    if (a.asymmetry() > 1e-12 * std::max(scale, 1.0))
        throw SolverError("matrix passed to solve_spd is not symmetric");

    const ColMajor m = a.storage();
    Eigen::SimplicialLLT<ColMajor> llt(m);
    if (llt.info() == Eigen::Success) {
        out.x = llt.solve(b);
        refine(llt, m, b, out.x, opts.tolerance);
        out.report.method = SolveMethod::cholesky;
        out.report.iterations = 1;
        out.report.residual = relative_residual(m, out.x, b);
        if (out.x.allFinite() && out.report.residual <= opts.tolerance) return out;
    }

    Eigen::ConjugateGradient<ColMajor, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(opts.tolerance * 0.5);
    cg.setMaxIterations(opts.max_iterations > 0 ? opts.max_iterations : 10 * n);
    cg.compute(m);
    if (out.x.rows() != n || !out.x.allFinite()) out.x = Eigen::MatrixXd::Zero(n, b.cols());
    out.report = SolveReport{0, 0.0, SolveMethod::cg};
    if (!iterate(cg, b, out.x, out.report))
        throw SolverError("conjugate gradient produced non-finite values");
    out.report.residual = relative_residual(m, out.x, b);
    if (out.report.residual > opts.tolerance) {
        throw SolverError("SPD solve did not converge: residual " + std::to_string(out.report.residual) +
                          " after " + std::to_string(out.report.iterations) + " iterations");
    }
    return out;
}

SolveResult solve_general(const SparseMatrix& a, const Eigen::MatrixXd& b, const SolveOptions& opts)
{
    check_dims(a, b);
    const int n = a.rows();
    SolveResult out;
    if (n == 0) {
        out.x = Eigen::MatrixXd(0, b.cols());
        return out;
    }
    ColMajor m = a.storage();
    m.makeCompressed();
    Eigen::SparseLU<ColMajor> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() == Eigen::Success) {
        out.x = lu.solve(b);
        if (out.x.allFinite()) {
            refine(lu, m, b, out.x, opts.tolerance);
            out.report = SolveReport{1, relative_residual(m, out.x, b), SolveMethod::lu};
            if (out.report.residual <= opts.tolerance) return out;
        }
    } else {
        // A structurally or numerically singular matrix is an error, not a
        // candidate for the iterative fallback.
        throw SolverError("matrix is singular: " + lu.lastErrorMessage());
    }

    Eigen::BiCGSTAB<ColMajor, Eigen::DiagonalPreconditioner<double>> bicg;
    bicg.setTolerance(opts.tolerance * 0.5);
    bicg.setMaxIterations(opts.max_iterations > 0 ? opts.max_iterations : 10 * n);
    bicg.compute(m);
    if (!out.x.allFinite()) out.x = Eigen::MatrixXd::Zero(n, b.cols());
    out.report = SolveReport{0, 0.0, SolveMethod::bicgstab};
    if (!iterate(bicg, b, out.x, out.report))
        throw SolverError("BiCGSTAB produced non-finite values");
    out.report.residual = relative_residual(m, out.x, b);
    if (out.report.residual > opts.tolerance) {
        throw SolverError("general solve did not converge: residual " + std::to_string(out.report.residual));
    }
    return out;
}

} // namespace deq
