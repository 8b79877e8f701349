#pragma once

// Sparse matrices and linear solves for the flattening and diffusion systems.
// Storage and factorizations are backed by Eigen; the assembly contract
// (duplicates summed, range and finiteness checks) lives here.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <span>
#include <string>
#include <vector>

namespace deq {

struct Triplet {
    int row;
    int col;
    double value;
};

class SparseMatrix {
public:
    using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : m_(rows, cols) {}
    explicit SparseMatrix(Storage m) : m_(std::move(m)) { m_.makeCompressed(); }

    int rows() const { return static_cast<int>(m_.rows()); }
    int cols() const { return static_cast<int>(m_.cols()); }
    int nonzeros() const { return static_cast<int>(m_.nonZeros()); }

    /// Entry lookup; zero when not stored.
    double coeff(int r, int c) const { return m_.coeff(r, c); }

    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const { return m_ * x; }
    Eigen::MatrixXd operator*(const Eigen::MatrixXd& x) const { return m_ * x; }

    Eigen::VectorXd row_sums() const;
    SparseMatrix transpose() const;
    Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(m_); }

    /// max |A_ij - A_ji|.
    double asymmetry() const;

    const Storage& storage() const { return m_; }

private:
    Storage m_;
};

/// Sums duplicate (row, col) pairs. Throws GeometryError on out-of-range
/// indices and SolverError on non-finite values.
SparseMatrix assemble(std::span<const Triplet> triplets, int rows, int cols);

enum class SolveMethod { cholesky, cg, lu, bicgstab };

std::string to_string(SolveMethod m);

struct SolveReport {
    int iterations = 0;
    /// max over right-hand sides of ||Ax - b|| / ||b||.
    double residual = 0.0;
    SolveMethod method = SolveMethod::cholesky;
};

struct SolveOptions {
    double tolerance = 1e-10;
    /// Iteration cap for iterative fallbacks; 0 means 10 * n.
    int max_iterations = 0;
};

struct SolveResult {
    Eigen::MatrixXd x;
    SolveReport report;
};

/// Symmetric positive definite solve: sparse Cholesky, falling back to
/// Jacobi-preconditioned CG. Accepts several right-hand sides (columns of b).
/// Throws SolverError on asymmetry (> 1e-12 relative), dimension mismatch or
/// when the residual cannot be brought below the tolerance.
SolveResult solve_spd(const SparseMatrix& a, const Eigen::MatrixXd& b, const SolveOptions& opts = {});

/// General square solve: sparse LU, falling back to BiCGSTAB.
SolveResult solve_general(const SparseMatrix& a, const Eigen::MatrixXd& b, const SolveOptions& opts = {});

} // namespace deq
