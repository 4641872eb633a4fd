#pragma once

#include "normax/numerics.hpp"

namespace normax {

// Dense product / apply kernels. The parallel variants split work by output
// row; each entry is accumulated in exactly the order the serial reference
// uses, so results are bit-identical for any thread count. Parallelism kicks
// in only above a size threshold -- tiny problems stay on one thread.

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix matmul_serial(const DenseMatrix& A, const DenseMatrix& B);

Vec matvec(const DenseMatrix& A, const Vec& x);
Vec matvec_serial(const DenseMatrix& A, const Vec& x);

DenseMatrix adjoint(const DenseMatrix& A);

double frob_norm(const DenseMatrix& A);

}  // namespace normax
