// Row-major GEMM on top of Eigen. Kept out of the headers so Eigen stays a
// private dependency. Single-threaded; the reduction order is fixed for fixed
// shapes, which the deterministic-training contract relies on.
#include <Eigen/Core>

namespace genads::detail {

template <typename T>
using MatMap = Eigen::Map<
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>, 0,
    Eigen::OuterStride<>>;
template <typename T>
using ConstMatMap = Eigen::Map<
    const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>, 0,
    Eigen::OuterStride<>>;

template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, T alpha, const T* a,
          int lda, const T* b, int ldb, T beta, T* c, int ldc) {
  ConstMatMap<T> ma(a, trans_a ? k : m, trans_a ? m : k,
                    Eigen::OuterStride<>(lda));
  ConstMatMap<T> mb(b, trans_b ? n : k, trans_b ? k : n,
                    Eigen::OuterStride<>(ldb));
  MatMap<T> mc(c, m, n, Eigen::OuterStride<>(ldc));
  if (beta == T(0))
    mc.setZero();
  else if (beta != T(1))
    mc *= beta;
  if (trans_a) {
    if (trans_b)
      mc.noalias() += alpha * (ma.transpose() * mb.transpose());
    else
      mc.noalias() += alpha * (ma.transpose() * mb);
  } else {
    if (trans_b)
      mc.noalias() += alpha * (ma * mb.transpose());
    else
      mc.noalias() += alpha * (ma * mb);
  }
}

template void gemm<float>(bool, bool, int, int, int, float, const float*, int,
                          const float*, int, float, float*, int);
template void gemm<double>(bool, bool, int, int, int, double, const double*,
                           int, const double*, int, double, double*, int);

}  // namespace genads::detail
