#include "normax/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "normax/kernels.hpp"

namespace normax {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (const Cx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

Cx dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw validation_error("dot: length mismatch");
  Cx acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

bool all_finite(const Vec& v) {
  for (const Cx& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

bool all_finite(const DenseMatrix& m) {
  for (const Cx& x : m.a)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition, cyclic Jacobi with complex pivots.
//
// For a pivot pair (p,q) the 2x2 block [[a_pp, a_pq], [conj(a_pq), a_qq]] is
// diagonalized by G = diag(1, e^{-i phi}) * R(theta), where phi carries the
// phase of a_pq and theta solves t^2 + 2 tau t - 1 = 0 with
// tau = (a_qq - a_pp) / (2 |a_pq|); taking the smaller root keeps
// |theta| <= pi/4, which is what makes the cyclic sweep converge.
// ---------------------------------------------------------------------------

EigResult hermitian_eig(const DenseMatrix& H, double tol) {
  if (H.rows != H.cols) throw validation_error("hermitian_eig: matrix not square");
  if (!all_finite(H)) throw validation_error("hermitian_eig: non-finite entries");
  const std::size_t n = H.rows;

  const double scale = frob_norm(H);
  double herm_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      herm_dev += std::norm(H(i, j) - std::conj(H(j, i)));
  herm_dev = std::sqrt(herm_dev);
  if (herm_dev > tol * std::max(scale, 1e-300))
    throw validation_error("hermitian_eig: input is not Hermitian");

  // Work on the Hermitian average; rotations then preserve symmetry exactly
  // up to roundoff and we only ever read the full matrix.
  DenseMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A(i, j) = 0.5 * (H(i, j) + std::conj(H(j, i)));

  DenseMatrix Q = DenseMatrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(A(i, j));
    return std::sqrt(s);
  };

  const double target = 1e-14 * static_cast<double>(n) * std::max(scale, 1e-300);
  const double elem_skip = target / std::max<double>(1.0, static_cast<double>(n));
  const std::size_t max_sweeps = 60;

  std::size_t sweep = 0;
  double off = off_norm();
  for (; sweep < max_sweeps && off > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Cx apq = A(p, q);
        const double beta = std::abs(apq);
        if (beta <= elem_skip) continue;

        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const Cx phase = apq / beta;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * beta);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Cx cphase = std::conj(phase);

        // A <- A G (columns p,q), then A <- G^H A (rows p,q); Q <- Q G.
        for (std::size_t r = 0; r < n; ++r) {
          const Cx arp = A(r, p), arq = A(r, q);
          A(r, p) = c * arp - s * cphase * arq;
          A(r, q) = s * arp + c * cphase * arq;
          const Cx qrp = Q(r, p), qrq = Q(r, q);
          Q(r, p) = c * qrp - s * cphase * qrq;
          Q(r, q) = s * qrp + c * cphase * qrq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const Cx apc = A(p, col), aqc = A(q, col);
          A(p, col) = c * apc - s * phase * aqc;
          A(q, col) = s * apc + c * phase * aqc;
        }
        // The pivot block is diagonal now by construction; pin it to kill
        // roundoff drift.
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = Cx(app - t * beta, 0.0);
        A(q, q) = Cx(aqq + t * beta, 0.0);
      }
    }
    off = off_norm();
  }
  if (off > target)
    throw convergence_error("hermitian_eig: sweep cap hit", off);

  EigResult out;
  out.sweeps = sweep;
  out.lambdas.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return A(i, i).real() < A(j, j).real();
  });
  out.Q = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.lambdas[j] = A(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.Q(i, j) = Q(i, order[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Column-pivoted Householder QR and the weighted least-squares solve on top.
// ---------------------------------------------------------------------------

namespace {

struct Reflector {
  std::size_t offset = 0;  // first row the reflector touches
  Vec v;                   // Householder vector, length rows - offset
  double vn2 = 0.0;        // ||v||^2; zero means identity
};

void apply_reflector(const Reflector& h, Vec& x) {
  if (h.vn2 == 0.0) return;
  Cx acc{};
  for (std::size_t i = 0; i < h.v.size(); ++i)
    acc += std::conj(h.v[i]) * x[h.offset + i];
  const Cx f = 2.0 * acc / h.vn2;
  for (std::size_t i = 0; i < h.v.size(); ++i) x[h.offset + i] -= f * h.v[i];
}

struct Cpqr {
  DenseMatrix R;                   // min(m,k) x k, upper trapezoid
  std::vector<Reflector> hh;       // applied left-to-right reproduce Q^H
  std::vector<std::size_t> perm;   // working column j is original perm[j]
  std::size_t rank = 0;
};

// Factor B P = Q R with greedy column pivoting; rank is cut where a pivot
// drops below rank_tol * |R_00|.
Cpqr cpqr_factor(DenseMatrix B, double rank_tol) {
  const std::size_t m = B.rows, k = B.cols;
  const std::size_t steps = std::min(m, k);
  Cpqr f;
  f.perm.resize(k);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

  double pivot0 = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    // Fresh trailing column norms; k is small in every caller, so the O(mk^2)
    // recompute is cheaper than maintaining downdated norms safely.
    std::size_t best = j;
    double best_nrm = -1.0;
    for (std::size_t l = j; l < k; ++l) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += std::norm(B(i, l));
      if (s > best_nrm) {
        best_nrm = s;
        best = l;
      }
    }
    if (best != j) {
      for (std::size_t i = 0; i < m; ++i) std::swap(B(i, j), B(i, best));
      std::swap(f.perm[j], f.perm[best]);
    }

    const double colnrm = std::sqrt(std::max(best_nrm, 0.0));
    if (j == 0) pivot0 = colnrm;
    if (colnrm <= rank_tol * std::max(pivot0, 1e-300)) break;  // rank found

    Reflector h;
    h.offset = j;
    h.v.resize(m - j);
    for (std::size_t i = j; i < m; ++i) h.v[i - j] = B(i, j);
    const Cx x0 = h.v[0];
    const Cx ph = (x0 == Cx{}) ? Cx(1.0, 0.0) : x0 / std::abs(x0);
    const Cx alpha = -ph * colnrm;
    h.v[0] -= alpha;
    h.vn2 = 0.0;
    for (const Cx& t : h.v) h.vn2 += std::norm(t);

    if (h.vn2 > 0.0) {
      for (std::size_t l = j; l < k; ++l) {
        Cx acc{};
        for (std::size_t i = 0; i < h.v.size(); ++i)
          acc += std::conj(h.v[i]) * B(j + i, l);
        const Cx fct = 2.0 * acc / h.vn2;
        for (std::size_t i = 0; i < h.v.size(); ++i) B(j + i, l) -= fct * h.v[i];
      }
    }
    B(j, j) = alpha;  // exact by construction
    for (std::size_t i = j + 1; i < m; ++i) B(i, j) = 0.0;
    f.hh.push_back(std::move(h));
    f.rank = j + 1;
  }

  f.R = DenseMatrix(steps, k);
  for (std::size_t i = 0; i < steps; ++i)
    for (std::size_t l = i; l < k; ++l) f.R(i, l) = B(i, l);
  return f;
}

}  // namespace

Vec weighted_least_squares(const DenseMatrix& Phi, const Vec& F,
                           std::span<const double> omega) {
  const std::size_t m = Phi.rows, k = Phi.cols;
  if (F.size() != m || omega.size() != m)
    throw validation_error("weighted_least_squares: dimension mismatch");
  if (k == 0) return {};
  if (!all_finite(Phi) || !all_finite(F))
    throw validation_error("weighted_least_squares: non-finite input");
  double wsum = 0.0;
  for (double w : omega) {
    if (!(w >= 0.0))
      throw validation_error("weighted_least_squares: negative or NaN weight");
    wsum += w;
  }
  if (wsum == 0.0)
    throw validation_error("weighted_least_squares: all weights vanish");

  DenseMatrix B(m, k);
  Vec g(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sw = std::sqrt(omega[i]);
    for (std::size_t j = 0; j < k; ++j) B(i, j) = sw * Phi(i, j);
    g[i] = sw * F[i];
  }

  Cpqr f = cpqr_factor(std::move(B), 1e-12);
  const std::size_t r = f.rank;
  Vec alpha(k, Cx{});
  if (r == 0) return alpha;

  for (const Reflector& h : f.hh) apply_reflector(h, g);  // g <- Q^H g
  Vec c(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(r));

  Vec y(k, Cx{});
  if (r == k) {
    for (std::size_t i = r; i-- > 0;) {
      Cx acc = c[i];
      for (std::size_t l = i + 1; l < k; ++l) acc -= f.R(i, l) * y[l];
      y[i] = acc / f.R(i, i);
    }
  } else {
    // Min-norm solution of the rank-r trapezoid M y = c: QR-factor N = M^H
    // (k x r, full column rank), then y = Q2 * solve(R2^H, c).
    DenseMatrix N(k, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t l = 0; l < k; ++l) N(l, i) = std::conj(f.R(i, l));
    std::vector<Reflector> hh2;
    for (std::size_t j = 0; j < r; ++j) {
      Reflector h;
      h.offset = j;
      h.v.resize(k - j);
      double nrm2v = 0.0;
      for (std::size_t i = j; i < k; ++i) {
        h.v[i - j] = N(i, j);
        nrm2v += std::norm(N(i, j));
      }
      const double colnrm = std::sqrt(nrm2v);
      const Cx x0 = h.v[0];
      const Cx ph = (x0 == Cx{}) ? Cx(1.0, 0.0) : x0 / std::abs(x0);
      const Cx al = -ph * colnrm;
      h.v[0] -= al;
      h.vn2 = 0.0;
      for (const Cx& t : h.v) h.vn2 += std::norm(t);
      if (h.vn2 > 0.0) {
        for (std::size_t l = j; l < r; ++l) {
          Cx acc{};
          for (std::size_t i = 0; i < h.v.size(); ++i)
            acc += std::conj(h.v[i]) * N(j + i, l);
          const Cx fct = 2.0 * acc / h.vn2;
          for (std::size_t i = 0; i < h.v.size(); ++i) N(j + i, l) -= fct * h.v[i];
        }
      }
      N(j, j) = al;
      for (std::size_t i = j + 1; i < k; ++i) N(i, j) = 0.0;
      hh2.push_back(std::move(h));
    }
    // Forward-substitute R2^H z = c (R2^H is lower triangular).
    Vec z(r);
    for (std::size_t i = 0; i < r; ++i) {
      Cx acc = c[i];
      for (std::size_t l = 0; l < i; ++l) acc -= std::conj(N(l, i)) * z[l];
      z[i] = acc / std::conj(N(i, i));
    }
    // y = Q2 [z; 0] = H_1 ... H_r [z; 0].
    for (std::size_t i = 0; i < r; ++i) y[i] = z[i];
    for (std::size_t j = r; j-- > 0;) apply_reflector(hh2[j], y);
  }

  for (std::size_t j = 0; j < k; ++j) alpha[f.perm[j]] = y[j];
  return alpha;
}

double spectral_norm(const DenseMatrix& M, double tol) {
  if (M.rows == 0 || M.cols == 0) return 0.0;
  if (!all_finite(M)) throw validation_error("spectral_norm: non-finite entries");

  const std::size_t small = std::min(M.rows, M.cols);
  if (small <= 128) {
    const DenseMatrix G = (M.rows <= M.cols) ? matmul(M, adjoint(M))
                                             : matmul(adjoint(M), M);
    const EigResult eg = hermitian_eig(G, 1e-8);
    return std::sqrt(std::max(eg.lambdas.back(), 0.0));
  }

  // Power iteration on M^H M; sigma estimates are monotone nondecreasing.
  Vec v = random_unit_vector(M.cols, 0x5eedULL);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] += 1.0 / static_cast<double>(v.size() + i + 1);
  {
    const double nv = norm2(v);
    for (Cx& x : v) x /= nv;
  }
  double sigma_prev = -1.0;
  for (std::size_t it = 0; it < 10000; ++it) {
    const Vec y = matvec(M, v);
    const double sigma = norm2(y);
    if (sigma == 0.0) return 0.0;
    if (sigma_prev >= 0.0 && sigma - sigma_prev <= tol * sigma) return sigma;
    sigma_prev = sigma;
    Vec w = matvec(adjoint(M), y);
    const double nw = norm2(w);
    if (nw == 0.0) return sigma;
    for (Cx& x : w) x /= nw;
    v = std::move(w);
  }
  return sigma_prev;
}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Top 53 bits -> (0, 1]; the +1 keeps log() away from zero.
  auto unit = [this]() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  };
  const double u1 = unit();
  const double u2 = unit();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 6.283185307179586476925286766559 * u2;
  spare_ = rad * std::sin(ang);
  have_spare_ = true;
  return rad * std::cos(ang);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec random_unit_vector(std::size_t n, std::uint64_t seed, bool real_only) {
  if (n == 0) throw validation_error("random_unit_vector: empty dimension");
  GaussianStream g(seed);
  Vec v(n);
  double nrm = 0.0;
  // Vanishing norm has probability zero but a deterministic stream could in
  // principle hit it; bump the seed and redraw.
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) {
      const double re = g.next();
      const double im = real_only ? 0.0 : g.next();
      v[i] = Cx(re, im);
    }
    nrm = norm2(v);
    if (nrm > 1e-150) break;
  }
  for (Cx& x : v) x /= nrm;
  return v;
}

}  // namespace normax
