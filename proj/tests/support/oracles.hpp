#pragma once

// Naive reference implementations used only by tests. Nothing here calls the
// library routine it is meant to check.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "sos/givens.hpp"
#include "sos/tensor.hpp"

namespace oracle {

using cplx = std::complex<double>;
using sos::CoeffTensor4;
using sos::Convention;

inline std::filesystem::path fixture_dir() { return SOS_FIXTURE_DIR; }

inline Eigen::MatrixXcd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(d(rng), d(rng));
  return m;
}

inline Eigen::MatrixXd gaussian_real(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

/// Unitary from the QR factor of a Gaussian matrix (Gram–Schmidt, no phase fix).
inline Eigen::MatrixXcd unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::MatrixXcd a = gaussian(n, n, rng);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) a.col(k) -= a.col(j).dot(a.col(k)) * a.col(j);
    a.col(k).normalize();
  }
  return a;
}

inline Eigen::MatrixXd orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::MatrixXd a = gaussian_real(n, n, rng);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) a.col(k) -= a.col(j).dot(a.col(k)) * a.col(j);
    a.col(k).normalize();
  }
  return a;
}

inline CoeffTensor4 random_tensor(std::size_t n, Convention c, std::mt19937_64& rng) {
  const auto N = static_cast<Eigen::Index>(n * n * n * n);
  Eigen::VectorXcd v = gaussian(N, 1, rng);
  return CoeffTensor4(n, c, v);
}

/// Coefficients of the adjoint operator for the charge-charge reading:
/// (a†_i a_j a†_k a_l)† = a†_l a_k a†_j a_i.
inline CoeffTensor4 adjoint_cc(const CoeffTensor4& t) {
  const std::size_t n = t.modes();
  CoeffTensor4 out(n, t.convention());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out(l, k, j, i) = std::conj(t(i, j, k, l));
  return out;
}

/// Antisymmetric ladder tensor a[p,q,r,s] = −a[q,p,r,s] = −a[p,q,s,r] whose
/// operator Σ a a†_p a†_q a_s a_r is antihermitian.
inline CoeffTensor4 random_antihermitian_ladder(std::size_t n, std::mt19937_64& rng) {
  CoeffTensor4 g = random_tensor(n, Convention::PqrsLadder, rng);
  CoeffTensor4 a(n, Convention::PqrsLadder);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          a(p, q, r, s) = g(p, q, r, s) - g(q, p, r, s) - g(p, q, s, r) + g(q, p, s, r);
  // (a†_p a†_q a_s a_r)† = a†_r a†_s a_q a_p: adjoint coefficient is conj a[r,s,p,q].
  CoeffTensor4 out(n, Convention::PqrsLadder);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) out(p, q, r, s) = 0.5 * (a(p, q, r, s) - std::conj(a(r, s, p, q)));
  return out;
}

/// Charge-charge tensor with a complex-symmetric geminal matrix.
inline CoeffTensor4 random_symmetric_cc(std::size_t n, std::mt19937_64& rng) {
  CoeffTensor4 g = random_tensor(n, Convention::ChargeCharge, rng);
  CoeffTensor4 t(n, Convention::ChargeCharge);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r) t(p, s, q, r) = 0.5 * (g(p, s, q, r) + g(q, r, p, s));
  return t;
}

/// Symmetric-geminal charge-charge tensor of an antihermitian operator.
inline CoeffTensor4 random_antihermitian_cc(std::size_t n, std::mt19937_64& rng) {
  CoeffTensor4 t = random_symmetric_cc(n, rng);
  CoeffTensor4 adj = adjoint_cc(t);
  CoeffTensor4 out(n, Convention::ChargeCharge);
  out.data() = 0.5 * (t.data() - adj.data());
  return out;
}

/// Random charge-charge tensor over 2m spin-orbitals (spin = index parity) that
/// keeps only Sz-conserving terms, spin-flip pairings included.
inline CoeffTensor4 random_sz_conserving_cc(std::size_t m, std::mt19937_64& rng) {
  const std::size_t n = 2 * m;
  CoeffTensor4 t = random_tensor(n, Convention::ChargeCharge, rng);
  auto spin = [](std::size_t p) { return static_cast<int>(p % 2); };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          if (spin(p) - spin(s) + spin(q) - spin(r) != 0) t(p, s, q, r) = 0.0;
  return t;
}

/// (ij|kl) = Σ_k L_k[i,j] L_k[k,l] with real symmetric L_k: 8-fold symmetric, PSD.
inline CoeffTensor4 random_eri(std::size_t m, int rank, std::mt19937_64& rng) {
  CoeffTensor4 v(m, Convention::HermitianChemist);
  for (int k = 0; k < rank; ++k) {
    const Eigen::MatrixXd g = gaussian_real(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m), rng);
    const Eigen::MatrixXd L = g + g.transpose();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b) v(i, j, a, b) += L(i, j) * L(a, b);
  }
  return v;
}

/// t[p,s,q,r] = Σ_kl mu[p,k] conj mu[s,k] J[k,l] mu[q,l] conj mu[r,l], by loops.
inline CoeffTensor4 factor_tensor(const Eigen::MatrixXcd& mu, const Eigen::MatrixXcd& J) {
  const auto n = static_cast<std::size_t>(mu.rows());
  CoeffTensor4 t(n, Convention::ChargeCharge);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
              acc += mu(p, k) * std::conj(mu(s, k)) * J(k, l) * mu(q, l) * std::conj(mu(r, l));
          t(p, s, q, r) = acc;
        }
  return t;
}

/// t̃[p,q,r,s] = Σ conj(u_ip) u_jq conj(u_kr) u_ls t[i,j,k,l] as a single 8-fold loop.
inline CoeffTensor4 transform(const CoeffTensor4& t, const Eigen::MatrixXcd& u) {
  const std::size_t n = t.modes();
  CoeffTensor4 out(n, t.convention());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          cplx acc = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
              for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                  acc += std::conj(u(i, p)) * u(j, q) * std::conj(u(k, r)) * u(l, s) * t(i, j, k, l);
          out(p, q, r, s) = acc;
        }
  return out;
}

/// exp by truncated Taylor series after scaling by 2^-k, then squaring.
inline Eigen::MatrixXcd taylor_exp(const Eigen::MatrixXcd& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int k = 0;
  while (norm / std::ldexp(1.0, k) > 0.25) ++k;
  const Eigen::MatrixXcd a = m / std::ldexp(1.0, k);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::MatrixXcd sum = term;
  for (int j = 1; j < 30; ++j) {
    term = term * a / static_cast<double>(j);
    sum += term;
  }
  for (int j = 0; j < k; ++j) sum = sum * sum;
  return sum;
}

/// Antihermitian generator from a real parameter vector in the library's
/// layout (Re upper, Im upper, Im diagonal), assembled independently.
inline Eigen::MatrixXcd kappa(std::size_t n, const Eigen::VectorXd& x) {
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);
  const std::size_t m = n * (n - 1) / 2;
  std::size_t idx = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b, ++idx) {
      const cplx v(x[idx], x[m + idx]);
      k(a, b) += v;
      k(b, a) -= std::conj(v);
    }
  for (std::size_t a = 0; a < n; ++a) k(a, a) = cplx(0.0, x[2 * m + a]);
  return k;
}

inline double objective(const CoeffTensor4& t, const Eigen::MatrixXcd& u) {
  const CoeffTensor4 r = transform(t, u);
  double o = 0.0;
  for (std::size_t x = 0; x < t.modes(); ++x)
    for (std::size_t y = 0; y < t.modes(); ++y) o += std::norm(r(x, x, y, y));
  return o;
}

/// Jordan–Wigner matrices built as Kronecker products; mode 0 is the rightmost
/// (least significant) tensor factor.
class JordanWigner {
 public:
  explicit JordanWigner(std::size_t n) : n_(n), dim_(Eigen::Index(1) << n) {
    for (std::size_t p = 0; p < n; ++p) create_.push_back(build(p));
  }

  std::size_t modes() const { return n_; }
  Eigen::Index dim() const { return dim_; }
  const Eigen::MatrixXcd& create(std::size_t p) const { return create_[p]; }
  Eigen::MatrixXcd annihilate(std::size_t p) const { return create_[p].adjoint(); }
  Eigen::MatrixXcd number(std::size_t p) const { return create_[p] * create_[p].adjoint(); }

  Eigen::MatrixXcd one_body(const Eigen::MatrixXcd& h) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t q = 0; q < n_; ++q)
        if (h(p, q) != 0.0) out += h(p, q) * create_[p] * create_[q].adjoint();
    return out;
  }

  /// Σ t[i,j,k,l] a†_i a_j a†_k a_l.
  Eigen::MatrixXcd charge_charge(const CoeffTensor4& t) const {
    std::vector<Eigen::MatrixXcd> e;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) e.push_back(create_[i] * create_[j].adjoint());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(dim_, dim_);
        for (std::size_t k = 0; k < n_; ++k)
          for (std::size_t l = 0; l < n_; ++l)
            if (t(i, j, k, l) != 0.0) right += t(i, j, k, l) * e[k * n_ + l];
        out += e[i * n_ + j] * right;
      }
    return out;
  }

  /// Σ a[p,q,r,s] a†_p a†_q a_s a_r.
  Eigen::MatrixXcd ladder(const CoeffTensor4& a) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t q = 0; q < n_; ++q) {
        Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(dim_, dim_);
        for (std::size_t r = 0; r < n_; ++r)
          for (std::size_t s = 0; s < n_; ++s)
            if (a(p, q, r, s) != 0.0) right += a(p, q, r, s) * create_[s].adjoint() * create_[r].adjoint();
        out += create_[p] * create_[q] * right;
      }
    return out;
  }

  Eigen::MatrixXcd operator_of(const CoeffTensor4& t) const {
    return t.convention() == Convention::PqrsLadder ? ladder(t) : charge_charge(t);
  }

  /// ½ Σ_p (n_{2p} − n_{2p+1}).
  Eigen::MatrixXcd sz() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t p = 0; p < n_; ++p) out += (p % 2 == 0 ? 0.5 : -0.5) * number(p);
    return out;
  }

 private:
  Eigen::MatrixXcd build(std::size_t p) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd z;
    z << 1, 0, 0, -1;
    Eigen::Matrix2cd raise;
    raise << 0, 0, 1, 0;
    // Build from the most significant mode down so mode 0 ends up rightmost.
    for (std::size_t k = n_; k-- > 0;) {
      const Eigen::Matrix2cd& f = k > p ? id : (k == p ? raise : z);
      Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) next.block(2 * a, 2 * b, 2, 2) = m(a, b) * f;
      m = std::move(next);
    }
    return m;
  }

  std::size_t n_;
  Eigen::Index dim_;
  std::vector<Eigen::MatrixXcd> create_;
};

inline double rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double s = std::max(b.norm(), 1e-300);
  return (a - b).norm() / s;
}

inline double rel(const CoeffTensor4& a, const CoeffTensor4& b) {
  const double s = std::max(b.norm(), 1e-300);
  return (a.data() - b.data()).norm() / s;
}

/// Max over entries of |a − b| / max|b|.
inline double rel_elementwise(const CoeffTensor4& a, const CoeffTensor4& b) {
  const double s = std::max(b.data().cwiseAbs().maxCoeff(), 1e-300);
  return (a.data() - b.data()).cwiseAbs().maxCoeff() / s;
}

/// D · G_last ⋯ G_first assembled from explicit two-by-two blocks.
inline Eigen::MatrixXcd assemble_givens(const sos::GivensNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& g : net.rotations) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(n, n);
    const cplx e = std::polar(1.0, g.phi);
    G(g.p, g.p) = std::cos(g.theta);
    G(g.p, g.q) = -std::conj(e) * std::sin(g.theta);
    G(g.q, g.p) = e * std::sin(g.theta);
    G(g.q, g.q) = std::cos(g.theta);
    m = G * m;
  }
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = std::polar(1.0, net.phases[i]);
  return d.asDiagonal() * m;
}

}  // namespace oracle
