#include "sos/fock_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>
#include <bit>
#include <cstdlib>
#include <string>

#include "sos/error.hpp"
#include "sos/linalg.hpp"

namespace sos::fock {

namespace {

using State = std::uint64_t;

std::size_t dim(std::size_t n) { return std::size_t{1} << n; }

int parity_below(State s, std::size_t p) {
  const State mask = (State{1} << p) - 1;
  return (std::popcount(s & mask) & 1) ? -1 : 1;
}

void check_square(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() != m.cols()) throw ShapeError(std::string(what) + " needs a square matrix");
}

std::size_t modes_of(const Eigen::MatrixXcd& m) { return static_cast<std::size_t>(m.rows()); }

}  // namespace

std::size_t oracle_mode_cap() {
  if (const char* env = std::getenv("SOS_COMPRESS_ORACLE_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < 30) return static_cast<std::size_t>(v);
  }
  return 10;
}

void check_oracle_size(std::size_t n) {
  const std::size_t cap = oracle_mode_cap();
  if (n > cap)
    throw OracleSizeError("dense Fock-space oracle refused: " + std::to_string(n) + " modes exceeds the cap of " +
                          std::to_string(cap) + " (set SOS_COMPRESS_ORACLE_CAP to raise it)");
}

LadderResult apply_create(std::uint64_t state, std::size_t p) {
  const State bit = State{1} << p;
  if (state & bit) return {state, 0};
  return {state | bit, parity_below(state, p)};
}

LadderResult apply_annihilate(std::uint64_t state, std::size_t p) {
  const State bit = State{1} << p;
  if (!(state & bit)) return {state, 0};
  return {state & ~bit, parity_below(state, p)};
}

bool check_anticommutation(std::size_t n) {
  check_oracle_size(n);
  for (State s = 0; s < dim(n); ++s)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        // {a_p, a†_q}|s⟩ must equal δ_pq |s⟩.
        int same = 0;
        int other = 0;
        auto accumulate = [&](LadderResult r) {
          if (r.sign == 0) return;
          (r.state == s ? same : other) += r.sign;
        };
        {
          const LadderResult c = apply_create(s, q);
          if (c.sign) {
            LadderResult a = apply_annihilate(c.state, p);
            a.sign *= c.sign;
            accumulate(a);
          }
        }
        {
          const LadderResult a = apply_annihilate(s, p);
          if (a.sign) {
            LadderResult c = apply_create(a.state, q);
            c.sign *= a.sign;
            accumulate(c);
          }
        }
        if (same != (p == q ? 1 : 0) || other != 0) return false;
        // {a_p, a_q}|s⟩ = 0.
        int sum = 0;
        for (int order = 0; order < 2; ++order) {
          const std::size_t first = order ? p : q;
          const std::size_t second = order ? q : p;
          const LadderResult a = apply_annihilate(s, first);
          if (!a.sign) continue;
          const LadderResult b = apply_annihilate(a.state, second);
          sum += a.sign * b.sign;
        }
        if (sum != 0) return false;
      }
  return true;
}

DenseOperator identity(std::size_t n) {
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  return {n, Eigen::MatrixXcd::Identity(d, d)};
}

DenseOperator creation(std::size_t n, std::size_t p) {
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  DenseOperator op{n, Eigen::MatrixXcd::Zero(d, d)};
  for (State s = 0; s < dim(n); ++s) {
    const LadderResult r = apply_create(s, p);
    if (r.sign) op.mat(static_cast<Eigen::Index>(r.state), static_cast<Eigen::Index>(s)) = r.sign;
  }
  return op;
}

DenseOperator annihilation(std::size_t n, std::size_t p) {
  DenseOperator c = creation(n, p);
  c.mat = c.mat.adjoint().eval();
  return c;
}

DenseOperator number(std::size_t n, std::size_t p) {
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  DenseOperator op{n, Eigen::MatrixXcd::Zero(d, d)};
  for (State s = 0; s < dim(n); ++s)
    if (s >> p & 1) op.mat(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = 1.0;
  return op;
}

DenseOperator build_one_body(const Eigen::MatrixXcd& h) {
  check_square(h, "build_one_body");
  const std::size_t n = modes_of(h);
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  DenseOperator op{n, Eigen::MatrixXcd::Zero(d, d)};
  for (State s = 0; s < dim(n); ++s)
    for (std::size_t q = 0; q < n; ++q) {
      const LadderResult a = apply_annihilate(s, q);
      if (!a.sign) continue;
      for (std::size_t p = 0; p < n; ++p) {
        const cplx c = h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
        if (c == 0.0) continue;
        const LadderResult b = apply_create(a.state, p);
        if (!b.sign) continue;
        op.mat(static_cast<Eigen::Index>(b.state), static_cast<Eigen::Index>(s)) += c * double(a.sign * b.sign);
      }
    }
  return op;
}

DenseOperator build_two_body(const CoeffTensor4& t, const std::optional<OneBodyCorrection>& s) {
  const std::size_t n = t.modes();
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  DenseOperator op{n, Eigen::MatrixXcd::Zero(d, d)};
  const bool ladder = t.convention() == Convention::PqrsLadder;
  for (State s0 = 0; s0 < dim(n); ++s0)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t w = 0; w < n; ++w) {
            const cplx c = t(p, q, r, w);
            if (c == 0.0) continue;
            // ladder: a†_p a†_q a_w a_r ; charge-charge: a†_p a_q a†_r a_w
            LadderResult x{s0, 1};
            int sign = 1;
            if (ladder) {
              x = apply_annihilate(x.state, r);
              sign *= x.sign;
              if (!sign) continue;
              x = apply_annihilate(x.state, w);
              sign *= x.sign;
              if (!sign) continue;
              x = apply_create(x.state, q);
              sign *= x.sign;
              if (!sign) continue;
              x = apply_create(x.state, p);
              sign *= x.sign;
            } else {
              x = apply_annihilate(x.state, w);
              sign *= x.sign;
              if (!sign) continue;
              x = apply_create(x.state, r);
              sign *= x.sign;
              if (!sign) continue;
              x = apply_annihilate(x.state, q);
              sign *= x.sign;
              if (!sign) continue;
              x = apply_create(x.state, p);
              sign *= x.sign;
            }
            if (!sign) continue;
            op.mat(static_cast<Eigen::Index>(x.state), static_cast<Eigen::Index>(s0)) += c * double(sign);
          }
  if (s) {
    if (s->modes() != n) throw ShapeError("one-body correction has the wrong size");
    op.mat -= build_one_body(s->S).mat;
  }
  return op;
}

DenseOperator sz_operator(std::size_t n) {
  if (n % 2) throw ShapeError("Sz needs an even number of spin-orbitals");
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  DenseOperator op{n, Eigen::MatrixXcd::Zero(d, d)};
  for (State s = 0; s < dim(n); ++s) {
    double sz = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      if (s >> p & 1) sz += (p % 2 == 0) ? 0.5 : -0.5;
    op.mat(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = sz;
  }
  return op;
}

DenseOperator total_number(std::size_t n) {
  check_oracle_size(n);
  const auto d = static_cast<Eigen::Index>(dim(n));
  DenseOperator op{n, Eigen::MatrixXcd::Zero(d, d)};
  for (State s = 0; s < dim(n); ++s)
    op.mat(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = double(std::popcount(s));
  return op;
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return a * b - b * a; }

Eigen::MatrixXcd exp_via_eigen(const Eigen::MatrixXcd& antihermitian) {
  return linalg::exp_antihermitian(antihermitian);
}

Eigen::MatrixXcd exp_via_scaling_squaring(const Eigen::MatrixXcd& m) { return m.exp(); }

DenseOperator exp_operator(const DenseOperator& g) {
  const double norm = g.mat.norm();
  const bool anti = (g.mat + g.mat.adjoint()).norm() <= 1e-12 * std::max(norm, 1e-300);
  return {g.n, anti ? exp_via_eigen(g.mat) : exp_via_scaling_squaring(g.mat)};
}

DenseOperator lift_unitary(const Eigen::MatrixXcd& g) {
  check_square(g, "lift_unitary");
  if (linalg::unitarity_defect(g) > 1e-10) throw Error("lift_unitary needs a unitary matrix");
  return exp_operator(build_one_body(linalg::log_unitary(g)));
}

Eigen::VectorXcd charge_diagonal(const Eigen::MatrixXcd& J) {
  check_square(J, "charge_diagonal");
  const std::size_t n = modes_of(J);
  check_oracle_size(n);
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(dim(n)));
  for (State s = 0; s < dim(n); ++s) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!(s >> k & 1)) continue;
      for (std::size_t l = 0; l < n; ++l)
        if (s >> l & 1) acc += J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    }
    diag[static_cast<Eigen::Index>(s)] = acc;
  }
  return diag;
}

DenseOperator factor_operator(const SOSFactor& f) {
  const DenseOperator R = lift_unitary(f.mu);
  return {R.n, R.mat * charge_diagonal(f.J).asDiagonal() * R.mat.adjoint()};
}

DenseOperator factor_exponential(const SOSFactor& f) {
  const DenseOperator R = lift_unitary(f.mu);
  const Eigen::VectorXcd e = charge_diagonal(f.J).array().exp();
  return {R.n, R.mat * e.asDiagonal() * R.mat.adjoint()};
}

DenseOperator trotter_product(const std::vector<SOSFactor>& factors, const std::optional<OneBodyCorrection>& s,
                              std::size_t n) {
  DenseOperator prod = identity(n);
  for (const auto& f : factors) {
    if (f.modes() != n) throw ShapeError("factor mode count differs from the operator");
    prod.mat = factor_exponential(f).mat * prod.mat;
  }
  if (s && s->S.norm() > 0) prod.mat = exp_operator(build_one_body(-s->S)).mat * prod.mat;
  return prod;
}

VerifyResult verify_factorization(const CoeffTensor4& t, const std::optional<OneBodyCorrection>& s,
                                  const std::vector<SOSFactor>& factors, VerifyMode mode) {
  const std::size_t n = t.modes();
  check_oracle_size(n);
  const DenseOperator G = build_two_body(t);
  Eigen::MatrixXcd approx = Eigen::MatrixXcd::Zero(G.mat.rows(), G.mat.cols());
  for (const auto& f : factors) {
    if (f.modes() != n) throw ShapeError("factor mode count differs from the tensor");
    approx += factor_operator(f).mat;
  }
  if (s) approx -= build_one_body(s->S).mat;
  VerifyResult out;
  out.op_error = (G.mat - approx).norm();
  if (mode == VerifyMode::Trotter) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const Eigen::MatrixXcd& J = factors[i].J;
      if (J.real().norm() > 1e-10 * std::max(J.norm(), 1e-300))
        throw Error("trotter mode needs purely imaginary couplings (an antihermitian generator); factor " +
                    std::to_string(i) + " has a real part");
    }
    const Eigen::MatrixXcd exact = exp_operator(G).mat;
    const Eigen::MatrixXcd prod = trotter_product(factors, s, n).mat;
    out.trotter_error = linalg::spectral_norm(exact - prod);
  }
  return out;
}

DenseOperator realize_circuit(const CircuitIR& ir) {
  const std::size_t n = ir.n;
  DenseOperator total = identity(n);
  for (const auto& layer : ir.layers) {
    if (const auto* g = std::get_if<GivensLayer>(&layer)) {
      total.mat = lift_unitary(network_unitary(g->network)).mat * total.mat;
      continue;
    }
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(dim(n)));
    for (State s = 0; s < dim(n); ++s) {
      double phase = 0.0;
      if (const auto* c = std::get_if<ChargeLayer>(&layer)) {
        for (const auto& k : c->couplings)
          if ((s >> k.p & 1) && (s >> k.q & 1)) phase += k.angle;
        for (std::size_t p = 0; p < n && p < static_cast<std::size_t>(c->phases.size()); ++p)
          if (s >> p & 1) phase += c->phases[static_cast<Eigen::Index>(p)];
      } else if (const auto* ph = std::get_if<PhaseLayer>(&layer)) {
        for (std::size_t p = 0; p < n && p < static_cast<std::size_t>(ph->phases.size()); ++p)
          if (s >> p & 1) phase += ph->phases[static_cast<Eigen::Index>(p)];
      }
      diag[static_cast<Eigen::Index>(s)] = std::polar(1.0, phase);
    }
    total.mat = diag.asDiagonal() * total.mat;
  }
  return total;
}

}  // namespace sos::fock
