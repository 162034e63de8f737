#include "sos/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sos/error.hpp"
#include "sos/fock_oracle.hpp"

namespace sos {

namespace {

constexpr double kSupportTol = 1e-12;

// Modes on which a factor acts: mu differs from the identity or J is nonzero.
std::vector<bool> support(const SOSFactor& f) {
  const Eigen::Index n = f.mu.rows();
  std::vector<bool> on(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[k] = 1.0;
    if ((f.mu.col(k) - e).norm() > kSupportTol || (f.mu.row(k).transpose() - e).norm() > kSupportTol ||
        f.J.row(k).norm() > kSupportTol || f.J.col(k).norm() > kSupportTol)
      on[static_cast<std::size_t>(k)] = true;
  }
  return on;
}

bool disjoint(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

int charge_rounds(std::size_t n) { return n >= 2 ? static_cast<int>(n) : 0; }

}  // namespace

std::vector<SOSFactor> fuse_simultaneous(const std::vector<SOSFactor>& factors) {
  std::vector<SOSFactor> out;
  std::vector<std::vector<bool>> supports;
  for (const auto& f : factors) {
    const std::vector<bool> s = support(f);
    if (!out.empty() && f.simultaneous_group >= 0 && out.back().simultaneous_group == f.simultaneous_group &&
        f.modes() == out.back().modes() && disjoint(supports.back(), s)) {
      SOSFactor& g = out.back();
      g.mu = g.mu * f.mu;
      g.J = g.J + f.J;
      if (g.sector != f.sector) g.sector += "+" + f.sector;
      for (std::size_t i = 0; i < s.size(); ++i) supports.back()[i] = supports.back()[i] || s[i];
      continue;
    }
    out.push_back(f);
    supports.push_back(s);
  }
  return out;
}

GivensLayer make_givens_layer(const Eigen::MatrixXcd& u) { return GivensLayer{givens_decompose(u), u}; }

ChargeLayer make_charge_layer(const Eigen::MatrixXcd& J) {
  const Eigen::Index n = J.rows();
  if (J.cols() != n) throw ShapeError("charge layer needs a square coupling matrix");
  const double norm = J.norm();
  if (J.real().norm() > 1e-10 * std::max(norm, 1e-300))
    throw Error("charge layer needs purely imaginary couplings (exp(sum J n n) must be a phase); "
                "for hermitian factors pass an evolution time");
  ChargeLayer layer;
  layer.phases = J.diagonal().imag();
  layer.rounds = charge_rounds(static_cast<std::size_t>(n));
  // Odd–even transposition network: logical modes swap on every coupling, so
  // after n rounds each pair has met exactly once.
  std::vector<int> line(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) line[i] = static_cast<int>(i);
  for (int round = 0; round < layer.rounds; ++round)
    for (Eigen::Index k = round % 2; k + 1 < n; k += 2) {
      const int p = std::min(line[k], line[k + 1]);
      const int q = std::max(line[k], line[k + 1]);
      layer.couplings.push_back({p, q, (J(p, q) + J(q, p)).imag(), round});
      std::swap(line[k], line[k + 1]);
    }
  return layer;
}

Eigen::MatrixXcd layer_unitary(const GivensLayer& g) { return network_unitary(g.network); }

CircuitIR merge_and_schedule(const std::vector<SOSFactor>& factors_in, const std::optional<OneBodyCorrection>& s_in,
                             const CompileOptions& options) {
  CircuitIR ir;
  if (!factors_in.empty()) ir.n = factors_in.front().modes();
  else if (s_in) ir.n = s_in->modes();
  for (const auto& f : factors_in)
    if (f.modes() != ir.n) throw ShapeError("factors have inconsistent mode counts");
  if (s_in && s_in->modes() != ir.n) throw ShapeError("one-body correction has the wrong size");
  const auto N = static_cast<Eigen::Index>(ir.n);

  std::vector<SOSFactor> factors = fuse_simultaneous(factors_in);
  std::optional<OneBodyCorrection> s = s_in;
  if (options.evolution_time) {
    const cplx scale(0.0, -*options.evolution_time);
    for (auto& f : factors) f.J *= scale;
    if (s) s->S *= scale;
  }
  Eigen::MatrixXcd closing = Eigen::MatrixXcd::Identity(N, N);
  if (s && s->S.norm() > 0) {
    if ((s->S + s->S.adjoint()).norm() > 1e-10 * s->S.norm())
      throw Error("one-body correction must be antihermitian so exp(-S) is unitary; "
                  "for hermitian operators pass an evolution time");
    closing = fock::exp_operator({0, -s->S}).mat;
  }

  auto add_givens = [&](const Eigen::MatrixXcd& u) { ir.layers.emplace_back(make_givens_layer(u)); };
  auto add_charge = [&](const Eigen::MatrixXcd& J) {
    ChargeLayer c = make_charge_layer(J);
    if (options.separate_phase_layers) {
      PhaseLayer p{c.phases};
      c.phases = Eigen::VectorXd::Zero(N);
      ir.layers.emplace_back(std::move(c));
      ir.layers.emplace_back(std::move(p));
    } else {
      ir.layers.emplace_back(std::move(c));
    }
  };

  const std::size_t L = factors.size();
  if (L == 0) {
    if (s && s->S.norm() > 0) add_givens(closing);
  } else if (options.merge) {
    add_givens(factors[0].mu.adjoint());
    for (std::size_t l = 0; l < L; ++l) {
      add_charge(factors[l].J);
      const Eigen::MatrixXcd next =
          l + 1 < L ? Eigen::MatrixXcd(factors[l + 1].mu.adjoint() * factors[l].mu) : Eigen::MatrixXcd(closing * factors[l].mu);
      add_givens(next);
    }
  } else {
    for (std::size_t l = 0; l < L; ++l) {
      add_givens(factors[l].mu.adjoint());
      add_charge(factors[l].J);
      add_givens(factors[l].mu);
    }
    if (s && s->S.norm() > 0) add_givens(closing);
  }

  // Each layer is booked to the most recent charge layer (the first factor
  // for anything before it).
  ir.stats.resize(L);
  for (std::size_t l = 0; l < L; ++l) ir.stats[l].factor_index = static_cast<int>(l);
  int depth = 0;
  std::size_t current = 0;
  bool seen_charge = false;
  for (const auto& layer : ir.layers) {
    int gates = 0;
    if (const auto* g = std::get_if<GivensLayer>(&layer)) {
      gates = static_cast<int>(g->network.rotations.size());
      depth += g->network.rounds;
    } else if (const auto* c = std::get_if<ChargeLayer>(&layer)) {
      if (seen_charge) ++current;
      seen_charge = true;
      gates = static_cast<int>(c->couplings.size());
      depth += c->rounds;
    }
    ir.gate_count += gates;
    if (current < L) {
      ir.stats[current].gate_count += gates;
      ir.stats[current].cumulative_depth = depth;
    }
  }
  ir.depth = depth;
  return ir;
}

}  // namespace sos
