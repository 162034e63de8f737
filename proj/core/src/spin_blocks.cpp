#include "sos/spin_blocks.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <string>
#include <tuple>

#include "sos/decompositions.hpp"
#include "sos/error.hpp"

namespace sos {

namespace {

int spin_of(std::size_t P) { return static_cast<int>(P % 2); }

std::size_t spatial_of(std::size_t P) { return P / 2; }

void require_even(const CoeffTensor4& t) {
  if (t.modes() % 2) throw ShapeError("spin blocking needs an even number of spin-orbitals");
  if (t.convention() == Convention::PqrsLadder) throw ConventionError("spin blocking needs a charge-charge tensor");
}

std::string describe(std::size_t p, std::size_t s, std::size_t q, std::size_t r) {
  std::ostringstream os;
  os << "[" << p << "," << s << "," << q << "," << r << "]";
  return os.str();
}

}  // namespace

Sectors spin_sectors(std::size_t n_spatial) {
  Sectors s(2);
  for (std::size_t p = 0; p < n_spatial; ++p) {
    s[0].push_back(static_cast<int>(spin_orbital(p, 0)));
    s[1].push_back(static_cast<int>(spin_orbital(p, 1)));
  }
  return s;
}

ChargeChargeForm spin_canonicalize(const CoeffTensor4& t) {
  require_even(t);
  const std::size_t n = t.modes();
  CoeffTensor4 out(n, Convention::ChargeCharge);
  Eigen::MatrixXcd corr = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r) {
          const cplx v = t(p, s, q, r);
          if (v == 0.0) continue;
          const bool flip = spin_of(p) != spin_of(s) && spin_of(p) == spin_of(r) && spin_of(s) == spin_of(q);
          if (!flip) {
            out(p, s, q, r) += v;
            continue;
          }
          // E_ps E_qr = δ_sq E_pr − E_pr E_qs when p,r and s,q carry opposite spins.
          out(p, r, q, s) -= v;
          if (s == q) corr(p, r) -= v;
        }
  return {std::move(out), OneBodyCorrection{std::move(corr)}};
}

SpinBlockedSuperMatrix partition_by_sz(const CoeffTensor4& t, double tol) {
  require_even(t);
  const std::size_t n = t.modes();
  const std::size_t m = n / 2;
  const auto mm = static_cast<Eigen::Index>(m * m);
  SpinBlockedSuperMatrix out;
  out.n_spatial = m;
  out.A = Eigen::MatrixXcd::Zero(mm, mm);
  out.B = Eigen::MatrixXcd::Zero(mm, mm);
  out.C = Eigen::MatrixXcd::Zero(mm, mm);
  Eigen::MatrixXcd Bt = Eigen::MatrixXcd::Zero(mm, mm);
  const double scale = std::max(t.norm(), 1e-300);

  std::vector<std::tuple<double, std::string>> offenders;
  for (std::size_t P = 0; P < n; ++P)
    for (std::size_t S = 0; S < n; ++S)
      for (std::size_t Q = 0; Q < n; ++Q)
        for (std::size_t R = 0; R < n; ++R) {
          const cplx v = t(P, S, Q, R);
          if (v == 0.0) continue;
          if (spin_of(P) != spin_of(S) || spin_of(Q) != spin_of(R)) {
            if (std::abs(v) > tol * scale) offenders.emplace_back(std::abs(v), describe(P, S, Q, R));
            continue;
          }
          const auto row = static_cast<Eigen::Index>(spatial_of(P) * m + spatial_of(S));
          const auto col = static_cast<Eigen::Index>(spatial_of(Q) * m + spatial_of(R));
          const int a = spin_of(P), b = spin_of(Q);
          if (a == 0 && b == 0) out.A(row, col) = v;
          else if (a == 1 && b == 1) out.C(row, col) = v;
          else if (a == 0) out.B(row, col) = v;
          else Bt(row, col) = v;
        }
  if (!offenders.empty()) {
    std::sort(offenders.begin(), offenders.end(), [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
    std::ostringstream os;
    os << offenders.size() << " entries pair unlike spins (Sz-violating or uncanonicalized spin-flip terms); worst:";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, offenders.size()); ++i)
      os << " " << std::get<1>(offenders[i]) << "=" << std::get<0>(offenders[i]);
    throw SymmetryError(os.str());
  }
  const double mismatch = (Bt - out.B.transpose()).norm();
  if (mismatch > 1e-10 * scale) {
    std::ostringstream os;
    os << "the beta-alpha block is not the transpose of the alpha-beta block (|Bt - B^T| = " << mismatch
       << "); symmetrize the geminal matrix first";
    throw SymmetryError(os.str());
  }
  return out;
}

CoeffTensor4 block_tensor(const SpinBlockedSuperMatrix& s, SpinBlock which) {
  const std::size_t m = s.n_spatial;
  CoeffTensor4 t(2 * m, Convention::ChargeCharge);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t w = 0; w < m; ++w) {
          const auto row = static_cast<Eigen::Index>(p * m + q);
          const auto col = static_cast<Eigen::Index>(r * m + w);
          switch (which) {
            case SpinBlock::Alpha:
              t(spin_orbital(p, 0), spin_orbital(q, 0), spin_orbital(r, 0), spin_orbital(w, 0)) = s.A(row, col);
              break;
            case SpinBlock::Beta:
              t(spin_orbital(p, 1), spin_orbital(q, 1), spin_orbital(r, 1), spin_orbital(w, 1)) = s.C(row, col);
              break;
            case SpinBlock::Cross:
              t(spin_orbital(p, 0), spin_orbital(q, 0), spin_orbital(r, 1), spin_orbital(w, 1)) = s.B(row, col);
              t(spin_orbital(r, 1), spin_orbital(w, 1), spin_orbital(p, 0), spin_orbital(q, 0)) = s.B(row, col);
              break;
          }
        }
  return t;
}

CoeffTensor4 assemble(const SpinBlockedSuperMatrix& s) {
  return block_tensor(s, SpinBlock::Alpha) + block_tensor(s, SpinBlock::Beta) + block_tensor(s, SpinBlock::Cross);
}

BlockedDecomposition decompose_blocked(const SpinBlockedSuperMatrix& s, BlockMethod method,
                                       const CompressionConfig& config) {
  const std::size_t n = 2 * s.n_spatial;
  const Sectors both = spin_sectors(s.n_spatial);
  struct Part {
    SpinBlock block;
    Sectors sectors;
    const char* name;
  };
  const Part parts[3] = {{SpinBlock::Alpha, {both[0]}, "alpha"},
                         {SpinBlock::Beta, {both[1]}, "beta"},
                         {SpinBlock::Cross, both, "cross"}};

  auto run = [&](const Part& part) {
    const CoeffTensor4 t = block_tensor(s, part.block);
    std::pair<std::vector<SOSFactor>, std::optional<CompressionReport>> out;
    switch (method) {
      case BlockMethod::Takagi: out.first = takagi_sos(t, part.sectors); break;
      case BlockMethod::Svd: out.first = svd_sos(t, part.sectors); break;
      case BlockMethod::Uc: {
        CompressionResult r = greedy_compress(t, config, RotationSpace::sectors(n, part.sectors));
        out.first = std::move(r.factors);
        out.second = std::move(r.report);
        break;
      }
    }
    for (auto& f : out.first) f.sector = part.name;
    return out;
  };

  std::vector<std::future<std::pair<std::vector<SOSFactor>, std::optional<CompressionReport>>>> futures;
  for (const auto& part : parts) futures.push_back(std::async(std::launch::async, run, std::cref(part)));
  std::vector<SOSFactor> lists[3];
  BlockedDecomposition result;
  for (int i = 0; i < 3; ++i) {
    auto r = futures[i].get();
    lists[i] = std::move(r.first);
    if (r.second) result.reports.push_back(std::move(*r.second));
  }

  int group = 0;
  const std::size_t paired = std::max(lists[0].size(), lists[1].size());
  for (std::size_t k = 0; k < paired; ++k, ++group) {
    for (int side = 0; side < 2; ++side)
      if (k < lists[side].size()) {
        lists[side][k].simultaneous_group = group;
        result.factors.push_back(std::move(lists[side][k]));
      }
  }
  for (auto& f : lists[2]) {
    f.simultaneous_group = group++;
    result.factors.push_back(std::move(f));
  }
  return result;
}

}  // namespace sos
