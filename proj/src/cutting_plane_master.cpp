// Copyright 2026 The robust_ot Authors
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


#include "cutting_plane_master.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>

namespace robust_ot::internal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Barrier {
 public:
  Barrier(const std::vector<Cut>& cuts, std::size_t p, std::size_t q, double rx, double ry)
      : p_(p), q_(q), n_(p + q + 1), rx2_(rx * rx), ry2_(ry * ry) {
    a_.resize(static_cast<Eigen::Index>(cuts.size()), static_cast<Eigen::Index>(n_));
    c_.resize(static_cast<Eigen::Index>(cuts.size()));
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      for (std::size_t i = 0; i < p; ++i) a_(r, static_cast<Eigen::Index>(i)) = cuts[k].gx[i];
      for (std::size_t j = 0; j < q; ++j) {
        a_(r, static_cast<Eigen::Index>(p + j)) = cuts[k].gy[j];
      }
      a_(r, static_cast<Eigen::Index>(n_ - 1)) = -1.0;
      c_(r) = cuts[k].c;
    }
  }

  std::size_t size() const { return n_; }
  std::size_t inequality_count() const {
    return static_cast<std::size_t>(a_.rows()) + p_ + q_ + (p_ > 0) + (q_ > 0);
  }

  // Barrier change  F(z + alpha dz) - F(z)  for F = t s - sum log(-f),
  // accumulated term by term with log1p so it stays accurate when t s
  // dwarfs the change. +inf when the step leaves the strict interior.
  double change(const Eigen::VectorXd& z, const Eigen::VectorXd& dz, double alpha,
                double t) const {
    const auto last = static_cast<Eigen::Index>(n_ - 1);
    double v = t * alpha * dz(last);
    const Eigen::VectorXd slack = -(a_ * z + c_);
    const Eigen::VectorXd move = a_ * dz;
    for (Eigen::Index k = 0; k < slack.size(); ++k) {
      const double r = -alpha * move(k) / slack(k);
      if (!(r > -1.0)) return kInf;
      v -= std::log1p(r);
    }
    for (std::size_t i = 0; i < p_ + q_; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double r = alpha * dz(ii) / z(ii);
      if (!(r > -1.0)) return kInf;
      v -= std::log1p(r);
    }
    auto ball = [&](std::size_t off, std::size_t len, double r2) {
      if (len == 0) return 0.0;
      const auto o = static_cast<Eigen::Index>(off);
      const auto l = static_cast<Eigen::Index>(len);
      const Eigen::VectorXd d = z.segment(o, l).array() - 1.0;
      const Eigen::VectorXd step = alpha * dz.segment(o, l);
      const double slack0 = r2 - d.squaredNorm();
      const double r = -(2.0 * d.dot(step) + step.squaredNorm()) / slack0;
      if (!(r > -1.0)) return kInf;
      return -std::log1p(r);
    };
    v += ball(0, p_, rx2_);
    v += ball(p_, q_, ry2_);
    return v;
  }

  void derivatives(const Eigen::VectorXd& z, double t, Eigen::VectorXd* g,
                   Eigen::MatrixXd* h) const {
    const auto n = static_cast<Eigen::Index>(n_);
    g->setZero(n);
    h->setZero(n, n);
    (*g)(n - 1) = t;
    const Eigen::VectorXd inv = (-(a_ * z + c_)).cwiseInverse();
    *g += a_.transpose() * inv;
    *h += a_.transpose() * inv.cwiseAbs2().asDiagonal() * a_;
    for (std::size_t i = 0; i < p_ + q_; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      (*g)(ii) -= 1.0 / z(ii);
      (*h)(ii, ii) += 1.0 / (z(ii) * z(ii));
    }
    auto ball = [&](std::size_t off, std::size_t len, double r2) {
      if (len == 0) return;
      const auto o = static_cast<Eigen::Index>(off);
      const auto l = static_cast<Eigen::Index>(len);
      const Eigen::VectorXd d = z.segment(o, l).array() - 1.0;
      const double slack = r2 - d.squaredNorm();
      g->segment(o, l) += 2.0 * d / slack;
      h->block(o, o, l, l) += 4.0 * d * d.transpose() / (slack * slack);
      h->block(o, o, l, l).diagonal().array() += 2.0 / slack;
    };
    ball(0, p_, rx2_);
    ball(p_, q_, ry2_);
  }

  Eigen::VectorXd cut_values(const Eigen::VectorXd& z) const {
    Eigen::VectorXd zz = z;
    zz(static_cast<Eigen::Index>(n_ - 1)) = 0.0;
    return a_ * zz + c_;
  }

  Eigen::VectorXd slacks(const Eigen::VectorXd& z) const { return -(a_ * z + c_); }

 private:
  std::size_t p_, q_, n_;
  double rx2_, ry2_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd c_;
};

}  // namespace

MasterResult solve_master(const std::vector<Cut>& cuts, std::vector<double> x0,
                          std::vector<double> y0, double rx, double ry, double gap_target,
                          const std::function<double(const std::vector<double>&)>& bound) {
  MasterResult result;
  const std::size_t p = x0.size();
  const std::size_t q = y0.size();
  Barrier barrier(cuts, p, q, rx, ry);
  const auto n = static_cast<Eigen::Index>(barrier.size());
  const Eigen::Index eq = (p > 0) + (q > 0);

  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < p; ++i) z(static_cast<Eigen::Index>(i)) = x0[i];
  for (std::size_t j = 0; j < q; ++j) z(static_cast<Eigen::Index>(p + j)) = y0[j];
  z(n - 1) = 0.0;
  Eigen::VectorXd l0 = barrier.cut_values(z);
  const double top = l0.maxCoeff();
  const double scale = std::max({std::abs(top), l0.cwiseAbs().maxCoeff(), 1e-300});
  z(n - 1) = top + scale;

  // Null-space coordinates: column c moves z along e_pos[c] - e_neg[c]
  // (e_i - e_last inside each weight block), the final column moves s.
  const Eigen::Index nr = n - eq;
  std::vector<Eigen::Index> pos, neg;
  auto add_block = [&](std::size_t off, std::size_t len) {
    for (std::size_t i = 0; i + 1 < len; ++i) {
      pos.push_back(static_cast<Eigen::Index>(off + i));
      neg.push_back(static_cast<Eigen::Index>(off + len - 1));
    }
  };
  add_block(0, p);
  add_block(p, q);
  pos.push_back(n - 1);
  neg.push_back(-1);
  Eigen::MatrixXd hr(nr, nr);
  Eigen::VectorXd gr(nr);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  const double m_ineq = static_cast<double>(barrier.inequality_count());
  double t = 1.0 / scale;
  bool ok = true;

  for (int outer = 0; outer < 80; ++outer) {
    for (int newton = 0; newton < 60; ++newton) {
      barrier.derivatives(z, t, &g, &h);
      // Newton step on the null space of the sum constraints, with symmetric
      // diagonal scaling before the Cholesky solve (curvatures along active
      // cuts grow like t^2 while others stay O(1)).
      for (Eigen::Index c = 0; c < nr; ++c) {
        const Eigen::Index pc = pos[c], nc = neg[c];
        gr(c) = g(pc) - (nc >= 0 ? g(nc) : 0.0);
        for (Eigen::Index e = 0; e <= c; ++e) {
          const Eigen::Index pe = pos[e], ne = neg[e];
          double v = h(pc, pe);
          if (ne >= 0) v -= h(pc, ne);
          if (nc >= 0) v -= h(nc, pe);
          if (nc >= 0 && ne >= 0) v += h(nc, ne);
          hr(c, e) = v;
          hr(e, c) = v;
        }
      }
      const Eigen::VectorXd d = hr.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXd hs = d.asDiagonal() * hr * d.asDiagonal();
      Eigen::LLT<Eigen::MatrixXd> llt(hs);
      Eigen::VectorXd u;
      if (llt.info() == Eigen::Success) {
        u = llt.solve(-(d.asDiagonal() * gr));
      } else {
        u = hs.ldlt().solve(-(d.asDiagonal() * gr));
      }
      const Eigen::VectorXd ur = d.asDiagonal() * u;
      Eigen::VectorXd dz = Eigen::VectorXd::Zero(n);
      for (Eigen::Index c = 0; c < nr; ++c) {
        dz(pos[c]) += ur(c);
        if (neg[c] >= 0) dz(neg[c]) -= ur(c);
      }
      if (!dz.allFinite()) {
        ok = false;
        break;
      }
      const double decrement = -g.dot(dz);
      if (decrement <= 1e-10) break;
      double step = 1.0;
      double diff = barrier.change(z, dz, step, t);
      int halvings = 0;
      while (!(diff <= -0.25 * step * decrement) && halvings < 80) {
        step *= 0.5;
        diff = barrier.change(z, dz, step, t);
        ++halvings;
      }
      if (!(diff < kInf) || halvings == 80) break;
      z += step * dz;
    }
    if (!ok) break;
    // Multipliers read off the central point. Each stage is scored by the
    // caller's exact bound; deep stages lose digits to cancellation in the
    // slacks, so the best stage is kept rather than the last.
    const Eigen::VectorXd sl = barrier.slacks(z);
    std::vector<double> theta(cuts.size());
    double total = 0.0;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      theta[k] = 1.0 / (t * std::max(sl(static_cast<Eigen::Index>(k)), 1e-300));
      total += theta[k];
    }
    if (total > 0.0 && std::isfinite(total)) {
      for (double& th : theta) th /= total;
      const double lb = bound(theta);
      if (lb > result.lower_bound) {
        result.lower_bound = lb;
        result.theta = std::move(theta);
      }
    }
    if (m_ineq / t <= gap_target) break;
    t *= 8.0;
  }

  const Eigen::VectorXd lv = barrier.cut_values(z);
  result.x.resize(p);
  result.y.resize(q);
  for (std::size_t i = 0; i < p; ++i) result.x[i] = z(static_cast<Eigen::Index>(i));
  for (std::size_t j = 0; j < q; ++j) result.y[j] = z(static_cast<Eigen::Index>(p + j));
  result.value = lv.maxCoeff();
  result.ok = ok && z.allFinite();
  return result;
}

}  // namespace robust_ot::internal
